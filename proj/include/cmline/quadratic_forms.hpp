#pragma once

#include <cmline/arith.hpp>

#include <algorithm>
#include <compare>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmline {

/// Negative integer congruent to 0 or 1 mod 4.
inline bool is_discriminant(i64 d) { return d < 0 && (mod_floor(d, 4) == 0 || mod_floor(d, 4) == 1); }

/// Strong type for an imaginary quadratic discriminant.
class Discriminant {
 public:
  explicit Discriminant(i64 value) : value_(value) {
    if (!is_discriminant(value)) {
      throw std::invalid_argument("invalid discriminant " + std::to_string(value));
    }
  }
  i64 value() const { return value_; }
  i64 abs() const { return -value_; }
  friend auto operator<=>(const Discriminant&, const Discriminant&) = default;

 private:
  i64 value_;
};

/// Binary quadratic form a x^2 + b xy + c y^2. Reduced forms satisfy
/// (-a < b <= a < c) or (0 <= b <= a = c) with gcd(a, b, c) = 1.
struct ReducedForm {
  i64 a = 1;
  i64 b = 0;
  i64 c = 1;

  i64 discriminant() const { return b * b - 4 * a * c; }
  bool is_reduced() const {
    if (a <= 0 || c <= 0) return false;
    if (std::gcd(std::gcd(a, b), c) != 1) return false;
    return (-a < b && b <= a && a < c) || (0 <= b && b <= a && a == c);
  }
  friend auto operator<=>(const ReducedForm&, const ReducedForm&) = default;
  friend std::ostream& operator<<(std::ostream& os, const ReducedForm& f) {
    return os << '(' << f.a << ',' << f.b << ',' << f.c << ')';
  }
};

struct FormClassInfo {
  Discriminant discriminant;
  std::vector<ReducedForm> forms;
  i64 h() const { return static_cast<i64>(forms.size()); }
};

/// All reduced primitive forms of discriminant `disc`, sorted by (a, b, c).
inline std::vector<ReducedForm> reduced_forms(Discriminant disc) {
  const i64 d = disc.value();
  std::vector<ReducedForm> out;
  // a <= sqrt(|d|/3) for reduced forms
  for (i64 a = 1; 3 * a * a <= -d; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      if (mod_floor(b - d, 2) != 0) continue;
      i64 num = b * b - d;
      if (num % (4 * a) != 0) continue;
      i64 c = num / (4 * a);
      ReducedForm f{a, b, c};
      if (f.is_reduced()) out.push_back(f);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline FormClassInfo form_class_info(Discriminant disc) { return {disc, reduced_forms(disc)}; }

inline i64 class_number(Discriminant disc) { return static_cast<i64>(reduced_forms(disc).size()); }

/// The unique reduced form with a = 1.
inline ReducedForm principal_form(Discriminant disc) {
  i64 b = mod_floor(disc.value(), 2);
  return {1, b, (b * b - disc.value()) / 4};
}

/// Real part b/(2a) and imaginary part sqrt|D|/(2a) of tau(a,b,c), kept exact:
/// Im tau = sqrt(radicand) / denominator.
struct TauValue {
  mpq_class re;
  i64 radicand;
  i64 denominator;
};

inline TauValue tau_of_form(const ReducedForm& f, Discriminant disc) {
  return {mpq_class(f.b, 2 * f.a), disc.abs(), 2 * f.a};
}

/// Reduces a positive definite form (Gauss reduction loop).
inline ReducedForm reduce_form(i64 a, i64 b, i64 c) {
  if (a <= 0 || c <= 0) throw std::invalid_argument("reduce_form: form is not positive definite");
  auto normalize = [&]() {
    if (-a < b && b <= a) return;
    i64 r = floor_div(a - b, 2 * a);
    i64 nb = b + 2 * r * a;
    i64 nc = static_cast<i64>(static_cast<i128>(a) * r * r + static_cast<i128>(b) * r + c);
    b = nb;
    c = nc;
  };
  normalize();
  while (a > c) {
    i64 t = a;
    a = c;
    c = t;
    b = -b;
    normalize();
  }
  if (a == c && b < 0) b = -b;
  return {a, b, c};
}

/// Dirichlet composition of two forms of the same discriminant, reduced.
inline ReducedForm compose(const ReducedForm& f, const ReducedForm& g, Discriminant disc) {
  const i64 d = disc.value();
  if (f.discriminant() != d || g.discriminant() != d) {
    throw std::invalid_argument("compose: forms do not have the given discriminant");
  }
  ReducedForm f1 = f, f2 = g;
  if (f1.a > f2.a) std::swap(f1, f2);
  const i64 s = (f1.b + f2.b) / 2;
  const i64 n = f2.b - s;

  i64 y1, dd;
  if (f2.a % f1.a == 0) {
    y1 = 0;
    dd = f1.a;
  } else {
    auto [gg, u, v] = ext_gcd(f2.a, f1.a);
    (void)v;
    y1 = u;
    dd = gg;
  }
  i64 x2, y2, d1;
  if (s % dd == 0) {
    y2 = -1;
    x2 = 0;
    d1 = dd;
  } else {
    auto [gg, u, v] = ext_gcd(s, dd);
    x2 = u;
    y2 = -v;
    d1 = gg;
  }
  const i64 v1 = f1.a / d1;
  const i64 v2 = f2.a / d1;
  i128 rr = (static_cast<i128>(y1) * y2 % v1 * n - static_cast<i128>(x2) * f2.c) % v1;
  if (rr < 0) rr += v1;
  const i64 r = static_cast<i64>(rr);
  const i64 b3 = f2.b + 2 * v2 * r;
  const i64 a3 = v1 * v2;
  const i128 num = static_cast<i128>(b3) * b3 - d;
  if (num % (4 * a3) != 0) throw std::logic_error("compose: non-integral c");
  return reduce_form(a3, b3, static_cast<i64>(num / (4 * a3)));
}

/// Inverse class: (a, -b, c) reduced.
inline ReducedForm inverse_form(const ReducedForm& f) { return reduce_form(f.a, -f.b, f.c); }

/// True iff every class squares to the principal class.
inline bool class_group_is_two_elementary(Discriminant disc) {
  const ReducedForm e = principal_form(disc);
  for (const auto& f : reduced_forms(disc)) {
    if (compose(f, f, disc) != e) return false;
  }
  return true;
}

/// Pairs (D, h(D)) for all discriminants with |D| <= max_abs.
inline std::vector<std::pair<i64, i64>> class_numbers_up_to(i64 max_abs) {
  std::vector<std::pair<i64, i64>> out;
  for (i64 n = 3; n <= max_abs; ++n) {
    if (!is_discriminant(-n)) continue;
    out.emplace_back(-n, class_number(Discriminant(-n)));
  }
  return out;
}

}  // namespace cmline
