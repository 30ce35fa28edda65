#pragma once

#include <cmline/arith.hpp>

#include <array>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace cmline {

/// 2x2 matrix [[a, b], [c, d]] over Q with positive determinant.
struct RationalMatrix {
  mpq_class a = 1, b = 0, c = 0, d = 1;

  RationalMatrix() = default;
  RationalMatrix(mpq_class a_, mpq_class b_, mpq_class c_, mpq_class d_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
    a.canonicalize();
    b.canonicalize();
    c.canonicalize();
    d.canonicalize();
  }

  static RationalMatrix identity() { return {}; }
  static RationalMatrix checked(mpq_class a, mpq_class b, mpq_class c, mpq_class d) {
    RationalMatrix m(std::move(a), std::move(b), std::move(c), std::move(d));
    if (m.det() <= 0) throw std::invalid_argument("matrix determinant must be positive");
    return m;
  }

  mpq_class det() const { return a * d - b * c; }

  RationalMatrix inverse() const {
    const mpq_class dt = det();
    if (dt == 0) throw std::domain_error("singular matrix");
    return {d / dt, -b / dt, -c / dt, a / dt};
  }

  friend RationalMatrix operator*(const RationalMatrix& x, const RationalMatrix& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend RationalMatrix operator*(const mpq_class& s, const RationalMatrix& m) {
    return {s * m.a, s * m.b, s * m.c, s * m.d};
  }
  friend bool operator==(const RationalMatrix& x, const RationalMatrix& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }

  std::string to_string() const {
    return "[[" + a.get_str() + "," + b.get_str() + "],[" + c.get_str() + "," + d.get_str() + "]]";
  }
};

/// The nonnegative delta with xZ + yZ = delta Z.
inline mpq_class gcd_q(const mpq_class& x, const mpq_class& y) {
  mpz_class num = gcd(mpz_class(x.get_num() * y.get_den()), mpz_class(y.get_num() * x.get_den()));
  mpq_class r(num, mpz_class(x.get_den() * y.get_den()));
  r.canonicalize();
  return r;
}

/// gcd(a, c)^2 / det.
inline mpq_class nlc(const RationalMatrix& m) {
  const mpq_class g = gcd_q(m.a, m.c);
  return g * g / m.det();
}

/// Class representative [[a, b], [0, 1]] with b in [0, 1).
struct NormalForm {
  mpq_class a;
  mpq_class b;
  friend bool operator==(const NormalForm& x, const NormalForm& y) { return x.a == y.a && x.b == y.b; }
  RationalMatrix matrix() const { return {a, b, 0, 1}; }
};

/// Fractional part in [0, 1).
inline mpq_class frac_q(const mpq_class& x) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return x - mpq_class(fl);
}

/// Clears the left column with a Bezout row operation from SL2(Z), then scales.
inline NormalForm normal_form(const RationalMatrix& m) {
  if (m.det() <= 0) throw std::invalid_argument("normal_form: determinant must be positive");
  const mpq_class delta = gcd_q(m.a, m.c);
  const mpq_class xs = m.a / delta, ys = m.c / delta;  // coprime integers
  auto [g, u, v] = ext_gcd(mpz_class(xs.get_num()), mpz_class(ys.get_num()));
  (void)g;
  // [[u, v], [-y/delta, x/delta]] * m
  const mpq_class top_b = mpq_class(u) * m.b + mpq_class(v) * m.d;
  const mpq_class bottom_d = -ys * m.b + xs * m.d;  // = det / delta > 0
  return {delta / bottom_d, frac_q(top_b / bottom_d)};
}

inline bool equivalent(const RationalMatrix& x, const RationalMatrix& y) { return normal_form(x) == normal_form(y); }

/// B with nlc(A1 B) != nlc(A2 B).
inline RationalMatrix separating_matrix(const RationalMatrix& a1, const RationalMatrix& a2) {
  if (equivalent(a1, a2)) throw std::invalid_argument("separating_matrix: matrices are equivalent");
  if (nlc(a1) != nlc(a2)) return RationalMatrix::identity();
  const RationalMatrix a1inv = a1.inverse();
  const RationalMatrix moved = a2 * a1inv;
  if (nlc(moved) != 1) return a1inv;
  const NormalForm nf = normal_form(moved);  // (1, b), b not integral
  const RationalMatrix b = a1inv * RationalMatrix(1, 0, -1 / nf.b, 1);
  if (nlc(a1 * b) == nlc(a2 * b)) throw std::logic_error("separating_matrix: construction failed");
  return b;
}

/// Index of the strictly largest value, if any.
inline std::optional<int> strict_maximum(const std::array<mpq_class, 3>& v) {
  for (int i = 0; i < 3; ++i) {
    bool ok = true;
    for (int j = 0; j < 3; ++j) {
      if (j != i && !(v[i] > v[j])) ok = false;
    }
    if (ok) return i;
  }
  return std::nullopt;
}

inline std::array<mpq_class, 3> nlc_values(const std::array<RationalMatrix, 3>& a, const RationalMatrix& b) {
  return {nlc(a[0] * b), nlc(a[1] * b), nlc(a[2] * b)};
}

/// B such that one of nlc(A_k B) strictly exceeds the other two.
inline RationalMatrix dominant_matrix(const RationalMatrix& a1, const RationalMatrix& a2, const RationalMatrix& a3) {
  const std::array<RationalMatrix, 3> a{a1, a2, a3};
  const std::array<NormalForm, 3> n{normal_form(a1), normal_form(a2), normal_form(a3)};
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (n[i] == n[j]) throw std::invalid_argument("dominant_matrix: matrices are not pairwise inequivalent");
    }
  }
  const std::array<mpq_class, 3> base{n[0].a, n[1].a, n[2].a};
  if (strict_maximum(base)) return RationalMatrix::identity();

  // Two of the a_k tie at the top; k is the remaining index.
  int i = 0, j = 1, k = 2;
  if (base[0] == base[2] && base[0] >= base[1]) {
    i = 0, j = 2, k = 1;
  } else if (base[1] == base[2] && base[1] >= base[0]) {
    i = 1, j = 2, k = 0;
  }
  const RationalMatrix nk_inv = n[k].matrix().inverse();
  const mpq_class c = base[i] / base[k];
  const RationalMatrix m = nk_inv * RationalMatrix(1 / c, 0, 0, 1);
  const mpq_class bi = (n[i].matrix() * m).b, bj = (n[j].matrix() * m).b;
  const mpq_class b1 = (bi.get_den() != 1) ? bi : bj;
  if (b1.get_den() == 1) throw std::logic_error("dominant_matrix: no non-integral translation");
  const RationalMatrix b = m * RationalMatrix(1, 0, -1 / b1, 1);
  if (!strict_maximum(nlc_values(a, b))) throw std::logic_error("dominant_matrix: construction failed");
  return b;
}

/// The fixed triple I, [[1,1/2],[0,1]], [[4,0],[0,1]].
inline std::array<RationalMatrix, 3> example_triple() {
  return {RationalMatrix::identity(), RationalMatrix(1, mpq_class(1, 2), 0, 1), RationalMatrix(4, 0, 0, 1)};
}

/// At least two of nlc(A_k B) coincide for the fixed triple.
inline bool counterexample_audit(const RationalMatrix& b) {
  if (b.det() <= 0) throw std::invalid_argument("counterexample_audit: determinant must be positive");
  auto v = nlc_values(example_triple(), b);
  return v[0] == v[1] || v[0] == v[2] || v[1] == v[2];
}

/// 2-adic valuation; zero maps to a large sentinel.
inline long ord2(const mpq_class& x) {
  if (x == 0) return 1L << 30;
  long e = 0;
  mpz_class n = x.get_num(), d = x.get_den();
  while (mpz_even_p(n.get_mpz_t())) {
    n /= 2;
    ++e;
  }
  while (mpz_even_p(d.get_mpz_t())) {
    d /= 2;
    --e;
  }
  return e;
}

/// Predicted equal pair (0-based) for the fixed triple: after scaling so that
/// c = 2, ord2(a) > 0 gives (1,2), ord2(a) = 0 gives (0,2), ord2(a) < 0 gives (0,1).
/// A matrix with c = 0 always has nlc(A_1 B) = nlc(A_2 B).
inline std::pair<int, int> example_predicted_pair(const RationalMatrix& b) {
  if (b.c == 0) return {0, 1};
  const mpq_class a = 2 * b.a / b.c;
  const long o = ord2(a);
  if (o > 0) return {1, 2};
  if (o == 0) return {0, 2};
  return {0, 1};
}

// ---------------------------------------------------------------------------
// Random generation for property tests.

inline RationalMatrix sl2z_s() { return {0, -1, 1, 0}; }
inline RationalMatrix sl2z_t() { return {1, 1, 0, 1}; }

/// Word of the given length in S, T, T^{-1}.
template <class Rng>
RationalMatrix random_sl2z_word(Rng& rng, int length) {
  std::uniform_int_distribution<int> pick(0, 2);
  RationalMatrix m;
  for (int i = 0; i < length; ++i) {
    int g = pick(rng);
    if (g == 0) m = m * sl2z_s();
    else if (g == 1) m = m * sl2z_t();
    else m = m * RationalMatrix(1, -1, 0, 1);
  }
  return m;
}

/// Nonzero rational with numerator and denominator bounded by `bound`.
template <class Rng>
mpq_class random_rational(Rng& rng, long bound, bool allow_zero = false) {
  std::uniform_int_distribution<long> num(-bound, bound), den(1, bound);
  for (;;) {
    long p = num(rng);
    if (p == 0 && !allow_zero) continue;
    mpq_class q(p, den(rng));
    q.canonicalize();
    return q;
  }
}

/// Random matrix with positive determinant and bounded entries.
template <class Rng>
RationalMatrix random_matrix(Rng& rng, long bound) {
  for (;;) {
    RationalMatrix m(random_rational(rng, bound, true), random_rational(rng, bound, true),
                     random_rational(rng, bound, true), random_rational(rng, bound, true));
    const mpq_class dt = m.det();
    if (dt > 0) return m;
    if (dt < 0) return {m.b, m.a, m.d, m.c};  // column swap flips the sign
  }
}

}  // namespace cmline
