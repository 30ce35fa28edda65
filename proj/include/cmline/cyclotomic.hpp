#pragma once

#include <cmline/arith.hpp>

#include <algorithm>
#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmline {

/// e^{2 pi i k/n}, stored with gcd(k, n) = 1 and 0 <= k < n.
struct RootOfUnity {
  i64 order = 1;
  i64 exponent = 0;

  RootOfUnity() = default;
  RootOfUnity(i64 n, i64 k) {
    if (n <= 0) throw std::invalid_argument("RootOfUnity: order must be positive");
    k = mod_floor(k, n);
    i64 g = std::gcd(k, n);
    order = n / g;
    exponent = k / g;
  }
  /// e^{2 pi i mu} for rational mu.
  static RootOfUnity from_fraction(const mpq_class& mu) {
    mpq_class m = mu;
    m.canonicalize();
    if (!m.get_den().fits_slong_p()) throw std::invalid_argument("RootOfUnity: order too large");
    const i64 n = m.get_den().get_si();
    mpz_class k = m.get_num() % n;
    return RootOfUnity(n, k.get_si());
  }
  static RootOfUnity one() { return {}; }
  static RootOfUnity minus_one() { return {2, 1}; }

  mpq_class fraction() const { return mpq_class(exponent, order); }
  bool is_one() const { return order == 1; }

  RootOfUnity inverse() const { return {order, -exponent}; }
  RootOfUnity negated() const { return *this * minus_one(); }
  RootOfUnity pow(i64 e) const {
    i128 k = static_cast<i128>(exponent) * (e % order);
    return {order, static_cast<i64>(k % order)};
  }
  friend RootOfUnity operator*(const RootOfUnity& x, const RootOfUnity& y) {
    const i64 l = lcm64(x.order, y.order);
    return {l, x.exponent * (l / x.order) + y.exponent * (l / y.order)};
  }
  friend RootOfUnity operator-(const RootOfUnity& x) { return x.negated(); }
  friend auto operator<=>(const RootOfUnity&, const RootOfUnity&) = default;

  std::string to_string() const {
    if (order == 1) return "1";
    if (order == 2) return "-1";
    return "zeta" + std::to_string(order) + "^" + std::to_string(exponent);
  }
};

namespace detail {

/// Data for Q(zeta_n): the cyclotomic polynomial and zeta^e mod Phi_n, 0 <= e < n.
struct CycloField {
  i64 n = 1;
  i64 phi = 1;
  std::vector<i64> poly;  // Phi_n, ascending, monic, size phi+1
  std::vector<i64> pow;   // n rows of phi entries

  const i64* row(i64 e) const { return pow.data() + static_cast<std::size_t>(mod_floor(e, n) * phi); }
};

inline i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("cyclotomic: coefficient overflow");
  return r;
}

inline i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("cyclotomic: coefficient overflow");
  return r;
}

// Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)}: multiply first, then divide exactly.
inline std::vector<i64> cyclotomic_polynomial(i64 n) {
  std::vector<i64> p{1};
  std::vector<i64> denominators;
  for (i64 d : divisors(n)) {
    int mu = moebius(n / d);
    if (mu == 1) {
      std::vector<i64> r(p.size() + static_cast<std::size_t>(d), 0);
      for (std::size_t i = 0; i < p.size(); ++i) {
        r[i + static_cast<std::size_t>(d)] = checked_add(r[i + static_cast<std::size_t>(d)], p[i]);
        r[i] = checked_add(r[i], -p[i]);
      }
      p = std::move(r);
    } else if (mu == -1) {
      denominators.push_back(d);
    }
  }
  for (i64 d : denominators) {
    // long division by x^d - 1, top down
    const i64 top = static_cast<i64>(p.size()) - 1;
    std::vector<i64> q(static_cast<std::size_t>(top - d + 1), 0);
    std::vector<i64> rem = p;
    for (i64 i = top; i >= d; --i) {
      const i64 c = rem[static_cast<std::size_t>(i)];
      q[static_cast<std::size_t>(i - d)] = c;
      rem[static_cast<std::size_t>(i)] = 0;
      rem[static_cast<std::size_t>(i - d)] = checked_add(rem[static_cast<std::size_t>(i - d)], c);
    }
    for (i64 i = 0; i < d; ++i) {
      if (rem[static_cast<std::size_t>(i)] != 0) throw std::logic_error("cyclotomic_polynomial: inexact division");
    }
    p = std::move(q);
  }
  return p;
}

inline std::unique_ptr<CycloField> build_field(i64 n) {
  auto f = std::make_unique<CycloField>();
  f->n = n;
  f->poly = cyclotomic_polynomial(n);
  f->phi = static_cast<i64>(f->poly.size()) - 1;
  const std::size_t phi = static_cast<std::size_t>(f->phi);
  f->pow.assign(static_cast<std::size_t>(n) * phi, 0);
  if (phi == 0) throw std::logic_error("build_field: degenerate cyclotomic polynomial");
  std::vector<i64> cur(phi, 0);
  cur[0] = 1;
  for (i64 e = 0; e < n; ++e) {
    std::copy(cur.begin(), cur.end(), f->pow.begin() + static_cast<long>(static_cast<std::size_t>(e) * phi));
    // cur *= x mod Phi
    i64 top = cur[phi - 1];
    for (std::size_t i = phi - 1; i > 0; --i) cur[i] = cur[i - 1];
    cur[0] = 0;
    if (top != 0) {
      for (std::size_t i = 0; i < phi; ++i) cur[i] = checked_add(cur[i], -checked_mul(top, f->poly[i]));
    }
  }
  return f;
}

struct FieldRegistry {
  std::mutex mu;
  std::map<i64, std::unique_ptr<CycloField>> fields;
};

inline FieldRegistry& field_registry() {
  static FieldRegistry r;
  return r;
}

}  // namespace detail

/// Cached data for Q(zeta_n); safe to call concurrently.
inline const detail::CycloField& cyclotomic_field(i64 n) {
  if (n <= 0) throw std::invalid_argument("cyclotomic_field: order must be positive");
  auto& reg = detail::field_registry();
  std::lock_guard<std::mutex> lock(reg.mu);
  auto it = reg.fields.find(n);
  if (it == reg.fields.end()) it = reg.fields.emplace(n, detail::build_field(n)).first;
  return *it->second;
}

inline std::vector<i64> cyclotomic_polynomial(i64 n) { return cyclotomic_field(n).poly; }

/// Exact element of Q(zeta_N) in the power basis 1, zeta, ..., zeta^{phi(N)-1}.
///
/// Stored as an integer numerator vector over a positive common denominator in
/// lowest terms, so equal values at equal order have equal representations.
/// Mixed-order operations embed both sides into Q(zeta_lcm).
class CyclotomicNumber {
 public:
  CyclotomicNumber() : n_(1), num_(1, 0), den_(1) {}
  CyclotomicNumber(const mpq_class& q, i64 n = 1) : n_(n), den_(1) {  // NOLINT: implicit from rationals
    num_.assign(static_cast<std::size_t>(cyclotomic_field(n).phi), 0);
    num_[0] = q.get_num();
    den_ = q.get_den();
  }
  CyclotomicNumber(long v) : CyclotomicNumber(mpq_class(v)) {}  // NOLINT

  static CyclotomicNumber zeta(i64 n, i64 k = 1) {
    const auto& f = cyclotomic_field(n);
    CyclotomicNumber r;
    r.n_ = n;
    const i64* row = f.row(k);
    r.num_.assign(row, row + f.phi);
    return r;
  }
  static CyclotomicNumber embed(const RootOfUnity& r) { return zeta(r.order, r.exponent); }

  i64 order() const { return n_; }
  const std::vector<mpz_class>& numerators() const { return num_; }
  const mpz_class& denominator() const { return den_; }

  std::vector<mpq_class> coords() const {
    std::vector<mpq_class> out;
    out.reserve(num_.size());
    for (const auto& c : num_) {
      mpq_class q(c, den_);
      q.canonicalize();
      out.push_back(q);
    }
    return out;
  }

  bool is_zero() const {
    return std::all_of(num_.begin(), num_.end(), [](const mpz_class& c) { return c == 0; });
  }
  bool is_rational() const {
    return std::all_of(num_.begin() + 1, num_.end(), [](const mpz_class& c) { return c == 0; });
  }
  std::optional<mpq_class> rational_value() const {
    if (!is_rational()) return std::nullopt;
    mpq_class q(num_[0], den_);
    q.canonicalize();
    return q;
  }
  /// Algebraic integer iff all power-basis coordinates are integers.
  bool is_integral() const { return den_ == 1; }

  /// Same value in Q(zeta_m); requires order() | m.
  CyclotomicNumber embed_into(i64 m) const {
    if (m % n_ != 0) throw std::invalid_argument("embed_into: order does not divide target");
    if (m == n_) return *this;
    const auto& f = cyclotomic_field(m);
    const i64 step = m / n_;
    CyclotomicNumber r;
    r.n_ = m;
    r.num_.assign(static_cast<std::size_t>(f.phi), 0);
    r.den_ = den_;
    for (std::size_t i = 0; i < num_.size(); ++i) {
      if (num_[i] == 0) continue;
      add_row(r.num_, f.row(static_cast<i64>(i) * step), f.phi, num_[i]);
    }
    return r;
  }

  /// The automorphism zeta -> zeta^t, gcd(t, N) = 1.
  CyclotomicNumber galois(i64 t) const {
    if (std::gcd(mod_floor(t, n_), n_) != 1 && n_ > 1) throw std::invalid_argument("galois: t not a unit");
    const auto& f = cyclotomic_field(n_);
    CyclotomicNumber r;
    r.n_ = n_;
    r.num_.assign(num_.size(), 0);
    r.den_ = den_;
    for (std::size_t i = 0; i < num_.size(); ++i) {
      if (num_[i] == 0) continue;
      add_row(r.num_, f.row(static_cast<i64>(i) * t), f.phi, num_[i]);
    }
    return r;
  }

  friend CyclotomicNumber operator+(const CyclotomicNumber& x, const CyclotomicNumber& y) {
    if (x.n_ != y.n_) {
      const i64 l = lcm64(x.n_, y.n_);
      return x.embed_into(l) + y.embed_into(l);
    }
    CyclotomicNumber r;
    r.n_ = x.n_;
    r.num_.resize(x.num_.size());
    if (x.den_ == y.den_) {
      for (std::size_t i = 0; i < r.num_.size(); ++i) r.num_[i] = x.num_[i] + y.num_[i];
      r.den_ = x.den_;
    } else {
      for (std::size_t i = 0; i < r.num_.size(); ++i) r.num_[i] = x.num_[i] * y.den_ + y.num_[i] * x.den_;
      r.den_ = x.den_ * y.den_;
    }
    r.normalize();
    return r;
  }
  friend CyclotomicNumber operator-(const CyclotomicNumber& x) {
    CyclotomicNumber r = x;
    for (auto& c : r.num_) c = -c;
    return r;
  }
  friend CyclotomicNumber operator-(const CyclotomicNumber& x, const CyclotomicNumber& y) { return x + (-y); }

  friend CyclotomicNumber operator*(const CyclotomicNumber& x, const CyclotomicNumber& y) {
    if (x.n_ != y.n_) {
      const i64 l = lcm64(x.n_, y.n_);
      return x.embed_into(l) * y.embed_into(l);
    }
    const auto& f = cyclotomic_field(x.n_);
    const std::size_t phi = static_cast<std::size_t>(f.phi);
    std::vector<mpz_class> full(2 * phi - 1, 0);
    for (std::size_t i = 0; i < phi; ++i) {
      if (x.num_[i] == 0) continue;
      for (std::size_t j = 0; j < phi; ++j) {
        if (y.num_[j] == 0) continue;
        mpz_addmul(full[i + j].get_mpz_t(), x.num_[i].get_mpz_t(), y.num_[j].get_mpz_t());
      }
    }
    CyclotomicNumber r;
    r.n_ = x.n_;
    r.num_.assign(full.begin(), full.begin() + static_cast<long>(phi));
    for (std::size_t e = phi; e < full.size(); ++e) {
      if (full[e] != 0) add_row(r.num_, f.row(static_cast<i64>(e)), f.phi, full[e]);
    }
    r.den_ = x.den_ * y.den_;
    r.normalize();
    return r;
  }

  /// Multiplicative inverse via the extended Euclidean algorithm over Q[x].
  CyclotomicNumber inverse() const {
    if (is_zero()) throw std::domain_error("CyclotomicNumber: division by zero");
    if (auto q = rational_value()) {
      CyclotomicNumber r(1 / *q);
      return r.embed_into(n_);
    }
    using Poly = std::vector<mpq_class>;
    auto trim = [](Poly& p) {
      while (!p.empty() && p.back() == 0) p.pop_back();
    };
    const auto& f = cyclotomic_field(n_);
    Poly r0(f.poly.begin(), f.poly.end());
    Poly r1;
    for (const auto& c : num_) r1.emplace_back(c, den_);
    for (auto& c : r1) c.canonicalize();
    trim(r1);
    Poly s0, s1{mpq_class(1)};
    while (r1.size() > 1) {
      // r0 = q r1 + rem
      Poly q(r0.size() - r1.size() + 1, 0);
      Poly rem = r0;
      const mpq_class lead = r1.back();
      const i64 dr = static_cast<i64>(r1.size()) - 1;
      for (i64 i = static_cast<i64>(rem.size()) - 1; i >= dr; --i) {
        if (rem[static_cast<std::size_t>(i)] == 0) continue;
        const mpq_class c = rem[static_cast<std::size_t>(i)] / lead;
        const std::size_t shift = static_cast<std::size_t>(i - dr);
        q[shift] = c;
        for (std::size_t j = 0; j < r1.size(); ++j) rem[shift + j] -= c * r1[j];
      }
      trim(rem);
      Poly s2(std::max(s0.size(), q.size() + s1.size()), 0);
      for (std::size_t i = 0; i < s0.size(); ++i) s2[i] += s0[i];
      for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] == 0) continue;
        for (std::size_t j = 0; j < s1.size(); ++j) s2[i + j] -= q[i] * s1[j];
      }
      trim(s2);
      r0 = std::move(r1);
      r1 = std::move(rem);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
    if (r1.empty()) throw std::logic_error("CyclotomicNumber: non-invertible element");
    // s1 * x = r1[0] mod Phi
    const mpq_class c = r1[0];
    CyclotomicNumber out;
    out.n_ = n_;
    out.num_.assign(static_cast<std::size_t>(f.phi), 0);
    // Reduce s1 / c mod Phi, clearing denominators first.
    mpz_class common = 1;
    for (const auto& t : s1) common = lcm(common, mpz_class(t.get_den()));
    std::vector<mpz_class> ints;
    for (const auto& t : s1) ints.push_back(mpz_class(t * common));
    for (std::size_t e = 0; e < ints.size(); ++e) {
      if (ints[e] == 0) continue;
      if (static_cast<i64>(e) < f.phi) out.num_[e] += ints[e];
      else add_row(out.num_, f.row(static_cast<i64>(e)), f.phi, ints[e]);
    }
    // divide by c * common
    mpq_class scale = c * common;
    for (auto& t : out.num_) t *= scale.get_den();
    out.den_ = scale.get_num();
    if (out.den_ < 0) {
      out.den_ = -out.den_;
      for (auto& t : out.num_) t = -t;
    }
    out.normalize();
    return out;
  }

  friend CyclotomicNumber operator/(const CyclotomicNumber& x, const CyclotomicNumber& y) {
    return x * y.inverse();
  }
  CyclotomicNumber& operator+=(const CyclotomicNumber& y) { return *this = *this + y; }
  CyclotomicNumber& operator-=(const CyclotomicNumber& y) { return *this = *this - y; }
  CyclotomicNumber& operator*=(const CyclotomicNumber& y) { return *this = *this * y; }

  CyclotomicNumber pow(i64 e) const {
    if (e < 0) return inverse().pow(-e);
    CyclotomicNumber r = CyclotomicNumber(1).embed_into(n_), b = *this;
    while (e) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  }

  friend bool operator==(const CyclotomicNumber& x, const CyclotomicNumber& y) {
    if (x.n_ != y.n_) {
      const i64 l = lcm64(x.n_, y.n_);
      return x.embed_into(l) == y.embed_into(l);
    }
    return x.den_ == y.den_ && x.num_ == y.num_;
  }

  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < num_.size(); ++i) {
      if (num_[i] == 0) continue;
      mpq_class c(num_[i], den_);
      c.canonicalize();
      if (!first) os << (c > 0 ? " + " : " - ");
      else if (c < 0) os << '-';
      mpq_class a = abs(c);
      if (i == 0) os << a;
      else {
        if (a != 1) os << a << '*';
        os << "z" << n_;
        if (i > 1) os << '^' << i;
      }
      first = false;
    }
    if (first) os << '0';
    return os.str();
  }

 private:
  static void add_row(std::vector<mpz_class>& acc, const i64* row, i64 phi, const mpz_class& c) {
    for (i64 j = 0; j < phi; ++j) {
      if (row[j] == 0) continue;
      if (row[j] > 0) mpz_addmul_ui(acc[static_cast<std::size_t>(j)].get_mpz_t(), c.get_mpz_t(),
                                    static_cast<unsigned long>(row[j]));
      else mpz_submul_ui(acc[static_cast<std::size_t>(j)].get_mpz_t(), c.get_mpz_t(),
                         static_cast<unsigned long>(-row[j]));
    }
  }

  void normalize() {
    if (den_ == 1) return;
    mpz_class g = den_;
    for (const auto& c : num_) {
      if (g == 1) break;
      if (c != 0) g = gcd(g, c);
    }
    if (is_zero()) {
      den_ = 1;
      return;
    }
    if (g != 1) {
      for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    }
  }

  i64 n_;
  std::vector<mpz_class> num_;
  mpz_class den_;
};

inline CyclotomicNumber embed(const RootOfUnity& r) { return CyclotomicNumber::embed(r); }

/// Returns the root if x is a root of unity; the torsion of Q(zeta_N)^x is
/// {+-zeta_N^e}, so 2N candidates are compared.
inline std::optional<RootOfUnity> is_root_of_unity(const CyclotomicNumber& x) {
  if (!x.is_integral()) return std::nullopt;
  const i64 n = x.order();
  const auto& f = cyclotomic_field(n);
  const auto& v = x.numerators();
  for (i64 e = 0; e < n; ++e) {
    const i64* row = f.row(e);
    bool plus = true, minus = true;
    for (i64 j = 0; j < f.phi && (plus || minus); ++j) {
      if (v[static_cast<std::size_t>(j)] != row[j]) plus = false;
      if (v[static_cast<std::size_t>(j)] != -row[j]) minus = false;
    }
    if (plus) return RootOfUnity(n, e);
    if (minus) return RootOfUnity(2 * n, 2 * e + n);
  }
  return std::nullopt;
}

/// Distinct Galois conjugates of x, stopping once more than `cap` are found.
inline std::vector<CyclotomicNumber> galois_orbit(const CyclotomicNumber& x, i64 cap = -1) {
  std::vector<CyclotomicNumber> orbit{x};
  const i64 n = x.order();
  for (i64 t = 2; t < n; ++t) {
    if (std::gcd(t, n) != 1) continue;
    CyclotomicNumber y = x.galois(t);
    if (std::find(orbit.begin(), orbit.end(), y) == orbit.end()) {
      orbit.push_back(std::move(y));
      if (cap >= 0 && static_cast<i64>(orbit.size()) > cap) break;
    }
  }
  return orbit;
}

/// Degree of x over Q, the size of its Galois orbit.
inline i64 minimal_degree(const CyclotomicNumber& x) { return static_cast<i64>(galois_orbit(x).size()); }

/// minimal_degree(x) <= k, with early exit.
inline bool minimal_degree_at_most(const CyclotomicNumber& x, i64 k) {
  return static_cast<i64>(galois_orbit(x, k).size()) <= k;
}

/// Rational coefficients of the minimal polynomial of x, constant term first.
inline std::vector<mpq_class> minimal_polynomial(const CyclotomicNumber& x) {
  auto orbit = galois_orbit(x);
  std::vector<CyclotomicNumber> poly{CyclotomicNumber(1)};
  for (const auto& r : orbit) {
    std::vector<CyclotomicNumber> next(poly.size() + 1, CyclotomicNumber(0));
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] += poly[i];
      next[i] -= poly[i] * r;
    }
    poly = std::move(next);
  }
  std::vector<mpq_class> out;
  for (const auto& c : poly) {
    auto q = c.rational_value();
    if (!q) throw std::logic_error("minimal_polynomial: non-rational coefficient");
    out.push_back(*q);
  }
  return out;
}

/// alpha = sum of roots; the statement "N | alpha implies alpha = 0 or k >= |N|"
/// holds on this instance.
inline bool divisibility_bound_check(const std::vector<RootOfUnity>& roots, i64 N) {
  if (N == 0) throw std::invalid_argument("divisibility_bound_check: N must be nonzero");
  CyclotomicNumber alpha(0);
  for (const auto& r : roots) alpha += embed(r);
  if (alpha.is_zero()) return true;
  CyclotomicNumber beta = alpha * CyclotomicNumber(mpq_class(1, N));
  if (!beta.is_integral()) return true;
  return static_cast<i64>(roots.size()) >= (N < 0 ? -N : N);
}

// ---------------------------------------------------------------------------
// Two-term sums a*eta + b*theta of degree at most 2.

enum class QuadField { Q, Qi, QsqrtM2, QsqrtM3, Qsqrt2, Qsqrt3, Qsqrt5, Other };

inline std::string to_string(QuadField f) {
  switch (f) {
    case QuadField::Q: return "Q";
    case QuadField::Qi: return "Q(i)";
    case QuadField::QsqrtM2: return "Q(sqrt(-2))";
    case QuadField::QsqrtM3: return "Q(sqrt(-3))";
    case QuadField::Qsqrt2: return "Q(sqrt(2))";
    case QuadField::Qsqrt3: return "Q(sqrt(3))";
    case QuadField::Qsqrt5: return "Q(sqrt(5))";
    case QuadField::Other: return "other";
  }
  return "other";
}

struct TwoTermClassification {
  i64 degree = 0;
  bool quadratic = false;            // degree <= 2
  QuadField field = QuadField::Other;
  mpz_class squarefree = 1;          // Q(sqrt(squarefree)); 1 for Q
  std::string case_label;            // "1a" ... "7", empty when no case fits

  bool classified() const { return quadratic && field != QuadField::Other && !case_label.empty(); }
};

namespace detail {

inline QuadField field_of_squarefree(const mpz_class& d) {
  if (d == 1) return QuadField::Q;
  if (d == -1) return QuadField::Qi;
  if (d == -2) return QuadField::QsqrtM2;
  if (d == -3) return QuadField::QsqrtM3;
  if (d == 2) return QuadField::Qsqrt2;
  if (d == 3) return QuadField::Qsqrt3;
  if (d == 5) return QuadField::Qsqrt5;
  return QuadField::Other;
}

struct TwoTerm {
  mpq_class a;
  RootOfUnity eta;
  mpq_class b;
  RootOfUnity theta;
};

inline bool case_holds(const std::string& label, const TwoTerm& t) {
  const RootOfUnity& e = t.eta;
  const RootOfUnity& th = t.theta;
  const RootOfUnity i4(4, 1);
  if (label == "1a") return e.order <= 2 && th.order <= 2;
  if (label == "1b") return e.order == 3 && th == e.inverse() && t.a == t.b;
  if (label == "1c") return th == e.negated() && t.a == t.b;
  if (label == "2a") return e == i4 && (th.is_one() || th == i4);
  if (label == "2b") return e.order == 12 && th == e.inverse().negated() && t.a == t.b;
  if (label == "3") return e.order == 3 && (th.order == 1 || th.order == 3);
  if (label == "4") return e.order == 8 && th == e.inverse().negated() && t.a == t.b;
  if (label == "5") return e.order == 8 && th == e.inverse() && t.a == t.b;
  if (label == "6a") return e.order == 12 && th == e.inverse() && t.a == t.b;
  if (label == "6b") return e.order == 12 && th == e.pow(3).negated() && t.a == 2 * t.b;
  if (label == "7") return e.order == 5 && th == e.inverse() && t.a == t.b;
  return false;
}

inline QuadField field_of_case(const std::string& label) {
  if (label[0] == '1') return QuadField::Q;
  if (label[0] == '2') return QuadField::Qi;
  if (label == "3") return QuadField::QsqrtM3;
  if (label == "4") return QuadField::QsqrtM2;
  if (label == "5") return QuadField::Qsqrt2;
  if (label[0] == '6') return QuadField::Qsqrt3;
  return QuadField::Qsqrt5;
}

// The eight variants reachable by swapping the terms and negating either pair.
inline std::vector<TwoTerm> two_term_variants(const TwoTerm& t) {
  std::vector<TwoTerm> out;
  for (int swap = 0; swap < 2; ++swap) {
    TwoTerm base = swap ? TwoTerm{t.b, t.theta, t.a, t.eta} : t;
    for (int f1 = 0; f1 < 2; ++f1) {
      for (int f2 = 0; f2 < 2; ++f2) {
        TwoTerm v = base;
        if (f1) {
          v.a = -v.a;
          v.eta = v.eta.negated();
        }
        if (f2) {
          v.b = -v.b;
          v.theta = v.theta.negated();
        }
        out.push_back(v);
      }
    }
  }
  return out;
}

}  // namespace detail

inline const std::vector<std::string>& two_term_case_labels() {
  static const std::vector<std::string> labels{"1a", "1b", "1c", "2a", "2b", "3", "4", "5", "6a", "6b", "7"};
  return labels;
}

/// Identifies Q(a*eta + b*theta) and the first case 1a..7 that fits after the
/// allowed swap and sign changes.
inline TwoTermClassification classify_two_term(const mpq_class& a, const mpq_class& b, const RootOfUnity& eta,
                                               const RootOfUnity& theta) {
  if (a == 0 || b == 0) throw std::invalid_argument("classify_two_term: coefficients must be nonzero");
  TwoTermClassification out;
  CyclotomicNumber x = CyclotomicNumber(a) * embed(eta) + CyclotomicNumber(b) * embed(theta);
  auto orbit = galois_orbit(x, 2);
  if (orbit.size() > 2) {
    out.degree = minimal_degree(x);
    return out;
  }
  out.degree = static_cast<i64>(orbit.size());
  out.quadratic = true;
  if (out.degree == 1) {
    out.field = QuadField::Q;
    out.squarefree = 1;
  } else {
    // disc of the minimal polynomial is (x - x')^2
    CyclotomicNumber diff = orbit[0] - orbit[1];
    auto disc = (diff * diff).rational_value();
    if (!disc) throw std::logic_error("classify_two_term: non-rational discriminant");
    out.squarefree = squarefree_part(*disc);
    out.field = detail::field_of_squarefree(out.squarefree);
  }
  const auto variants = detail::two_term_variants({a, eta, b, theta});
  for (const auto& label : two_term_case_labels()) {
    if (detail::field_of_case(label) != out.field) continue;
    for (const auto& v : variants) {
      if (detail::case_holds(label, v)) {
        out.case_label = label;
        return out;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive audits.

/// All roots of unity of order at most max_order.
inline std::vector<RootOfUnity> roots_up_to(i64 max_order) {
  std::vector<RootOfUnity> out;
  for (i64 n = 1; n <= max_order; ++n) {
    for (i64 k = 0; k < n; ++k) {
      if (std::gcd(k, n) == 1) out.emplace_back(n, k);
    }
  }
  return out;
}

struct TwoTermAuditReport {
  i64 instances = 0;
  i64 low_degree = 0;
  i64 unclassified = 0;
  std::map<std::string, i64> by_case;
  std::map<std::string, i64> by_field;
  std::vector<std::string> failures;  // first few offending instances
};

inline std::vector<mpq_class> default_audit_coefficients() {
  return {mpq_class(1), mpq_class(-1), mpq_class(2), mpq_class(-2), mpq_class(1, 2), mpq_class(-1, 2),
          mpq_class(3), mpq_class(-3)};
}

/// Every a*eta + b*theta with lcm(ord eta, ord theta) <= max_order and a, b
/// from `coeffs`: whenever the degree is at most 2 a case must fit.
inline TwoTermAuditReport audit_two_term(i64 max_order = 30,
                                         const std::vector<mpq_class>& coeffs = default_audit_coefficients()) {
  TwoTermAuditReport rep;
  const auto roots = roots_up_to(max_order);
  for (const auto& eta : roots) {
    for (const auto& theta : roots) {
      const i64 l = lcm64(eta.order, theta.order);
      if (l > max_order) continue;
      const CyclotomicNumber ze = embed(eta).embed_into(l), zt = embed(theta).embed_into(l);
      for (const auto& a : coeffs) {
        for (const auto& b : coeffs) {
          ++rep.instances;
          CyclotomicNumber x = CyclotomicNumber(a).embed_into(l) * ze + CyclotomicNumber(b).embed_into(l) * zt;
          if (!minimal_degree_at_most(x, 2)) continue;
          ++rep.low_degree;
          auto c = classify_two_term(a, b, eta, theta);
          rep.by_field[to_string(c.field)]++;
          if (c.classified()) {
            rep.by_case[c.case_label]++;
          } else {
            ++rep.unclassified;
            if (rep.failures.size() < 20) {
              rep.failures.push_back("a=" + a.get_str() + " eta=" + eta.to_string() + " b=" + b.get_str() +
                                     " theta=" + theta.to_string() + " field=" + to_string(c.field));
            }
          }
        }
      }
    }
  }
  return rep;
}

struct ThreeRootAuditReport {
  i64 checked = 0;
  i64 vanishing = 0;
  i64 violations = 0;
};

/// 1 + u + v = 0 with u, v in mu_N, N <= max_order, forces {u, v} = {zeta3, zeta3^2};
/// dividing by one summand reduces any vanishing triple to this shape.
inline ThreeRootAuditReport audit_three_root_vanishing(i64 max_order = 30) {
  ThreeRootAuditReport rep;
  const auto roots = roots_up_to(max_order);
  const RootOfUnity w(3, 1), w2(3, 2);
  for (const auto& u : roots) {
    for (const auto& v : roots) {
      const i64 l = lcm64(u.order, v.order);
      if (l > max_order) continue;
      ++rep.checked;
      CyclotomicNumber s = CyclotomicNumber(1) + embed(u) + embed(v);
      if (!s.is_zero()) continue;
      ++rep.vanishing;
      bool ok = (u == w && v == w2) || (u == w2 && v == w);
      if (!ok) ++rep.violations;
    }
  }
  return rep;
}

struct DivisibilityAuditReport {
  i64 checked = 0;
  i64 divisible_nonzero = 0;  // instances where N | alpha and alpha != 0
  i64 violations = 0;
};

/// divisibility_bound_check over multisets of at most max_k roots drawn from
/// mu_M for each M <= max_order, and all 0 < |N| <= max_n.
inline DivisibilityAuditReport audit_divisibility(i64 max_order = 12, i64 max_k = 4, i64 max_n = 6) {
  DivisibilityAuditReport rep;
  for (i64 m = 1; m <= max_order; ++m) {
    std::vector<i64> idx;
    // multisets as non-decreasing exponent sequences
    std::function<void(i64)> rec = [&](i64 start) {
      if (!idx.empty()) {
        std::vector<RootOfUnity> roots;
        CyclotomicNumber alpha = CyclotomicNumber(0).embed_into(m);
        for (i64 e : idx) {
          roots.emplace_back(m, e);
          alpha += CyclotomicNumber::zeta(m, e);
        }
        for (i64 n = -max_n; n <= max_n; ++n) {
          if (n == 0) continue;
          ++rep.checked;
          if (!alpha.is_zero() && (alpha * CyclotomicNumber(mpq_class(1, n))).is_integral()) ++rep.divisible_nonzero;
          if (!divisibility_bound_check(roots, n)) ++rep.violations;
        }
      }
      if (static_cast<i64>(idx.size()) == max_k) return;
      for (i64 e = start; e < m; ++e) {
        idx.push_back(e);
        rec(e);
        idx.pop_back();
      }
    };
    rec(0);
  }
  return rep;
}

}  // namespace cmline
