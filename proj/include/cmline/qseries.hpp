#pragma once

#include <cmline/arith.hpp>
#include <cmline/cyclotomic.hpp>
#include <cmline/jfunction.hpp>
#include <cmline/puiseux.hpp>
#include <cmline/rational_matrices.hpp>
#include <cmline/table1.hpp>

#include <array>
#include <stdexcept>
#include <string>

namespace cmline {

/// z -> j(m z + mu) with twist e^{2 pi i mu}, or a rational singular modulus.
class JMap {
 public:
  enum class Kind { Constant, NonConstant };

  static JMap constant(const mpz_class& v) {
    if (!in_table1(v)) throw std::invalid_argument("JMap: constant " + v.get_str() + " is not a rational singular modulus");
    JMap f;
    f.kind_ = Kind::Constant;
    f.value_ = v;
    f.level_ = 0;
    return f;
  }
  static JMap nonconstant(const mpq_class& level, const RootOfUnity& twist) {
    if (level <= 0) throw std::invalid_argument("JMap: level must be positive");
    JMap f;
    f.kind_ = Kind::NonConstant;
    f.level_ = level;
    f.level_.canonicalize();
    f.twist_ = twist;
    return f;
  }
  /// z -> j(gamma z): level nlc(gamma), twist from the normal form's translation.
  static JMap from_matrix(const RationalMatrix& gamma) {
    NormalForm nf = normal_form(gamma);
    return nonconstant(nf.a, RootOfUnity::from_fraction(nf.b));
  }

  Kind kind() const { return kind_; }
  bool is_constant() const { return kind_ == Kind::Constant; }
  const mpz_class& value() const { return value_; }
  /// Level, with 0 for constants.
  const mpq_class& level() const { return level_; }
  const RootOfUnity& twist() const { return twist_; }

  friend bool operator==(const JMap& x, const JMap& y) {
    if (x.kind_ != y.kind_) return false;
    if (x.is_constant()) return x.value_ == y.value_;
    return x.level_ == y.level_ && x.twist_ == y.twist_;
  }
  /// Constants first by value, then by level, then by twist fraction.
  friend bool operator<(const JMap& x, const JMap& y) {
    if (x.kind_ != y.kind_) return x.is_constant();
    if (x.is_constant()) return x.value_ < y.value_;
    if (x.level_ != y.level_) return x.level_ < y.level_;
    return x.twist_.fraction() < y.twist_.fraction();
  }

  std::string to_string() const {
    if (is_constant()) return value_.get_str();
    std::string s = "j(" + level_.get_str() + "*z";
    if (!twist_.is_one()) s += "+" + twist_.fraction().get_str();
    return s + ")";
  }

 private:
  Kind kind_ = Kind::Constant;
  mpz_class value_ = 0;
  mpq_class level_ = 0;
  RootOfUnity twist_;
};

using JTriple = std::array<JMap, 3>;

// ---------------------------------------------------------------------------
// Coefficient contexts: how roots of unity and integers enter a coefficient ring.

struct CyclotomicContext {
  using Coeff = CyclotomicNumber;
  Coeff root(const RootOfUnity& r) const { return embed(r); }
  Coeff integer(const mpz_class& z) const { return CyclotomicNumber(mpq_class(z)); }
};

/// F_p with a fixed element of order K, so roots of order dividing K map
/// injectively.
struct ModContext {
  using Coeff = ModInt;
  u64 p = 0;
  u64 k = 1;
  u64 zeta = 1;

  static ModContext for_order(u64 k, int skip = 0) {
    ModContext c;
    c.k = k;
    c.p = prime_one_mod(k, skip);
    c.zeta = element_of_order(k, c.p);
    return c;
  }
  Coeff root(const RootOfUnity& r) const {
    if (k % static_cast<u64>(r.order) != 0) throw std::invalid_argument("ModContext: root order does not divide K");
    const u64 e = static_cast<u64>(r.exponent) * (k / static_cast<u64>(r.order));
    return ModInt(powmod(zeta, e, p), p);
  }
  Coeff integer(const mpz_class& z) const { return ModInt::from_mpz(z, p); }
};

namespace detail {

// f (or f - 744) known below `order`; tolerant of empty ranges.
template <class Ctx>
PuiseuxSeries<typename Ctx::Coeff> expand_raw(const Ctx& ctx, const JMap& f, const mpq_class& order, bool minus744) {
  using S = PuiseuxSeries<typename Ctx::Coeff>;
  if (f.is_constant()) {
    mpz_class v = f.value();
    if (minus744) v -= 744;
    return S::constant(ctx.integer(v));
  }
  const mpq_class& m = f.level();
  S s = S::big_o(order);
  // n m < order, n >= -1
  mpq_class ratio = order / m;
  mpz_class nmax;
  mpz_cdiv_q(nmax.get_mpz_t(), ratio.get_num_mpz_t(), ratio.get_den_mpz_t());
  const i64 top = nmax.get_si() - 1;  // largest n with n m < order
  if (top < -1) return s;
  const auto c = j_coefficients(static_cast<std::size_t>(std::max<i64>(top, 0) + 1));
  for (i64 n = -1; n <= top; ++n) {
    if (n == 0 && minus744) continue;
    const mpz_class& cn = c[static_cast<std::size_t>(n + 1)];
    s += S::monomial(ctx.integer(cn) * ctx.root(f.twist().pow(n)), m * n);
  }
  return s;
}

}  // namespace detail

/// q-expansion of f known below `order`, over the context's coefficient ring.
template <class Ctx>
PuiseuxSeries<typename Ctx::Coeff> expand_jmap_in(const Ctx& ctx, const JMap& f, const mpq_class& order,
                                                 bool minus744 = false) {
  if (!f.is_constant() && order <= -f.level()) {
    throw std::invalid_argument("expand_jmap: truncation order leaves no terms");
  }
  return detail::expand_raw(ctx, f, order, minus744);
}

inline PuiseuxSeries<CyclotomicNumber> expand_jmap(const JMap& f, const mpq_class& order) {
  return expand_jmap_in(CyclotomicContext{}, f, order);
}

inline mpq_class max_level(const JTriple& t) {
  return std::max({t[0].level(), t[1].level(), t[2].level()});
}

inline bool all_constant(const JTriple& f, const JTriple& g) {
  for (const auto& x : f) if (!x.is_constant()) return false;
  for (const auto& x : g) if (!x.is_constant()) return false;
  return true;
}

/// Rows (1,1,1), q^{m1}(f_k - 744), q^{n1}(g_k - 744); known below `order`.
template <class Ctx>
PuiseuxSeries<typename Ctx::Coeff> determinant_series_in(const Ctx& ctx, const JTriple& f, const JTriple& g,
                                                        const mpq_class& order) {
  using S = PuiseuxSeries<typename Ctx::Coeff>;
  if (all_constant(f, g)) throw std::invalid_argument("determinant_series: all six maps are constant");
  const mpq_class m1 = max_level(f), n1 = max_level(g);
  std::array<S, 3> F, G;
  for (int k = 0; k < 3; ++k) {
    F[k] = detail::expand_raw(ctx, f[k], order - m1, true).shifted(m1);
    G[k] = detail::expand_raw(ctx, g[k], order - n1, true).shifted(n1);
  }
  S d = F[1] * G[2] - F[2] * G[1] - F[0] * G[2] + F[2] * G[0] + F[0] * G[1] - F[1] * G[0];
  return d.truncated(order);
}

inline PuiseuxSeries<CyclotomicNumber> determinant_series(const JTriple& f, const JTriple& g, const mpq_class& order) {
  return determinant_series_in(CyclotomicContext{}, f, g, order);
}

/// The scaled difference q^{m1+n1}[(f1-f2)(g2-g3) - (f2-f3)(g1-g2)].
template <class Ctx>
PuiseuxSeries<typename Ctx::Coeff> double_product_series_in(const Ctx& ctx, const JTriple& f, const JTriple& g,
                                                            const mpq_class& order) {
  using S = PuiseuxSeries<typename Ctx::Coeff>;
  const mpq_class m1 = max_level(f), n1 = max_level(g);
  std::array<S, 3> F, G;
  for (int k = 0; k < 3; ++k) {
    F[k] = detail::expand_raw(ctx, f[k], order - m1, false);
    G[k] = detail::expand_raw(ctx, g[k], order - n1, false);
  }
  S p = (F[0] - F[1]) * (G[1] - G[2]) - (F[1] - F[2]) * (G[0] - G[1]);
  return p.shifted(m1 + n1);
}

/// Both formulations agree on every exponent known to both.
inline bool double_product_identity_check(const JTriple& f, const JTriple& g, const mpq_class& order) {
  CyclotomicContext ctx;
  auto d = determinant_series_in(ctx, f, g, order);
  auto p = double_product_series_in(ctx, f, g, order);
  mpq_class t = order;
  if (d.trunc_order()) t = std::min(t, *d.trunc_order());
  if (p.trunc_order()) t = std::min(t, *p.trunc_order());
  auto diff = d.truncated(t) - p.truncated(t);
  return diff.is_zero_to_order();
}

// ---------------------------------------------------------------------------

struct MainLemmaVerdict {
  enum class Kind { None, AllFEqual, AllGEqual, PairEqual, RowsEqual };
  Kind kind = Kind::None;
  int k = 0;  // 1-based pair for PairEqual
  int l = 0;

  bool holds() const { return kind != Kind::None; }
  friend bool operator==(const MainLemmaVerdict&, const MainLemmaVerdict&) = default;

  std::string to_string() const {
    switch (kind) {
      case Kind::None: return "None";
      case Kind::AllFEqual: return "AllFEqual";
      case Kind::AllGEqual: return "AllGEqual";
      case Kind::PairEqual: return "PairEqual(" + std::to_string(k) + "," + std::to_string(l) + ")";
      case Kind::RowsEqual: return "RowsEqual";
    }
    return "None";
  }
};

/// First disjunct that holds, in the order AllF, AllG, Pair(1,2), Pair(1,3), Pair(2,3), Rows.
inline MainLemmaVerdict main_lemma_conclusion(const JTriple& f, const JTriple& g) {
  using K = MainLemmaVerdict::Kind;
  if (f[0] == f[1] && f[1] == f[2]) return {K::AllFEqual, 0, 0};
  if (g[0] == g[1] && g[1] == g[2]) return {K::AllGEqual, 0, 0};
  static constexpr std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
  for (auto [k, l] : pairs) {
    if (f[k] == f[l] && g[k] == g[l]) return {K::PairEqual, k + 1, l + 1};
  }
  if (f[0] == g[0] && f[1] == g[1] && f[2] == g[2]) return {K::RowsEqual, 0, 0};
  return {};
}

}  // namespace cmline
