#pragma once

#include <cmline/arith.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace cmline {

/// Truncated series sum c_e q^e with exponents in (1/d)Z.
///
/// Terms at exponents >= trunc_order() are unknown; an absent truncation means
/// the series is exact. Coefficient types need is_zero(), +, -, * and a
/// default value acting as zero.
template <class Coeff>
class PuiseuxSeries {
 public:
  PuiseuxSeries() = default;

  /// Exact constant.
  static PuiseuxSeries constant(const Coeff& c) {
    PuiseuxSeries s;
    if (!c.is_zero()) s.terms_.emplace(0, c);
    return s;
  }
  /// Exact monomial c q^e.
  static PuiseuxSeries monomial(const Coeff& c, mpq_class e) {
    e.canonicalize();
    PuiseuxSeries s;
    s.d_ = e.get_den().get_si();
    if (!c.is_zero()) s.terms_.emplace(e.get_num().get_si(), c);
    return s;
  }
  /// Unknown from `order` on, no known terms.
  static PuiseuxSeries big_o(mpq_class order) {
    order.canonicalize();
    PuiseuxSeries s;
    s.d_ = order.get_den().get_si();
    s.trunc_ = order;
    return s;
  }

  i64 denom() const { return d_; }
  bool is_exact() const { return !trunc_.has_value(); }
  const std::optional<mpq_class>& trunc_order() const { return trunc_; }
  std::size_t size() const { return terms_.size(); }

  /// Known terms as (exponent, coefficient), ascending.
  std::vector<std::pair<mpq_class, Coeff>> terms() const {
    std::vector<std::pair<mpq_class, Coeff>> out;
    for (const auto& [k, c] : terms_) out.emplace_back(exponent(k), c);
    return out;
  }

  /// Coefficient at e; throws if e lies in the unknown range.
  Coeff coefficient(const mpq_class& e) const {
    if (trunc_ && e >= *trunc_) throw std::out_of_range("coefficient beyond truncation order");
    mpq_class scaled = e * d_;
    if (scaled.get_den() != 1) return Coeff{};
    auto it = terms_.find(scaled.get_num().get_si());
    return it == terms_.end() ? Coeff{} : it->second;
  }

  /// Lowest exponent with a nonzero coefficient.
  std::optional<mpq_class> valuation() const {
    if (terms_.empty()) return std::nullopt;
    return exponent(terms_.begin()->first);
  }

  /// Lowest exponent that may be nonzero: the valuation, else the truncation,
  /// else none (exact zero).
  std::optional<mpq_class> lowest_possible() const {
    if (!terms_.empty()) return exponent(terms_.begin()->first);
    return trunc_;
  }

  /// No known nonzero term.
  bool is_zero_to_order() const { return terms_.empty(); }
  bool is_exact_zero() const { return terms_.empty() && !trunc_; }

  /// Drops terms at or beyond `order`.
  PuiseuxSeries truncated(const mpq_class& order) const {
    PuiseuxSeries s = *this;
    if (s.trunc_ && *s.trunc_ <= order) return s;
    s.set_trunc(order);
    return s;
  }

  /// Multiplication by q^e.
  PuiseuxSeries shifted(const mpq_class& e) const {
    PuiseuxSeries s = *this;
    s.rescale(lcm_den(s.d_, e));
    const i64 k = mpq_class(e * s.d_).get_num().get_si();
    std::map<i64, Coeff> moved;
    for (auto& [x, c] : s.terms_) moved.emplace(x + k, std::move(c));
    s.terms_ = std::move(moved);
    if (s.trunc_) s.trunc_ = *s.trunc_ + e;
    return s;
  }

  PuiseuxSeries scaled(const Coeff& c) const {
    PuiseuxSeries s;
    s.d_ = d_;
    s.trunc_ = trunc_;
    for (const auto& [k, v] : terms_) {
      Coeff p = v * c;
      if (!p.is_zero()) s.terms_.emplace(k, std::move(p));
    }
    return s;
  }

  friend PuiseuxSeries operator+(const PuiseuxSeries& x, const PuiseuxSeries& y) {
    const i64 d = std::lcm(x.d_, y.d_);
    PuiseuxSeries a = x, b = y;
    a.rescale(d);
    b.rescale(d);
    for (auto& [k, c] : b.terms_) {
      auto it = a.terms_.find(k);
      if (it == a.terms_.end()) a.terms_.emplace(k, std::move(c));
      else {
        it->second = it->second + c;
        if (it->second.is_zero()) a.terms_.erase(it);
      }
    }
    if (b.trunc_) a.set_trunc(a.trunc_ ? std::min(*a.trunc_, *b.trunc_) : *b.trunc_);
    else if (a.trunc_) a.set_trunc(*a.trunc_);
    return a;
  }
  friend PuiseuxSeries operator-(const PuiseuxSeries& x) {
    PuiseuxSeries s = x;
    for (auto& [k, c] : s.terms_) c = -c;
    return s;
  }
  friend PuiseuxSeries operator-(const PuiseuxSeries& x, const PuiseuxSeries& y) { return x + (-y); }

  /// Known below min(A + low(y), B + low(x)) for truncations A, B.
  friend PuiseuxSeries operator*(const PuiseuxSeries& x, const PuiseuxSeries& y) {
    const i64 d = std::lcm(x.d_, y.d_);
    PuiseuxSeries a = x, b = y;
    a.rescale(d);
    b.rescale(d);
    std::optional<mpq_class> t;
    auto bound = [&](const std::optional<mpq_class>& tr, const PuiseuxSeries& other) {
      if (!tr) return;
      auto low = other.lowest_possible();
      if (!low) return;  // exact zero factor
      mpq_class v = *tr + *low;
      t = t ? std::min(*t, v) : v;
    };
    bound(a.trunc_, b);
    bound(b.trunc_, a);
    PuiseuxSeries r;
    r.d_ = d;
    if (a.is_exact_zero() || b.is_exact_zero()) return r;
    std::optional<i64> limit;
    if (t) {
      mpq_class scaled = *t * d;
      // exponents k with k/d < t
      mpz_class c;
      mpz_cdiv_q(c.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
      limit = c.get_si();
    }
    for (const auto& [ka, ca] : a.terms_) {
      for (const auto& [kb, cb] : b.terms_) {
        const i64 k = ka + kb;
        if (limit && k >= *limit) break;
        Coeff p = ca * cb;
        auto it = r.terms_.find(k);
        if (it == r.terms_.end()) r.terms_.emplace(k, std::move(p));
        else it->second = it->second + p;
      }
    }
    for (auto it = r.terms_.begin(); it != r.terms_.end();) {
      if (it->second.is_zero()) it = r.terms_.erase(it);
      else ++it;
    }
    r.trunc_ = t;
    return r;
  }

  PuiseuxSeries& operator+=(const PuiseuxSeries& y) { return *this = *this + y; }
  PuiseuxSeries& operator-=(const PuiseuxSeries& y) { return *this = *this - y; }
  PuiseuxSeries& operator*=(const PuiseuxSeries& y) { return *this = *this * y; }

  /// Agreement of all coefficients below min of both truncations.
  friend bool operator==(const PuiseuxSeries& x, const PuiseuxSeries& y) {
    PuiseuxSeries diff = x - y;
    return diff.terms_.empty() && x.trunc_ == y.trunc_;
  }

  template <class Fmt>
  std::string to_string(Fmt fmt) const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
      if (!first) os << " + ";
      os << '(' << fmt(c) << ")*q^" << exponent(k).get_str();
      first = false;
    }
    if (trunc_) os << (first ? "" : " + ") << "O(q^" << trunc_->get_str() << ')';
    else if (first) os << '0';
    return os.str();
  }

 private:
  static i64 lcm_den(i64 d, const mpq_class& e) { return std::lcm(d, e.get_den().get_si()); }

  mpq_class exponent(i64 k) const {
    mpq_class e(k, d_);
    e.canonicalize();
    return e;
  }

  void rescale(i64 d) {
    if (d == d_) return;
    if (d % d_ != 0) throw std::logic_error("PuiseuxSeries: bad rescale");
    const i64 f = d / d_;
    std::map<i64, Coeff> moved;
    for (auto& [k, c] : terms_) moved.emplace(k * f, std::move(c));
    terms_ = std::move(moved);
    d_ = d;
  }

  void set_trunc(mpq_class t) {
    t.canonicalize();
    trunc_ = t;
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (exponent(it->first) >= t) it = terms_.erase(it);
      else ++it;
    }
  }

  i64 d_ = 1;
  std::map<i64, Coeff> terms_;
  std::optional<mpq_class> trunc_;
};

}  // namespace cmline
