#pragma once

// Executable checks of the finitely verifiable lemmas about singular moduli.

#include <cmline/arith.hpp>
#include <cmline/bigfloat.hpp>
#include <cmline/cyclotomic.hpp>
#include <cmline/jfunction.hpp>
#include <cmline/quadratic_forms.hpp>
#include <cmline/table1.hpp>

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace cmline {

struct LemmaResult {
  std::string name;
  bool passed = false;
  std::string detail;  // first violation, or a short summary
  double seconds = 0;
  nlohmann::json data = nlohmann::json::object();

  nlohmann::json to_json() const {
    return {{"name", name}, {"passed", passed}, {"detail", detail}, {"seconds", seconds}, {"data", data}};
  }
};

struct SuiteConfig {
  PrecisionConfig precision{256, mpq_class(1, mpz_class(1) << 32)};
  i64 table1_max_disc = 1000;
  i64 class2_max_disc = 2000;
  i64 gaps_max_disc = 400;
  i64 bound_max_disc = 300;
  i64 lcute_max_n = 10000;
  i64 pluricyc_k_max = 3400000;
  const HcpCache* cache = nullptr;
};

struct SuiteReport {
  std::vector<LemmaResult> results;
  bool passed() const {
    return std::all_of(results.begin(), results.end(), [](const LemmaResult& r) { return r.passed; });
  }
  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results) arr.push_back(r.to_json());
    return {{"passed", passed()}, {"results", arr}};
  }
};

namespace detail {

inline LemmaResult timed(const std::string& name, const std::function<void(LemmaResult&)>& body) {
  LemmaResult r;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  body(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline BigFloat slack(const SuiteConfig& cfg, long bits) { return BigFloat(cfg.precision.rounding_tolerance, bits); }

}  // namespace detail

/// h(D) = 1 below the bound for exactly the 13 listed discriminants, and each
/// class polynomial is X - j.
inline LemmaResult verify_table1(const SuiteConfig& cfg = {}) {
  return detail::timed("table1", [&](LemmaResult& r) {
    std::vector<i64> found;
    for (auto [d, h] : class_numbers_up_to(cfg.table1_max_disc)) {
      if (h == 1) found.push_back(d);
    }
    r.data["count"] = found.size();
    std::set<i64> expected;
    for (const auto& e : kTable1) expected.insert(e.disc);
    if (std::set<i64>(found.begin(), found.end()) != expected || found.size() != kTable1.size()) {
      r.detail = "class number one discriminants differ from the table";
      return;
    }
    for (const auto& e : kTable1) {
      const auto P = hilbert_class_polynomial_cached(Discriminant(e.disc), cfg.precision, cfg.cache);
      if (P.degree() != 1 || -P.coeff(0) != mpz_class(e.j)) {
        r.detail = "class polynomial mismatch at D=" + std::to_string(e.disc);
        return;
      }
    }
    r.passed = true;
    r.detail = "13 discriminants, all j values match";
  });
}

/// The 29 discriminants of class number two and the separation of their
/// middle coefficients.
inline LemmaResult verify_class_number_two(const SuiteConfig& cfg = {}) {
  return detail::timed("class2", [&](LemmaResult& r) {
    std::vector<ClassPolynomial> polys;
    for (auto [d, h] : class_numbers_up_to(cfg.class2_max_disc)) {
      if (h == 2) polys.push_back(hilbert_class_polynomial_cached(Discriminant(d), cfg.precision, cfg.cache));
    }
    r.data["count"] = polys.size();
    if (polys.size() != 29) {
      r.detail = "expected 29 discriminants of class number 2, found " + std::to_string(polys.size());
      return;
    }
    auto find = [&](i64 d) -> const ClassPolynomial* {
      for (const auto& p : polys) {
        if (p.discriminant.value() == d) return &p;
      }
      return nullptr;
    };
    const ClassPolynomial* p15 = find(-15);
    if (!p15 || p15->coeff(1) != 191025 || p15->coeff(0) != -121287375) {
      r.detail = "HCP(-15) differs from X^2 + 191025 X - 121287375";
      return;
    }
    // Roots of HCP(-20) are 632000 +- 282880 sqrt 5.
    const ClassPolynomial* p20 = find(-20);
    const mpz_class c0 = mpz_class(632000) * 632000 - mpz_class(282880) * 282880 * 5;
    if (!p20 || p20->coeff(1) != -1264000 || p20->coeff(0) != c0) {
      r.detail = "HCP(-20) does not have roots 632000 +- 282880 sqrt 5";
      return;
    }
    const long bits = std::max<long>(cfg.precision.working_bits, 256);
    PrecisionConfig pc = cfg.precision;
    pc.working_bits = bits;
    const Discriminant d20(-20);
    const BigFloat s5 = sqrt(BigFloat(5L, bits));
    const BigFloat tol = BigFloat::pow2(-67, bits);  // below 1e-20
    for (const auto& f : reduced_forms(d20)) {
      const Complex j = singular_modulus(d20, f, pc);
      const BigFloat a = abs(j.re - (BigFloat(632000L, bits) + s5 * 282880L));
      const BigFloat b = abs(j.re - (BigFloat(632000L, bits) - s5 * 282880L));
      if (!(std::min(a, b, [](const BigFloat& x, const BigFloat& y) { return x < y; }) < tol) || !(abs(j.im) < tol)) {
        r.detail = "numeric root of HCP(-20) off by more than 1e-20";
        return;
      }
    }
    for (std::size_t i = 0; i < polys.size(); ++i) {
      for (std::size_t k = i + 1; k < polys.size(); ++k) {
        const mpz_class &A = polys[i].coeff(1), &B = polys[k].coeff(1);
        if (abs(A + B) <= 360000 || abs(A - B) <= 360000) {
          r.detail = "middle coefficients too close for D=" + std::to_string(polys[i].discriminant.value()) +
                     " and D=" + std::to_string(polys[k].discriminant.value());
          return;
        }
      }
    }
    r.passed = true;
    r.detail = "29 polynomials, all pairs separated by more than 360000";
  });
}

/// Non-principal moduli are smaller than the principal one by more than
/// 180000; distinct principal moduli differ in absolute value by more than 1600.
inline LemmaResult verify_gap_lemmas(i64 max_disc, const SuiteConfig& cfg = {}) {
  return detail::timed("gaps", [&](LemmaResult& r) {
    if (max_disc < 15) throw std::invalid_argument("verify_gap_lemmas: max_disc must be at least 15");
    const long bits = cfg.precision.working_bits;
    const BigFloat big(180000L, bits), small(1600L, bits);
    std::vector<std::pair<BigFloat, i64>> principal;
    BigFloat worst51(bits);
    bool first51 = true;
    for (i64 n = 3; n <= max_disc; ++n) {
      if (!is_discriminant(-n)) continue;
      const Discriminant disc(-n);
      const auto forms = reduced_forms(disc);
      const BigFloat top = abs(singular_modulus(disc, forms[0], cfg.precision));
      principal.emplace_back(top, -n);
      for (std::size_t i = 1; i < forms.size(); ++i) {
        const BigFloat gap = top - abs(singular_modulus(disc, forms[i], cfg.precision));
        if (first51 || gap < worst51) worst51 = gap, first51 = false;
        if (!(gap > big)) {
          std::ostringstream os;
          os << "principal gap " << gap.to_string(12) << " <= 180000 at D=" << -n << ", form " << forms[i];
          r.detail = os.str();
          return;
        }
      }
    }
    std::sort(principal.begin(), principal.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    BigFloat worst53 = principal.size() > 1 ? principal[1].first - principal[0].first : BigFloat(bits);
    for (std::size_t i = 1; i < principal.size(); ++i) {
      const BigFloat gap = principal[i].first - principal[i - 1].first;
      if (gap < worst53) worst53 = gap;
      if (!(gap > small)) {
        r.detail = "principal moduli of D=" + std::to_string(principal[i - 1].second) + " and D=" +
                   std::to_string(principal[i].second) + " are within 1600 in absolute value";
        return;
      }
    }
    r.data["min_principal_gap"] = first51 ? "none" : worst51.to_string(12);
    r.data["min_principal_separation"] = worst53.to_string(12);
    r.passed = true;
    r.detail = "both margins hold up to |D| = " + std::to_string(max_disc);
  });
}

/// ||j(tau)| - e^{2 pi Im tau}| <= 2079 for every reduced form.
inline LemmaResult verify_bound2079(i64 max_disc, const SuiteConfig& cfg = {}) {
  return detail::timed("bound2079", [&](LemmaResult& r) {
    const long bits = cfg.precision.working_bits;
    BigFloat worst(bits);
    i64 worst_d = 0;
    for (i64 n = 3; n <= max_disc; ++n) {
      if (!is_discriminant(-n)) continue;
      const BigFloat dev = j_bound_deviation(Discriminant(-n), cfg.precision);
      if (dev > worst) worst = dev, worst_d = -n;
      if (dev > BigFloat(2079L, bits) + detail::slack(cfg, bits)) {
        r.detail = "deviation " + dev.to_string(15) + " exceeds 2079 at D=" + std::to_string(-n);
        return;
      }
    }
    r.data["max_deviation"] = worst.to_string(15);
    r.data["at_disc"] = worst_d;
    r.passed = true;
    r.detail = "max deviation " + worst.to_string(8) + " at D=" + std::to_string(worst_d);
  });
}

/// The integers 744 + {0, +-1, +-2, +-196884, +-1+-196884, +-2*196884}.
inline std::vector<mpz_class> exclusion_integers() {
  std::vector<mpz_class> v;
  for (int a : {0, 1, -1, 2, -2}) v.push_back(744 + a);
  for (int s : {1, -1}) {
    v.push_back(744 + s * mpz_class(196884));
    for (int a : {1, -1}) v.push_back(744 + a + s * mpz_class(196884));
    v.push_back(744 + 2 * s * mpz_class(196884));
  }
  return v;
}

/// None of the 13 integers is a rational singular modulus; the theta = +-1
/// reductions of 744 + theta and 744 + 196884 theta are among them.
inline LemmaResult verify_744_exclusions(const SuiteConfig& = {}) {
  return detail::timed("exclusions", [&](LemmaResult& r) {
    const auto v = exclusion_integers();
    std::set<mpz_class> s(v.begin(), v.end());
    r.data["count"] = s.size();
    if (s.size() != 13) {
      r.detail = "expected 13 distinct integers";
      return;
    }
    for (const auto& x : v) {
      if (in_table1(x)) {
        r.detail = x.get_str() + " is a rational singular modulus";
        return;
      }
    }
    for (int t : {1, -1}) {
      if (!s.count(744 + t) || !s.count(744 + 196884 * t)) {
        r.detail = "theta = +-1 case missing from the list";
        return;
      }
    }
    r.passed = true;
    r.detail = "none of the 13 integers is in Table 1";
  });
}

/// Cyclic factor orders of (Z/n)^x.
inline std::vector<i64> unit_group_factors(i64 n) {
  std::vector<i64> out;
  for (i64 p : prime_factors(n)) {
    i64 pk = 1, k = 0;
    for (i64 m = n; m % p == 0; m /= p) pk *= p, ++k;
    if (p != 2) out.push_back(pk / p * (p - 1));
    else if (k == 2) out.push_back(2);
    else if (k >= 3) out.push_back(2), out.push_back(pk / 4);
  }
  return out;
}

/// (Z/n)^x is 2-elementary, or Z/4 times a 2-elementary group.
inline bool unit_group_qualifies(i64 n) {
  int fours = 0;
  for (i64 m : unit_group_factors(n)) {
    if (m == 4) ++fours;
    else if (m > 2) return false;
  }
  return fours <= 1;
}

inline LemmaResult verify_lcute_support(i64 max_n = 10000, const SuiteConfig& = {}) {
  return detail::timed("lcute", [&](LemmaResult& r) {
    nlohmann::json q = nlohmann::json::array();
    for (i64 n = 1; n <= max_n; ++n) {
      if (!unit_group_qualifies(n)) continue;
      q.push_back(n);
      if (48 % n != 0 && 120 % n != 0) {
        r.detail = "n=" + std::to_string(n) + " qualifies but divides neither 48 nor 120";
        return;
      }
    }
    r.data["qualifying"] = q;
    const BigFloat x = BigFloat(1L, 128) / (sin(BigFloat::pi(128) / 60L) * 2L);
    r.data["inverse_chord"] = x.to_string(12);
    if (!(x < BigFloat(10L, 128))) {
      r.detail = "1/(2 sin(pi/60)) is not below 10";
      return;
    }
    r.passed = true;
    r.detail = std::to_string(q.size()) + " qualifying n, all dividing 48 or 120; 1/(2 sin(pi/60)) = " + x.to_string(6);
  });
}

/// The pairs (a, c) with a(zeta5 + zeta5^-1) + c a root of HCP(-15) or HCP(-20).
inline std::vector<std::pair<std::pair<i64, i64>, i64>> two_root_pairs() {
  return {{{85995, -52515}, -15}, {{-85995, -138510}, -15}, {{565760, 914880}, -20}, {{-565760, 349120}, -20}};
}

inline LemmaResult verify_two_roots_values(const SuiteConfig& cfg = {}) {
  return detail::timed("two-roots", [&](LemmaResult& r) {
    const CyclotomicNumber w = CyclotomicNumber::zeta(5, 1) + CyclotomicNumber::zeta(5, -1);
    for (const auto& [ac, d] : two_root_pairs()) {
      const auto [a, c] = ac;
      const CyclotomicNumber x = w * CyclotomicNumber(mpq_class(a)) + CyclotomicNumber(mpq_class(c));
      if (minimal_degree(x) != 2) {
        r.detail = "degree of a(zeta5+zeta5^-1)+c is not 2 for a=" + std::to_string(a);
        return;
      }
      const auto mp = minimal_polynomial(x);
      const auto P = hilbert_class_polynomial_cached(Discriminant(d), cfg.precision, cfg.cache);
      bool same = mp.size() == P.coefficients.size();
      for (std::size_t i = 0; same && i < mp.size(); ++i) same = mp[i] == mpq_class(P.coefficients[i]);
      if (!same) {
        r.detail = "(" + std::to_string(a) + "," + std::to_string(c) + ") is not a root of HCP(" + std::to_string(d) + ")";
        return;
      }
    }
    r.passed = true;
    r.detail = "four pairs certified exactly";
  });
}

/// pi^-2 log(k + 2079)^2.
inline double pluricyc_bound(double k) {
  const double l = std::log(k + 2079.0);
  return l * l / (M_PI * M_PI);
}

/// Every D beyond the bound for k has principal modulus larger than k.
inline LemmaResult verify_pluricyc(i64 k_max, const SuiteConfig& cfg = {}) {
  return detail::timed("pluricyc", [&](LemmaResult& r) {
    if (k_max < 1) throw std::invalid_argument("verify_pluricyc: k_max must be positive");
    const double top = pluricyc_bound(static_cast<double>(k_max));
    r.data["bound_k1"] = pluricyc_bound(1);
    r.data["bound_kmax"] = top;
    if (k_max >= 3400000 && !(pluricyc_bound(3400000) < 22.92)) {
      r.detail = "bound at k=3400000 is not below 22.92";
      return;
    }
    // Past |D| = top every k <= k_max is in range; a margin of discriminants
    // beyond it checks |x| > k_max directly.
    const i64 last = static_cast<i64>(std::ceil(top)) + 40;
    const long bits = cfg.precision.working_bits;
    for (i64 n = 3; n <= last; ++n) {
      if (!is_discriminant(-n)) continue;
      if (static_cast<double>(n) <= pluricyc_bound(1)) continue;
      // Largest k <= k_max with bound(k) < n, i.e. k < e^{pi sqrt n} - 2079.
      const double e = std::exp(M_PI * std::sqrt(static_cast<double>(n))) - 2079.0;
      i64 k = e > static_cast<double>(k_max) ? k_max : static_cast<i64>(std::ceil(e)) - 1;
      while (k >= 1 && !(pluricyc_bound(static_cast<double>(k)) < static_cast<double>(n))) --k;
      while (k < k_max && pluricyc_bound(static_cast<double>(k + 1)) < static_cast<double>(n)) ++k;
      if (k < 1) continue;
      const Discriminant disc(-n);
      const BigFloat x = abs(singular_modulus(disc, principal_form(disc), cfg.precision));
      if (!(x > BigFloat(static_cast<long>(k), bits))) {
        r.detail = "principal modulus of D=" + std::to_string(-n) + " is not larger than k=" + std::to_string(k);
        return;
      }
    }
    r.passed = true;
    std::ostringstream os;
    os << "bound(1) = " << pluricyc_bound(1) << ", bound(" << k_max << ") = " << top;
    r.detail = os.str();
  });
}

inline const std::vector<std::string>& suite_targets() {
  static const std::vector<std::string> t{"table1", "class2",     "gaps",     "exclusions", "lcute",
                                          "two-roots", "pluricyc", "bound2079"};
  return t;
}

/// Runs the named checks (all when empty). Table 1 always runs first because
/// "rational singular modulus" means membership in it.
inline SuiteReport run_suite(const std::vector<std::string>& which, const SuiteConfig& cfg = {}) {
  std::vector<std::string> names = which.empty() ? suite_targets() : which;
  for (const auto& n : names) {
    if (std::find(suite_targets().begin(), suite_targets().end(), n) == suite_targets().end()) {
      throw std::invalid_argument("unknown verification target: " + n);
    }
  }
  const bool needs_table = std::any_of(names.begin(), names.end(),
                                       [](const std::string& n) { return n == "exclusions" || n == "table1"; });
  SuiteReport rep;
  bool table_ok = true;
  if (needs_table) {
    rep.results.push_back(verify_table1(cfg));
    table_ok = rep.results.back().passed;
  }
  for (const auto& n : suite_targets()) {
    if (n == "table1" || std::find(names.begin(), names.end(), n) == names.end()) continue;
    if (n == "class2") rep.results.push_back(verify_class_number_two(cfg));
    else if (n == "gaps") rep.results.push_back(verify_gap_lemmas(cfg.gaps_max_disc, cfg));
    else if (n == "exclusions") {
      if (table_ok) rep.results.push_back(verify_744_exclusions(cfg));
      else rep.results.push_back({"exclusions", false, "skipped: Table 1 verification failed", 0, {}});
    } else if (n == "lcute") rep.results.push_back(verify_lcute_support(cfg.lcute_max_n, cfg));
    else if (n == "two-roots") rep.results.push_back(verify_two_roots_values(cfg));
    else if (n == "pluricyc") rep.results.push_back(verify_pluricyc(cfg.pluricyc_k_max, cfg));
    else if (n == "bound2079") rep.results.push_back(verify_bound2079(cfg.bound_max_disc, cfg));
  }
  return rep;
}

}  // namespace cmline
