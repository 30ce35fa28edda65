#pragma once

#include <cmline/arith.hpp>
#include <cmline/bigfloat.hpp>
#include <cmline/jfunction.hpp>
#include <cmline/quadratic_forms.hpp>
#include <cmline/table1.hpp>

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace cmline {

/// Point (x, y) with both coordinates rational singular moduli.
struct CMPoint {
  mpz_class x;
  mpz_class y;
  friend bool operator==(const CMPoint&, const CMPoint&) = default;
  friend bool operator<(const CMPoint& p, const CMPoint& q) { return p.x != q.x ? p.x < q.x : p.y < q.y; }
  std::string to_string() const { return "(" + x.get_str() + "," + y.get_str() + ")"; }
};

/// Primitive integer line Ax + By + C = 0, first nonzero coefficient positive.
struct Line {
  mpz_class A, B, C;
  friend bool operator==(const Line&, const Line&) = default;
  friend bool operator<(const Line& l, const Line& m) {
    if (l.A != m.A) return l.A < m.A;
    if (l.B != m.B) return l.B < m.B;
    return l.C < m.C;
  }
  bool contains(const CMPoint& p) const { return A * p.x + B * p.y + C == 0; }
  std::string to_string() const { return "(" + A.get_str() + "," + B.get_str() + "," + C.get_str() + ")"; }
};

inline Line canonical_line(mpz_class a, mpz_class b, mpz_class c) {
  if (a == 0 && b == 0) throw std::invalid_argument("line: A and B both zero");
  mpz_class g = gcd(gcd(a, b), c);
  a /= g, b /= g, c /= g;
  const mpz_class& lead = a != 0 ? a : b;
  if (lead < 0) a = -a, b = -b, c = -c;
  return {a, b, c};
}

inline Line line_through(const CMPoint& p, const CMPoint& q) {
  if (p == q) throw std::invalid_argument("line_through: identical points");
  return canonical_line(p.y - q.y, q.x - p.x, p.x * q.y - q.x * p.y);
}

/// Rejects x = const, y = const and x = y.
///
/// Every vertical or horizontal line is rejected, not only those at a singular
/// modulus: among CM-points a vertical line through two points already sits
/// at one.
struct SpecialLineFilter {
  bool is_special(const Line& l) const { return l.A == 0 || l.B == 0 || (l.A == -l.B && l.C == 0); }
  bool operator()(const Line& l) const { return is_special(l); }
};

/// The 169 points with both coordinates in Table 1, sorted.
inline std::vector<CMPoint> rational_cm_points() {
  std::vector<CMPoint> pts;
  for (std::size_t i = 0; i < kTable1.size(); ++i) {
    for (std::size_t k = 0; k < kTable1.size(); ++k) pts.push_back({table1_value(i), table1_value(k)});
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

struct CollinearSet {
  Line line;
  std::vector<CMPoint> points;  // sorted
};

/// Every non-special line through at least three of the points, by hashing
/// the line of each pair.
inline std::vector<CollinearSet> find_collinear_triples(const std::vector<CMPoint>& points,
                                                        const SpecialLineFilter& filter = {}) {
  std::vector<CMPoint> pts = points;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::map<Line, std::set<std::size_t>> lines;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t k = i + 1; k < pts.size(); ++k) {
      Line l = line_through(pts[i], pts[k]);
      if (filter(l)) continue;
      auto& s = lines[l];
      s.insert(i);
      s.insert(k);
    }
  }
  std::vector<CollinearSet> out;
  for (auto& [l, s] : lines) {
    if (s.size() < 3) continue;
    CollinearSet cs{l, {}};
    for (std::size_t i : s) cs.points.push_back(pts[i]);
    out.push_back(std::move(cs));
  }
  return out;
}

/// 3x3 determinant with rows (1,1,1), (x_k), (y_k).
inline mpz_class collinearity_det(const CMPoint& p, const CMPoint& q, const CMPoint& r) {
  return q.x * r.y - r.x * q.y - p.x * r.y + r.x * p.y + p.x * q.y - q.x * p.y;
}

inline nlohmann::json to_json(const CollinearSet& cs) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : cs.points) pts.push_back({p.x.get_str(), p.y.get_str()});
  return {{"line", {cs.line.A.get_str(), cs.line.B.get_str(), cs.line.C.get_str()}},
          {"points", pts},
          {"exact_verified", true}};
}

// ---------------------------------------------------------------------------
// Numeric screen over all embedded singular moduli.

/// u + v sqrt(s) with s squarefree (s = 1 means rational, v = 0).
struct QuadNumber {
  mpq_class u = 0, v = 0;
  mpz_class s = 1;

  friend QuadNumber operator+(const QuadNumber& a, const QuadNumber& b) { return {a.u + b.u, a.v + b.v, pick(a, b)}; }
  friend QuadNumber operator-(const QuadNumber& a, const QuadNumber& b) { return {a.u - b.u, a.v - b.v, pick(a, b)}; }
  friend QuadNumber operator*(const QuadNumber& a, const QuadNumber& b) {
    const mpz_class s = pick(a, b);
    return {a.u * b.u + a.v * b.v * s, a.u * b.v + a.v * b.u, s};
  }
  bool is_zero() const { return u == 0 && v == 0; }

 private:
  static mpz_class pick(const QuadNumber& a, const QuadNumber& b) {
    if (a.v == 0) return b.s;
    if (b.v == 0) return a.s;
    if (a.s != b.s) throw std::invalid_argument("QuadNumber: mixed fields");
    return a.s;
  }
};

/// One embedding j(tau) of a singular modulus.
struct EmbeddedModulus {
  i64 disc = 0;
  int form_index = 0;
  ReducedForm form;
  Complex value;
  std::complex<double> approx;
  std::optional<QuadNumber> exact;  // rational or in a real quadratic field

  nlohmann::json to_json() const {
    nlohmann::json j{{"disc", disc}, {"form", form_index}, {"re", value.re.to_string(25)}, {"im", value.im.to_string(25)}};
    return j;
  }
};

struct ScreenCandidate {
  std::array<std::pair<int, int>, 3> points;  // (x, y) as indices into the modulus list
  std::string abs_det;
  bool exact_verified = false;
  std::optional<Line> line;  // when all six coordinates are rational
};

struct ScreenReport {
  std::vector<EmbeddedModulus> moduli;
  std::vector<ScreenCandidate> candidates;
  bool precision_warning = false;
  std::string warning;
  u64 triples_tested = 0;  // triples passing the slope window

  nlohmann::json to_json() const;
};

namespace detail {

// Exact value of the modulus when h <= 2: the rational value, or the root of
// X^2 + c1 X + c0 lying nearest the numeric value.
inline std::optional<QuadNumber> exact_modulus(Discriminant disc, i64 h, const Complex& value,
                                               const PrecisionConfig& cfg) {
  if (h == 1) {
    auto j = table1_j_of(disc.value());
    if (!j) return std::nullopt;
    return QuadNumber{mpq_class(*j), 0, 1};
  }
  if (h != 2) return std::nullopt;
  const ClassPolynomial P = hilbert_class_polynomial(disc, cfg);
  const mpz_class c0 = P.coeff(0), c1 = P.coeff(1);
  const mpz_class disc_poly = c1 * c1 - 4 * c0;
  if (disc_poly <= 0) return std::nullopt;
  const mpz_class s = squarefree_part(disc_poly);
  const mpz_class k = sqrt(mpz_class(disc_poly / s));
  QuadNumber plus{mpq_class(-c1, 2), mpq_class(k, 2), s};
  plus.u.canonicalize();
  plus.v.canonicalize();
  const long bits = cfg.working_bits;
  BigFloat root = BigFloat(plus.u, bits) + BigFloat(plus.v, bits) * sqrt(BigFloat(s, bits));
  BigFloat other = BigFloat(plus.u, bits) - BigFloat(plus.v, bits) * sqrt(BigFloat(s, bits));
  if (abs(value.re - root) <= abs(value.re - other)) return plus;
  plus.v = -plus.v;
  return plus;
}

inline Complex det3(const std::array<const Complex*, 3>& x, const std::array<const Complex*, 3>& y) {
  return *x[1] * *y[2] - *x[2] * *y[1] - *x[0] * *y[2] + *x[2] * *y[0] + *x[0] * *y[1] - *x[1] * *y[0];
}

}  // namespace detail

/// All embedded singular moduli with |disc| <= max_disc, ordered by |disc| then form.
inline std::vector<EmbeddedModulus> embedded_moduli(i64 max_disc, const PrecisionConfig& cfg) {
  std::vector<EmbeddedModulus> out;
  for (i64 n = 3; n <= max_disc; ++n) {
    if (!is_discriminant(-n)) continue;
    Discriminant disc(-n);
    const auto forms = reduced_forms(disc);
    const i64 h = static_cast<i64>(forms.size());
    for (std::size_t i = 0; i < forms.size(); ++i) {
      EmbeddedModulus m;
      m.disc = -n;
      m.form_index = static_cast<int>(i);
      m.form = forms[i];
      auto exact_j = h == 1 ? table1_j_of(-n) : std::nullopt;
      if (exact_j) {
        m.value = Complex(BigFloat(*exact_j, cfg.working_bits), BigFloat(0L, cfg.working_bits));
      } else {
        m.value = singular_modulus(disc, forms[i], cfg);
      }
      m.approx = {m.value.re.to_double(), m.value.im.to_double()};
      m.exact = detail::exact_modulus(disc, h, m.value, cfg);
      out.push_back(std::move(m));
    }
  }
  return out;
}

/// Every triple of pairwise distinct points (x, y), coordinates drawn from the
/// embedded moduli with |disc| <= max_disc, whose determinant has modulus
/// below tol. Lines x = const, y = const and x = y are skipped.
inline ScreenReport numeric_screen(i64 max_disc, const PrecisionConfig& cfg, const mpq_class& tol, int jobs = 1) {
  if (max_disc < 3) throw std::invalid_argument("numeric_screen: max_disc must be at least 3");
  if (tol <= 0) throw std::invalid_argument("numeric_screen: tolerance must be positive");
  cfg.validate();
  ScreenReport rep;
  rep.moduli = embedded_moduli(max_disc, cfg);
  const int n = static_cast<int>(rep.moduli.size());
  const long bits = cfg.working_bits;
  const BigFloat tolf(tol, bits);
  const double told = tol.get_d();

  // Rounding error of a determinant is about scale * 2^-bits.
  double maxabs = 1;
  for (const auto& m : rep.moduli) maxabs = std::max(maxabs, std::abs(m.approx));
  const double err = 6.0 * maxabs * maxabs * std::ldexp(1.0, -static_cast<int>(bits) + 4);
  if (err >= told) {
    rep.precision_warning = true;
    rep.warning = "working precision cannot resolve the tolerance for the largest moduli (error ~" +
                  std::to_string(err) + ")";
  }

  std::vector<std::pair<int, int>> pts;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) pts.emplace_back(a, b);
  }
  const std::size_t N = pts.size();
  const int nj = std::max(1, jobs);
  std::vector<std::vector<ScreenCandidate>> found(static_cast<std::size_t>(nj));
  std::vector<u64> tested(static_cast<std::size_t>(nj), 0);
  auto approx = [&](int idx) -> const std::complex<double>& { return rep.moduli[static_cast<std::size_t>(idx)].approx; };
  auto val = [&](int idx) -> const Complex& { return rep.moduli[static_cast<std::size_t>(idx)].value; };

  auto examine = [&](std::size_t i, std::size_t k, std::size_t l, std::vector<ScreenCandidate>& out) {
    const auto &P = pts[i], &Q = pts[k], &R = pts[l];
    if (P.second == Q.second && Q.second == R.second) return;
    if (P.first == P.second && Q.first == Q.second && R.first == R.second) return;
    const auto &x0 = approx(P.first), &x1 = approx(Q.first), &x2 = approx(R.first);
    const auto &y0 = approx(P.second), &y1 = approx(Q.second), &y2 = approx(R.second);
    const std::complex<double> dd = x1 * y2 - x2 * y1 - x0 * y2 + x2 * y0 + x0 * y1 - x1 * y0;
    const double scale = std::abs(x1 * y2) + std::abs(x2 * y1) + std::abs(x0 * y2) + std::abs(x2 * y0) +
                         std::abs(x0 * y1) + std::abs(x1 * y0);
    if (std::abs(dd) > told + 1e-9 * scale) return;
    const Complex det = detail::det3({&val(P.first), &val(Q.first), &val(R.first)},
                                     {&val(P.second), &val(Q.second), &val(R.second)});
    const BigFloat mag = abs(det);
    if (!(mag < tolf)) return;
    ScreenCandidate c;
    c.points = {P, Q, R};
    c.abs_det = mag.to_string(10);
    // Exact confirmation when the six coordinates share one field.
    const std::array<int, 6> ids{P.first, Q.first, R.first, P.second, Q.second, R.second};
    std::array<QuadNumber, 6> ex;
    bool all = true, mixed = false;
    mpz_class field = 1;
    for (std::size_t t = 0; t < 6; ++t) {
      const auto& e = rep.moduli[static_cast<std::size_t>(ids[t])].exact;
      if (!e) {
        all = false;
        break;
      }
      ex[t] = *e;
      if (e->v != 0) {
        if (field != 1 && field != e->s) mixed = true;
        field = e->s;
      }
    }
    if (all && !mixed) {
      const QuadNumber d = ex[1] * ex[5] - ex[2] * ex[4] - ex[0] * ex[5] + ex[2] * ex[3] + ex[0] * ex[4] - ex[1] * ex[3];
      c.exact_verified = d.is_zero();
      if (field == 1 && c.exact_verified) {
        c.line = line_through({ex[0].u.get_num(), ex[3].u.get_num()}, {ex[1].u.get_num(), ex[4].u.get_num()});
      }
    }
    out.push_back(std::move(c));
  };

  // Anchor each triple at its first point: the other two are collinear with it
  // iff their slopes seen from the anchor agree. Slopes are sorted by real part
  // and compared within a window wide enough for every |det| < tol.
  std::vector<std::thread> pool;
  for (int w = 0; w < nj; ++w) {
    pool.emplace_back([&, w] {
      struct Slope {
        std::complex<double> s;
        double dx;
        std::size_t k;
      };
      std::vector<Slope> sl;
      for (std::size_t i = static_cast<std::size_t>(w); i < N; i += static_cast<std::size_t>(nj)) {
        sl.clear();
        double mind = std::numeric_limits<double>::infinity();
        const auto& P = pts[i];
        for (std::size_t k = i + 1; k < N; ++k) {
          const auto& Q = pts[k];
          if (Q.first == P.first) continue;  // vertical through the anchor
          const std::complex<double> dx = approx(Q.first) - approx(P.first);
          const std::complex<double> dy = approx(Q.second) - approx(P.second);
          sl.push_back({dy / dx, std::abs(dx), k});
          mind = std::min(mind, std::abs(dx));
        }
        std::sort(sl.begin(), sl.end(), [](const Slope& a, const Slope& b) { return a.s.real() < b.s.real(); });
        const double base = told / (mind * mind);
        for (std::size_t a = 0; a < sl.size(); ++a) {
          const double win = base + 1e-8 * (std::abs(sl[a].s) + 1);
          for (std::size_t b = a + 1; b < sl.size() && sl[b].s.real() - sl[a].s.real() <= win; ++b) {
            if (std::abs(sl[b].s.imag() - sl[a].s.imag()) > win) continue;
            ++tested[static_cast<std::size_t>(w)];
            const std::size_t k = std::min(sl[a].k, sl[b].k), l = std::max(sl[a].k, sl[b].k);
            examine(i, k, l, found[static_cast<std::size_t>(w)]);
          }
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (int w = 0; w < nj; ++w) {
    rep.triples_tested += tested[static_cast<std::size_t>(w)];
    for (auto& c : found[static_cast<std::size_t>(w)]) rep.candidates.push_back(std::move(c));
  }
  std::sort(rep.candidates.begin(), rep.candidates.end(),
            [](const ScreenCandidate& a, const ScreenCandidate& b) { return a.points < b.points; });
  return rep;
}

inline nlohmann::json ScreenReport::to_json() const {
  nlohmann::json cands = nlohmann::json::array();
  auto ref = [&](int i) {
    const auto& m = moduli[static_cast<std::size_t>(i)];
    return nlohmann::json{{"disc", m.disc}, {"form", m.form_index}};
  };
  for (const auto& c : candidates) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& [x, y] : c.points) pts.push_back({{"x", ref(x)}, {"y", ref(y)}});
    nlohmann::json j{{"points", pts}, {"abs_det", c.abs_det}, {"exact_verified", c.exact_verified}};
    if (c.line) j["line"] = {c.line->A.get_str(), c.line->B.get_str(), c.line->C.get_str()};
    else j["line"] = nullptr;
    cands.push_back(std::move(j));
  }
  nlohmann::json j{{"moduli", moduli.size()},
                   {"triples_tested", triples_tested},
                   {"candidates", cands},
                   {"precision_warning", precision_warning}};
  if (precision_warning) j["warning"] = warning;
  return j;
}

}  // namespace cmline
