#include <cmline/collinear.hpp>

#include <gtest/gtest.h>

#include <set>

using namespace cmline;

namespace {

bool has_line(const std::vector<CollinearSet>& sets, const Line& l, std::size_t npoints) {
  for (const auto& s : sets) {
    if (s.line == l) return s.points.size() == npoints;
  }
  return false;
}

}  // namespace

TEST(Collinear, CanonicalLines) {
  const CMPoint p{0, 1728}, q{1728, 0}, r{-3375, 8000};
  EXPECT_EQ(line_through(p, q), line_through(q, p));
  EXPECT_EQ(line_through(p, q), (Line{1, 1, -1728}));
  const Line l = line_through(p, r);
  EXPECT_EQ(gcd(gcd(l.A, l.B), l.C), 1);
  EXPECT_GT(l.A != 0 ? l.A : l.B, 0);
  EXPECT_THROW(line_through(p, p), std::invalid_argument);
  EXPECT_THROW(canonical_line(0, 0, 1), std::invalid_argument);
}

TEST(Collinear, SpecialFilter) {
  const SpecialLineFilter f;
  EXPECT_TRUE(f.is_special({1, 0, -1728}));
  EXPECT_TRUE(f.is_special({0, 1, 3375}));
  EXPECT_TRUE(f.is_special({1, -1, 0}));
  EXPECT_FALSE(f.is_special({1, -1, 5}));
  EXPECT_FALSE(f.is_special({1, 1, 0}));
}

TEST(Collinear, RationalPoints) {
  const auto pts = rational_cm_points();
  EXPECT_EQ(pts.size(), 169u);
  EXPECT_TRUE(std::is_sorted(pts.begin(), pts.end()));
}

TEST(Collinear, RationalSearch) {
  const auto sets = find_collinear_triples(rational_cm_points());
  EXPECT_TRUE(has_line(sets, {1331, -8, 0}, 3));
  EXPECT_TRUE(has_line(sets, {512000, 1, 0}, 3));
  std::set<Line> lines;
  for (const auto& s : sets) {
    lines.insert(s.line);
    EXPECT_FALSE(SpecialLineFilter{}.is_special(s.line));
    EXPECT_EQ(gcd(gcd(s.line.A, s.line.B), s.line.C), 1);
    ASSERT_GE(s.points.size(), 3u);
    EXPECT_EQ(std::set<CMPoint>(s.points.begin(), s.points.end()).size(), s.points.size());
    for (const auto& p : s.points) EXPECT_TRUE(s.line.contains(p));
    for (std::size_t i = 2; i < s.points.size(); ++i) {
      EXPECT_EQ(collinearity_det(s.points[0], s.points[1], s.points[i]), 0);
    }
  }
  // the x <-> y mirrors
  EXPECT_EQ(lines, (std::set<Line>{{1, 512000, 0}, {8, -1331, 0}, {1331, -8, 0}, {512000, 1, 0}}));
}

TEST(Collinear, RationalSearchMatchesBruteForce) {
  const auto pts = rational_cm_points();
  std::set<Line> brute;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t k = i + 1; k < pts.size(); ++k) {
      for (std::size_t l = k + 1; l < pts.size(); ++l) {
        if (collinearity_det(pts[i], pts[k], pts[l]) != 0) continue;
        const Line ln = line_through(pts[i], pts[k]);
        if (!SpecialLineFilter{}.is_special(ln)) brute.insert(ln);
      }
    }
  }
  std::set<Line> fast;
  for (const auto& s : find_collinear_triples(pts)) fast.insert(s.line);
  EXPECT_EQ(fast, brute);
}

TEST(Collinear, ScreenAgreesWithCubicSearch) {
  PrecisionConfig cfg;
  cfg.working_bits = 256;
  const mpq_class tol(1, 1000000);
  const auto rep = numeric_screen(23, cfg, tol);
  const auto& m = rep.moduli;
  std::vector<std::pair<int, int>> pts;
  for (int a = 0; a < static_cast<int>(m.size()); ++a) {
    for (int b = 0; b < static_cast<int>(m.size()); ++b) pts.emplace_back(a, b);
  }
  const BigFloat tolf(tol, 256);
  std::size_t brute = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t k = i + 1; k < pts.size(); ++k) {
      for (std::size_t l = k + 1; l < pts.size(); ++l) {
        const auto &P = pts[i], &Q = pts[k], &R = pts[l];
        if (P.first == Q.first && Q.first == R.first) continue;
        if (P.second == Q.second && Q.second == R.second) continue;
        if (P.first == P.second && Q.first == Q.second && R.first == R.second) continue;
        const Complex d = detail::det3({&m[P.first].value, &m[Q.first].value, &m[R.first].value},
                                       {&m[P.second].value, &m[Q.second].value, &m[R.second].value});
        if (abs(d) < tolf) ++brute;
      }
    }
  }
  EXPECT_EQ(rep.candidates.size(), brute);
  EXPECT_FALSE(rep.precision_warning);
}

TEST(Collinear, ScreenFindsRationalAndConjugateTriples) {
  PrecisionConfig cfg;
  cfg.working_bits = 256;
  const auto rep = numeric_screen(67, cfg, mpq_class(1, mpz_class("1000000000000")));
  std::set<Line> lines;
  int irrational = 0;
  for (const auto& c : rep.candidates) {
    EXPECT_TRUE(c.exact_verified);
    if (c.line) {
      lines.insert(*c.line);
    } else {
      ++irrational;
    }
  }
  EXPECT_EQ(lines, (std::set<Line>{{1, 512000, 0}, {8, -1331, 0}, {1331, -8, 0}, {512000, 1, 0}}));
  EXPECT_EQ(irrational, 2);
  // parallelism does not change the report
  EXPECT_EQ(numeric_screen(30, cfg, mpq_class(1, 1000000), 1).to_json(),
            numeric_screen(30, cfg, mpq_class(1, 1000000), 3).to_json());
}

TEST(Collinear, ScreenRejectsBadInput) {
  EXPECT_THROW(numeric_screen(2, {}, 1), std::invalid_argument);
  EXPECT_THROW(numeric_screen(10, {}, 0), std::invalid_argument);
}
