#include <cmline/scanner.hpp>

#include <gtest/gtest.h>

using namespace cmline;

namespace {

ScanConfig config(std::vector<mpq_class> levels, int twist, std::vector<mpz_class> constants, int n, int jobs = 1) {
  ScanConfig cfg;
  cfg.levels = std::move(levels);
  cfg.max_twist_order = twist;
  cfg.constants = std::move(constants);
  cfg.n_terms = n;
  cfg.jobs = jobs;
  return cfg;
}

std::vector<std::string> lines(const ScanReport& r) {
  std::vector<std::string> out;
  for (const auto& rec : r.records) out.push_back(rec.to_json().dump());
  return out;
}

}  // namespace

TEST(Scanner, Universe) {
  const auto u = scan_universe(config({1, 2}, 3, {0, 1728}, 8));
  // two constants, then the four roots of order <= 3 at each level
  ASSERT_EQ(u.size(), 2u + 2u * 4u);
  EXPECT_TRUE(std::is_sorted(u.begin(), u.end()));
  EXPECT_TRUE(u[0].is_constant());
  EXPECT_THROW(scan_universe(config({0}, 1, {}, 8)), std::invalid_argument);
}

TEST(Scanner, EmptyOnLevelOne) {
  const auto cfg = config({1}, 2, {0, 1728}, 6);
  const auto fast = scan_main_lemma(cfg);
  EXPECT_TRUE(fast.empty());
  EXPECT_EQ(lines(fast), lines(scan_main_lemma_brute(cfg)));
  EXPECT_EQ(fast.stats.false_positives, 0u);
}

// Two certified exponents are too few: the scan must report the same
// spurious tuples as direct expansion.
TEST(Scanner, MatchesBruteForceOnShortTruncation) {
  const auto cfg = config({1, 2}, 3, {0}, 2);
  const auto fast = scan_main_lemma(cfg);
  const auto brute = scan_main_lemma_brute(cfg);
  EXPECT_EQ(fast.records.size(), 408u);
  EXPECT_EQ(lines(fast), lines(brute));
  EXPECT_GT(fast.stats.lemma81_violations, 0u);
  for (const auto& r : fast.records) {
    EXPECT_TRUE(r.vanishes);
    EXPECT_FALSE(r.verdict.holds());
    EXPECT_TRUE(determinant_series(r.f, r.g, r.vanishing_order).is_zero_to_order());
  }
  // sorted by tuple encoding
  for (std::size_t i = 1; i < fast.records.size(); ++i) EXPECT_LT(fast.records[i - 1].key, fast.records[i].key);
}

TEST(Scanner, EmptyWithEnoughTerms) {
  const auto cfg = config({1, 2}, 6, {0}, 8);
  const auto fast = scan_main_lemma(cfg);
  EXPECT_TRUE(fast.empty());
  EXPECT_EQ(fast.stats.lemma81_violations, 0u);
  EXPECT_EQ(fast.stats.confirmed, 0u);
  EXPECT_GT(fast.stats.rows_equal, 0u);  // the RowsEqual tuples still hash together
}

TEST(Scanner, MixedLevelsAgainstBruteForce) {
  const auto cfg = config({1, mpq_class(1, 2), mpq_class(3, 2)}, 2, {1728}, 4);
  EXPECT_EQ(lines(scan_main_lemma(cfg)), lines(scan_main_lemma_brute(cfg)));
}

TEST(Scanner, IndependentOfJobs) {
  const auto one = scan_main_lemma(config({1, 2}, 3, {0}, 2, 1));
  const auto four = scan_main_lemma(config({1, 2}, 3, {0}, 2, 4));
  EXPECT_EQ(lines(one), lines(four));
  EXPECT_EQ(one.stats.to_json(), four.stats.to_json());
}
