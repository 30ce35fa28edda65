#include <cmline/qseries.hpp>
#include <cmline/scanner.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace cmline;

namespace {

using QSeries = PuiseuxSeries<CyclotomicNumber>;

QSeries random_series(std::mt19937_64& rng, bool exact) {
  std::uniform_int_distribution<long> coef(-6, 6), num(-4, 10), den(1, 3), trunc(4, 12);
  QSeries s = exact ? QSeries() : QSeries::big_o(mpq_class(trunc(rng), 2));
  for (int i = 0; i < 5; ++i) {
    mpq_class e(num(rng), den(rng));
    e.canonicalize();
    s += QSeries::monomial(CyclotomicNumber(mpq_class(coef(rng))), e);
  }
  return s;
}

// Equality on the range both sides know.
bool agree(const QSeries& x, const QSeries& y) {
  if (x.trunc_order() != y.trunc_order()) return false;
  return (x - y).is_zero_to_order();
}

std::vector<JMap> small_universe(std::vector<mpq_class> levels, int twist, std::vector<mpz_class> constants) {
  ScanConfig cfg;
  cfg.levels = std::move(levels);
  cfg.max_twist_order = twist;
  cfg.constants = std::move(constants);
  return scan_universe(cfg);
}

}  // namespace

TEST(Puiseux, RingLaws) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = random_series(rng, trial % 3 == 0), y = random_series(rng, trial % 5 == 0),
               z = random_series(rng, false);
    EXPECT_TRUE(agree(x + y, y + x));
    EXPECT_TRUE(agree((x + y) + z, x + (y + z)));
    EXPECT_TRUE(agree(x * y, y * x));
    EXPECT_TRUE(agree((x * y) * z, x * (y * z)));
    EXPECT_TRUE(agree(x * (y + z), x * y + x * z));
    EXPECT_TRUE((x - x).is_zero_to_order());
  }
}

TEST(Puiseux, TruncationLaw) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = random_series(rng, false), y = random_series(rng, false);
    const mpq_class tx = *x.trunc_order(), ty = *y.trunc_order();
    EXPECT_EQ(*(x + y).trunc_order(), std::min(tx, ty));
    // O(q^tx) * y is only known below tx + v(y), and symmetrically
    const auto lx = *x.lowest_possible(), ly = *y.lowest_possible();
    EXPECT_EQ(*(x * y).trunc_order(), std::min(tx + ly, ty + lx));
    for (const auto& [e, c] : (x * y).terms()) EXPECT_LT(e, *(x * y).trunc_order());
    for (const auto& [e, c] : (x + y).terms()) EXPECT_LT(e, *(x + y).trunc_order());
  }
  // an exact addend respects the other side's truncation
  const auto s = QSeries::big_o(2) + QSeries::monomial(CyclotomicNumber(1), 3);
  EXPECT_TRUE(s.is_zero_to_order());
  EXPECT_THROW((void)s.coefficient(2), std::out_of_range);
}

TEST(Puiseux, Shift) {
  const auto s = QSeries::monomial(CyclotomicNumber(3), mpq_class(1, 2)).shifted(mpq_class(1, 3));
  EXPECT_EQ(s.coefficient(mpq_class(5, 6)), CyclotomicNumber(3));
  EXPECT_EQ(*s.valuation(), mpq_class(5, 6));
}

TEST(QSeries, ExpansionLeadingTerms) {
  for (const auto& f : small_universe({1, 2, mpq_class(3, 2)}, 6, {})) {
    const mpq_class m = f.level();
    const auto s = expand_jmap(f, 2 * m);
    const auto eps = embed(f.twist());
    EXPECT_EQ(s.coefficient(-m), eps.inverse()) << f.to_string();
    EXPECT_EQ(s.coefficient(0), CyclotomicNumber(744)) << f.to_string();
    EXPECT_EQ(s.coefficient(m), CyclotomicNumber(196884) * eps) << f.to_string();
    EXPECT_EQ(*s.trunc_order(), 2 * m);
  }
  const auto c = expand_jmap(JMap::constant(1728), 5);
  EXPECT_EQ(c.coefficient(0), CyclotomicNumber(1728));
  EXPECT_THROW(expand_jmap(JMap::nonconstant(2, {}), -2), std::invalid_argument);
  EXPECT_THROW(JMap::constant(5), std::invalid_argument);
}

TEST(QSeries, FromMatrixLevelIsNlc) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    const auto g = random_matrix(rng, 6);
    const auto f = JMap::from_matrix(g);
    EXPECT_EQ(f.level(), nlc(g));
    EXPECT_EQ(f, JMap::from_matrix(mpq_class(3, 7) * random_sl2z_word(rng, 8) * g));
  }
  const auto f = JMap::from_matrix({1, mpq_class(1, 2), 0, 1});
  EXPECT_EQ(f.twist(), RootOfUnity::minus_one());
  EXPECT_EQ(f.to_string(), "j(1*z+1/2)");
}

TEST(QSeries, DeterminantHandOracle) {
  const JMap j1 = JMap::nonconstant(1, {});
  const JMap z = JMap::constant(0), k = JMap::constant(1728);
  // with A = q(j - 744): D = A^2 - 240 q A - 732096 q^2
  const auto d = determinant_series({j1, z, k}, {z, j1, z}, 4);
  EXPECT_EQ(d.coefficient(0), CyclotomicNumber(1));
  EXPECT_EQ(d.coefficient(1), CyclotomicNumber(-240));
  EXPECT_EQ(d.coefficient(2), CyclotomicNumber(-338328));
  EXPECT_EQ(d.coefficient(3), CyclotomicNumber(-4264640));
  EXPECT_THROW(determinant_series({z, z, k}, {k, z, z}, 3), std::invalid_argument);
}

TEST(QSeries, DeterminantAlternates) {
  const auto u = small_universe({1, 2, mpq_class(1, 2)}, 3, {0, 1728});
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<std::size_t> pick(0, u.size() - 1);
  const mpq_class order(5);
  for (int trial = 0; trial < 60; ++trial) {
    JTriple f{u[pick(rng)], u[pick(rng)], u[pick(rng)]}, g{u[pick(rng)], u[pick(rng)], u[pick(rng)]};
    if (all_constant(f, g)) continue;
    const auto d = determinant_series(f, g, order);
    EXPECT_TRUE(agree(determinant_series(g, f, order), -d));
    for (auto [a, b] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
      JTriple f2 = f, g2 = g;
      std::swap(f2[a], f2[b]);
      std::swap(g2[a], g2[b]);
      EXPECT_TRUE(agree(determinant_series(f2, g2, order), -d));
    }
    EXPECT_TRUE(double_product_identity_check(f, g, order));
  }
}

TEST(QSeries, VerdictOrder) {
  const JMap a = JMap::nonconstant(1, {}), b = JMap::nonconstant(2, {}), c = JMap::constant(0);
  using K = MainLemmaVerdict::Kind;
  EXPECT_EQ(main_lemma_conclusion({a, a, a}, {a, a, a}).kind, K::AllFEqual);
  EXPECT_EQ(main_lemma_conclusion({a, b, c}, {c, c, c}).kind, K::AllGEqual);
  EXPECT_EQ(main_lemma_conclusion({a, b, a}, {c, b, c}).to_string(), "PairEqual(1,3)");
  EXPECT_EQ(main_lemma_conclusion({a, b, c}, {a, b, c}).kind, K::RowsEqual);
  EXPECT_FALSE(main_lemma_conclusion({a, b, c}, {b, a, c}).holds());
  // degenerate verdicts really do vanish
  for (const auto& [f, g] : std::vector<std::pair<JTriple, JTriple>>{
           {{a, a, a}, {a, b, c}}, {{a, b, a}, {c, b, c}}, {{a, b, c}, {a, b, c}}}) {
    EXPECT_TRUE(determinant_series(f, g, 6).is_zero_to_order());
  }
}

// a f + b g + c vanishing to six terms forces f = g, a + b = 0, c = 0.
TEST(QSeries, LinearRelationsBetweenJMaps) {
  const auto u = small_universe({1, 2, 3}, 6, {});
  const auto ctx = ModContext::for_order(60);
  const mpq_class order(16);  // at least six known terms at every level
  std::vector<PuiseuxSeries<ModInt>> ex;
  for (const auto& f : u) ex.push_back(expand_jmap_in(ctx, f, order));
  int relations = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t k = 0; k < u.size(); ++k) {
      for (long a = -2; a <= 2; ++a) {
        for (long b = -2; b <= 2; ++b) {
          for (long c = -2; c <= 2; ++c) {
            if (a == 0 && b == 0 && c == 0) continue;
            const auto s = ex[i].scaled(ctx.integer(a)) + ex[k].scaled(ctx.integer(b)) +
                           PuiseuxSeries<ModInt>::constant(ctx.integer(c));
            if (!s.is_zero_to_order()) continue;
            ++relations;
            ASSERT_TRUE(i == k && a + b == 0 && c == 0) << u[i].to_string() << " " << u[k].to_string();
          }
        }
      }
    }
  }
  EXPECT_EQ(relations, static_cast<int>(u.size()) * 4);
}

// One of the nlc(A_k B) strictly dominates, so the composed maps have a strictly largest level.
TEST(QSeries, DominantLevel) {
  const std::vector<RationalMatrix> set{
      RationalMatrix::identity(), {1, mpq_class(1, 2), 0, 1}, {4, 0, 0, 1}, {2, 0, 0, 1},
      {1, mpq_class(1, 3), 0, 1}, {1, 0, 2, 1},                {3, 1, 0, 2}, {mpq_class(1, 2), 0, 0, 1}};
  int triples = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t k = i + 1; k < set.size(); ++k) {
      for (std::size_t l = k + 1; l < set.size(); ++l) {
        if (equivalent(set[i], set[k]) || equivalent(set[i], set[l]) || equivalent(set[k], set[l])) continue;
        const auto b = dominant_matrix(set[i], set[k], set[l]);
        std::array<mpq_class, 3> lv{JMap::from_matrix(set[i] * b).level(), JMap::from_matrix(set[k] * b).level(),
                                    JMap::from_matrix(set[l] * b).level()};
        EXPECT_TRUE(strict_maximum(lv).has_value());
        ++triples;
      }
    }
  }
  EXPECT_GT(triples, 20);
}
