#include <cmline/cyclotomic.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace cmline;

namespace {

CyclotomicNumber random_element(std::mt19937_64& rng, i64 n) {
  std::uniform_int_distribution<long> c(-5, 5), den(1, 4);
  CyclotomicNumber x = CyclotomicNumber(0).embed_into(n);
  for (i64 k = 0; k < n; ++k) {
    x += CyclotomicNumber(mpq_class(c(rng), den(rng))).embed_into(n) * CyclotomicNumber::zeta(n, k);
  }
  return x;
}

}  // namespace

TEST(Cyclotomic, Polynomials) {
  EXPECT_EQ(cyclotomic_polynomial(1), (std::vector<i64>{-1, 1}));
  EXPECT_EQ(cyclotomic_polynomial(4), (std::vector<i64>{1, 0, 1}));
  EXPECT_EQ(cyclotomic_polynomial(12), (std::vector<i64>{1, 0, -1, 0, 1}));
  // Phi_105 is the first with a coefficient -2
  const auto p = cyclotomic_polynomial(105);
  EXPECT_EQ(p.size(), 49u);
  EXPECT_EQ(*std::min_element(p.begin(), p.end()), -2);
}

TEST(Cyclotomic, RootsAndRamanujanSums) {
  for (i64 n = 1; n <= 60; ++n) {
    const auto z = CyclotomicNumber::zeta(n);
    EXPECT_EQ(z.pow(n), CyclotomicNumber(1)) << n;
    // the primitive n-th roots sum to mu(n)
    CyclotomicNumber s(0);
    for (i64 k = 0; k < n; ++k) {
      if (std::gcd(k, n) == 1) s += CyclotomicNumber::zeta(n, k);
    }
    EXPECT_EQ(s, CyclotomicNumber(moebius(n))) << n;
    const auto r = is_root_of_unity(-z);
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(*r, RootOfUnity(n, 1).negated());
  }
  EXPECT_FALSE(is_root_of_unity(CyclotomicNumber(2)).has_value());
}

TEST(Cyclotomic, FieldAxiomsOnRandomSamples) {
  std::mt19937_64 rng(7);
  for (i64 n : {3, 5, 8, 12, 15, 20, 24, 30, 42, 60}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto x = random_element(rng, n), y = random_element(rng, n), z = random_element(rng, n);
      EXPECT_EQ((x + y) + z, x + (y + z));
      EXPECT_EQ((x * y) * z, x * (y * z));
      EXPECT_EQ(x * (y + z), x * y + x * z);
      EXPECT_EQ(x * y, y * x);
      if (!x.is_zero()) {
        EXPECT_EQ(x * x.inverse(), CyclotomicNumber(1));
      }
      // the trace over the full orbit is rational
      CyclotomicNumber tr(0);
      for (i64 t = 1; t < n; ++t) {
        if (std::gcd(t, n) == 1) tr += x.galois(t);
      }
      EXPECT_TRUE(tr.is_rational());
    }
  }
}

TEST(Cyclotomic, EmbeddingIsCompatible) {
  const auto a = CyclotomicNumber::zeta(6), b = CyclotomicNumber::zeta(4);
  EXPECT_EQ((a * b).order(), 12);
  EXPECT_EQ(a * b, CyclotomicNumber::zeta(12, 5));
  EXPECT_EQ(a.embed_into(12), CyclotomicNumber::zeta(12, 2));
  EXPECT_THROW(a.embed_into(8), std::invalid_argument);
}

TEST(Cyclotomic, MinimalPolynomials) {
  const auto z5 = CyclotomicNumber::zeta(5);
  const auto golden = z5 + z5.inverse();
  EXPECT_EQ(minimal_degree(golden), 2);
  EXPECT_EQ(minimal_polynomial(golden), (std::vector<mpq_class>{-1, 1, 1}));
  const auto i = CyclotomicNumber::zeta(4);
  EXPECT_EQ(minimal_polynomial(i + 1), (std::vector<mpq_class>{2, -2, 1}));
  EXPECT_EQ(minimal_degree(CyclotomicNumber::zeta(7)), 6);
}

TEST(Cyclotomic, RootOfUnityArithmetic) {
  const RootOfUnity a(12, 5), b(8, 3);
  EXPECT_EQ(embed(a * b), embed(a) * embed(b));
  EXPECT_EQ(RootOfUnity(6, 3), RootOfUnity::minus_one());
  EXPECT_EQ(RootOfUnity::from_fraction(mpq_class(7, 4)), RootOfUnity(4, 3));
  EXPECT_EQ(RootOfUnity::from_fraction(mpq_class(-1, 3)), RootOfUnity(3, 2));
  EXPECT_EQ(a.pow(12), RootOfUnity::one());
  EXPECT_THROW(RootOfUnity(0, 1), std::invalid_argument);
}

TEST(Cyclotomic, ClassifierExamples) {
  const RootOfUnity z5(5, 1), i4(4, 1), z3(3, 1), z8(8, 1);
  auto c = classify_two_term(1, 1, z5, z5.inverse());
  EXPECT_EQ(c.case_label, "7");
  EXPECT_EQ(c.field, QuadField::Qsqrt5);
  c = classify_two_term(1, 1, z8, z8.inverse());
  EXPECT_EQ(c.field, QuadField::Qsqrt2);
  EXPECT_EQ(c.case_label, "5");
  c = classify_two_term(2, -3, i4, RootOfUnity::one());
  EXPECT_EQ(c.field, QuadField::Qi);
  EXPECT_EQ(c.case_label, "2a");
  c = classify_two_term(1, 2, z3, z3);
  EXPECT_EQ(c.field, QuadField::QsqrtM3);
  c = classify_two_term(1, 1, RootOfUnity(7, 1), RootOfUnity::one());
  EXPECT_FALSE(c.quadratic);
  EXPECT_EQ(c.degree, 6);
  EXPECT_THROW(classify_two_term(0, 1, z3, z3), std::invalid_argument);
}

TEST(Cyclotomic, TwoTermAuditSmall) {
  const auto rep = audit_two_term(12);
  EXPECT_EQ(rep.unclassified, 0);
  EXPECT_GT(rep.low_degree, 0);
  for (const auto& [field, n] : rep.by_field) EXPECT_NE(field, "other");
}

TEST(Cyclotomic, ThreeRootVanishing) {
  const auto rep = audit_three_root_vanishing(30);
  EXPECT_EQ(rep.violations, 0);
  EXPECT_EQ(rep.vanishing, 2);
}

TEST(Cyclotomic, DivisibilityAudit) {
  const auto rep = audit_divisibility(12, 4, 6);
  EXPECT_EQ(rep.violations, 0);
  EXPECT_GT(rep.divisible_nonzero, 0);
  EXPECT_THROW(divisibility_bound_check({}, 0), std::invalid_argument);
}
