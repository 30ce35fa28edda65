#include <cmline/jfunction.hpp>
#include <cmline/table1.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>

using namespace cmline;

namespace {

long valuation(mpz_class x, long p) {
  if (x == 0) return 1000;
  long v = 0;
  while (mpz_divisible_ui_p(x.get_mpz_t(), static_cast<unsigned long>(p))) {
    x /= p;
    ++v;
  }
  return v;
}

Complex horner(const ClassPolynomial& P, const Complex& x) {
  Complex acc(BigFloat(0L, x.re.precision()), BigFloat(0L, x.re.precision()));
  for (auto it = P.coefficients.rbegin(); it != P.coefficients.rend(); ++it) {
    acc = acc * x;
    acc.re = acc.re + BigFloat(*it, x.re.precision());
  }
  return acc;
}

std::filesystem::path fresh_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("cmline_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(d);
  return d;
}

}  // namespace

TEST(JFunction, LeadingCoefficients) {
  const std::vector<const char*> known{"1",
                                       "744",
                                       "196884",
                                       "21493760",
                                       "864299970",
                                       "20245856256",
                                       "333202640600",
                                       "4252023300096",
                                       "44656994071935",
                                       "401490886656000",
                                       "3176440229784420",
                                       "22567393309593600"};
  for (std::size_t i = 0; i < known.size(); ++i) {
    EXPECT_EQ(j_coefficient(static_cast<i64>(i) - 1), mpz_class(known[i])) << "n=" << static_cast<i64>(i) - 1;
  }
}

// Lehner's congruences are an oracle independent of the product formula.
TEST(JFunction, LehnerCongruences) {
  const auto c = j_coefficients(300);
  for (i64 n = 1; n <= 300; ++n) {
    const mpz_class& x = c[static_cast<std::size_t>(n + 1)];
    long a2 = 0, a3 = 0, a5 = 0, a7 = 0;
    for (i64 m = n; m % 2 == 0; m /= 2) ++a2;
    for (i64 m = n; m % 3 == 0; m /= 3) ++a3;
    for (i64 m = n; m % 5 == 0; m /= 5) ++a5;
    for (i64 m = n; m % 7 == 0; m /= 7) ++a7;
    if (a2) {
      EXPECT_GE(valuation(x, 2), 3 * a2 + 8) << n;
    }
    if (a3) {
      EXPECT_GE(valuation(x, 3), 2 * a3 + 3) << n;
    }
    if (a5) {
      EXPECT_GE(valuation(x, 5), a5 + 1) << n;
    }
    if (a7) {
      EXPECT_GE(valuation(x, 7), a7) << n;
    }
  }
}

TEST(JFunction, Table1Values) {
  PrecisionConfig cfg;
  for (const auto& r : kTable1) {
    const Discriminant d(r.disc);
    const Complex j = singular_modulus(d, principal_form(d), cfg);
    EXPECT_EQ(j.re.round_to_integer(), mpz_class(r.j)) << r.disc;
    EXPECT_LT(abs(j.im).to_double(), 1e-20) << r.disc;
  }
}

TEST(JFunction, RejectsForeignForm) {
  EXPECT_THROW(singular_modulus(Discriminant(-15), ReducedForm{1, 0, 5}, {}), std::invalid_argument);
  PrecisionConfig bad;
  bad.working_bits = 10;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(JFunction, KnownClassPolynomials) {
  auto p15 = hilbert_class_polynomial(Discriminant(-15));
  EXPECT_EQ(p15.coefficients, (std::vector<mpz_class>{mpz_class("-121287375"), mpz_class("191025"), 1}));
  auto p20 = hilbert_class_polynomial(Discriminant(-20));
  EXPECT_EQ(p20.coefficients, (std::vector<mpz_class>{mpz_class("-681472000"), mpz_class("-1264000"), 1}));
  auto p23 = hilbert_class_polynomial(Discriminant(-23));
  EXPECT_EQ(p23.coefficients, (std::vector<mpz_class>{mpz_class("12771880859375"), mpz_class("-5151296875"),
                                                      mpz_class("3491750"), 1}));
  auto p3 = hilbert_class_polynomial(Discriminant(-3));
  EXPECT_EQ(p3.coefficients, (std::vector<mpz_class>{0, 1}));
}

TEST(JFunction, PolynomialVanishesAtModuli) {
  PrecisionConfig cfg;
  cfg.working_bits = 256;
  for (i64 n = 3; n <= 400; ++n) {
    if (!is_discriminant(-n)) continue;
    const Discriminant d(-n);
    const auto P = hilbert_class_polynomial(d, cfg);
    ASSERT_EQ(P.degree(), class_number(d));
    ASSERT_EQ(P.coefficients.back(), 1);
    const auto forms = reduced_forms(d);
    // Horner cancels terms as large as |x|^h, so evaluate with that many
    // extra bits and ask for |P(x)| < 2^(-bits/4).
    PrecisionConfig eval = cfg;
    eval.working_bits = cfg.working_bits + hcp_initial_bits(d, P.degree(), cfg);
    const BigFloat bound = BigFloat::pow2(-cfg.working_bits / 4, eval.working_bits);
    for (const auto& f : forms) {
      const Complex x = singular_modulus(d, f, eval);
      ASSERT_LT(abs(horner(P, x)), bound) << n << " " << f;
    }
    // the principal modulus is real
    const Complex xp = singular_modulus(d, forms.front(), cfg);
    ASSERT_LT(abs(xp.im), BigFloat::pow2(-64, 256)) << n;
  }
}

TEST(JFunction, CacheRoundTrip) {
  const auto dir = fresh_dir("cache");
  HcpCache cache(dir);
  const Discriminant d(-71);
  EXPECT_FALSE(cache.load(d).has_value());
  const auto p = hilbert_class_polynomial_cached(d, {}, &cache);
  ASSERT_TRUE(std::filesystem::exists(cache.file_for(d)));
  const auto again = cache.load(d);
  ASSERT_TRUE(again.has_value());
  EXPECT_EQ(again->coefficients, p.coefficients);
  EXPECT_EQ(hilbert_class_polynomial_cached(d, {}, &cache).coefficients, p.coefficients);

  // a damaged record is ignored and recomputed
  { std::ofstream(cache.file_for(d)) << "{not json"; }
  EXPECT_FALSE(cache.load(d).has_value());
  EXPECT_EQ(hilbert_class_polynomial_cached(d, {}, &cache).coefficients, p.coefficients);
  EXPECT_TRUE(cache.load(d).has_value());
  std::filesystem::remove_all(dir);
}

TEST(JFunction, BoundOnSmallDiscriminants) {
  PrecisionConfig cfg;
  for (i64 n = 3; n <= 100; ++n) {
    if (!is_discriminant(-n)) continue;
    EXPECT_TRUE(check_j_bound(Discriminant(-n), cfg)) << n;
  }
}
