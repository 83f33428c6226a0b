#include <gtest/gtest.h>

#include <random>

#include "pointless/hyperell.hpp"
#include "pointless/zeta.hpp"
#include "support.hpp"

using namespace pointless;

namespace {

zeta::LPoly lpoly(std::int64_t q, unsigned g, std::vector<std::int64_t> c) {
  zeta::LPoly l{q, g, {}};
  for (auto v : c) l.coeffs.emplace_back(v);
  return l;
}

std::vector<BigInt> brute_counts(const hyperell::Curve& c, unsigned upto) {
  std::vector<BigInt> out;
  for (unsigned m = 1; m <= upto; ++m) out.emplace_back(hyperell::count_points(c, m));
  return out;
}

}  // namespace

TEST(Zeta, FromCountsExamples) {
  EXPECT_EQ(zeta::l_from_counts(2, 1, {1}), lpoly(2, 1, {1, -2, 2}));
  EXPECT_EQ(zeta::l_from_counts(3, 1, {4}), lpoly(3, 1, {1, 0, 3}));
  try {
    zeta::l_from_counts(2, 1, {0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::inconsistent_counts);
  }
}

TEST(Zeta, ExtrapolationExamples) {
  EXPECT_EQ(zeta::counts_from_l(lpoly(2, 1, {1, -2, 2}), 2), 5);
  EXPECT_EQ(zeta::counts_from_l(lpoly(3, 1, {1, 0, 3}), 2), 16);
  EXPECT_EQ(zeta::counts_from_l(lpoly(2, 1, {1, -2, 2}), 1), 1);
  EXPECT_THROW(zeta::counts_from_l(lpoly(2, 1, {1, -2, 2}), 0), Error);
}

TEST(Zeta, HasseWeilExamples) {
  EXPECT_TRUE(zeta::hasse_weil_ok(2, 1, 1, 1));
  EXPECT_FALSE(zeta::hasse_weil_ok(2, 1, 1, 6));
  EXPECT_TRUE(zeta::hasse_weil_ok(3, 2, 1, 0));
}

TEST(Zeta, FunctionalEquationExamples) {
  EXPECT_TRUE(zeta::functional_equation_ok(lpoly(2, 1, {1, -2, 2})));
  EXPECT_FALSE(zeta::functional_equation_ok(lpoly(2, 1, {1, -2, 3})));
  EXPECT_TRUE(zeta::functional_equation_ok(lpoly(5, 0, {1})));
  EXPECT_FALSE(zeta::functional_equation_ok(lpoly(2, 1, {1, -2})));
}

TEST(Zeta, LangWeilThreshold) {
  // (q^m + 1)^2 > 4 g^2 q^m first holds at m = 1 for q = 2, g = 1: 9 > 8.
  EXPECT_EQ(zeta::lang_weil_threshold(2, 1), 1U);
  EXPECT_LE(zeta::lang_weil_threshold(9, 5), 4U);
  for (std::int64_t q : {2, 3, 4, 5, 7, 8, 9, 16, 25, 1024}) {
    for (std::int64_t g = 1; g <= 40; ++g) {
      const unsigned t = zeta::lang_weil_threshold(q, g);
      const auto holds = [&](unsigned m) {
        const BigInt qm = ipow(BigInt(q), m);
        return (qm + 1) * (qm + 1) > 4 * BigInt(g) * g * qm;
      };
      EXPECT_TRUE(holds(t));
      if (t > 1) {
        EXPECT_FALSE(holds(t - 1));
      }
      for (unsigned m = t; m < t + 6; ++m) EXPECT_TRUE(holds(m));
    }
  }
}

TEST(Zeta, NegativeCountIsReported) {
  // A polynomial with the right shape but S_1 = 4 > q + 1.
  try {
    zeta::counts_from_l(lpoly(2, 2, {1, -4, 8, -8, 4}), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::negative_count);
  }
}

TEST(Zeta, WrongNumberOfCounts) { EXPECT_THROW(zeta::l_from_counts(3, 2, {4}), Error); }

TEST(Zeta, RoundTripAgainstBruteForce) {
  std::mt19937_64 rng(42);
  for (auto [p, k] : std::vector<oracle::PK>{{2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {3, 2}}) {
    const auto F = gf::make_field(p, k);
    for (unsigned g = 1; g <= 3; ++g) {
      const auto c = oracle::random_curve(F, g, rng);
      const auto counts = brute_counts(c, g);
      const auto l = zeta::l_from_counts(F->size(), g, counts);
      EXPECT_TRUE(zeta::functional_equation_ok(l));
      for (unsigned m = 1; gf::checked_field_size(p, k * m).value() <= (1U << 14); ++m) {
        const std::uint64_t direct =
            F->size() <= 8 && m <= 3 ? oracle::brute_count(c, m) : hyperell::count_points(c, m);
        EXPECT_EQ(zeta::counts_from_l(l, m), BigInt(direct)) << c.to_string() << " m=" << m;
        EXPECT_TRUE(zeta::hasse_weil_ok(F->size(), g, m, zeta::counts_from_l(l, m)));
      }
    }
  }
}

TEST(Zeta, PowerSumsSatisfyNewton) {
  const auto l = lpoly(3, 2, {1, 2, 4, 6, 9});
  const auto s = zeta::power_sums(l, 6);
  EXPECT_EQ(s[1], -2);
  EXPECT_EQ(s[2], BigInt(-2) * s[1] - 2 * 4);
}

TEST(Zeta, ToString) { EXPECT_EQ(lpoly(2, 1, {1, -2, 2}).to_string(), "1 - 2*T + 2*T^2"); }
