#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <numeric>

#include "pointless/testvar.hpp"
#include "support.hpp"

using namespace pointless;
using testvar::PointStatus;

namespace {

const testvar::TestVariety& v32() {
  static const auto v = testvar::build_test_variety(3, 2);
  return v;
}

const testvar::TestVariety& v21() {
  static const auto v = testvar::build_test_variety(2, 1);
  return v;
}

// A variety whose "certificate" is a curve with rational points.
testvar::TestVariety tampered(std::uint64_t p, unsigned k, unsigned n) {
  const auto F = gf::make_field(p, k * n);
  const auto curve = hyperell::new_curve(F, 1, gf::UniPoly(F), gf::UniPoly::from_ints(F, {1, 1, 0, 1}));
  std::vector<BigInt> counts{BigInt(hyperell::count_points(curve, 1))};
  search::PointlessCertificate cert{curve, zeta::l_from_counts(F->size(), 1, counts), 8, {}, {}, 0, {1}};
  testvar::TestVariety v;
  v.q = gf::checked_field_size(p, k).value();
  v.p = p;
  v.n = n;
  v.genus = 1;
  v.cert = cert;
  return v;
}

}  // namespace

TEST(TestVariety, BuildOverF3WithNTwo) {
  const auto& v = v32();
  EXPECT_EQ(v.backing, testvar::Backing::certificate);
  ASSERT_TRUE(v.cert.has_value());
  EXPECT_EQ(v.cert->curve.q(), 9U);
  EXPECT_EQ(v.cert->curve.genus(), 5U);
  EXPECT_EQ(oracle::brute_count(v.cert->curve, 1), 0U);
  ASSERT_TRUE(v.compiled.has_value());
  EXPECT_EQ(v.compiled->target.num_vars(), 4U);
  EXPECT_EQ(v.compiled->target.equations.size(), 2U);
  EXPECT_LE(v.lang_weil, 4U);
}

TEST(TestVariety, BuildOverF2WithNOne) {
  const auto& v = v21();
  ASSERT_TRUE(v.cert.has_value());
  EXPECT_EQ(v.cert->curve.q(), 2U);
  EXPECT_EQ(v.cert->curve.genus(), 3U);
  EXPECT_EQ(v.cert->genera_tried, (std::vector<unsigned>{1, 3}));
}

TEST(TestVariety, ZeroBudget) {
  testvar::BuildOptions opts;
  opts.search.budget = 0;
  EXPECT_THROW(testvar::build_test_variety(2, 5, opts), BudgetExhausted);
}

TEST(TestVariety, HasPointExamples) {
  const auto v = testvar::build_test_variety(2, 5);
  EXPECT_FALSE(testvar::has_point(v, 5));
  EXPECT_TRUE(testvar::has_point(v, 4));
  EXPECT_FALSE(testvar::has_point(v32(), 2));
  EXPECT_EQ(testvar::count(v32(), 2), 0);
  EXPECT_EQ(testvar::count(v32(), 1), 0);
}

TEST(TestVariety, CountIsCurveCountToTheGcd) {
  const auto& v = v32();
  for (unsigned m = 1; m <= 12; ++m) {
    const unsigned g = std::gcd(m, 2U);
    const unsigned e = std::lcm(m, 2U) / 2;
    EXPECT_EQ(testvar::count(v, m), ipow(testvar::curve_count(v, e), g));
    EXPECT_EQ(testvar::curve_count(v, e), zeta::counts_from_l(v.cert->l_poly, e));
  }
}

TEST(TestVariety, HasPointDependsOnlyOnLcm) {
  for (const auto* v : {&v32(), &v21()}) {
    std::map<unsigned, bool> by_lcm;
    for (unsigned m = 1; m <= 48; ++m) {
      const unsigned l = std::lcm(m, v->n);
      const bool h = testvar::has_point(*v, m);
      auto [it, fresh] = by_lcm.try_emplace(l, h);
      EXPECT_EQ(it->second, h) << "m=" << m;
    }
  }
}

TEST(TestVariety, BulletsHoldUpToFourNPlusEight) {
  for (const auto* v : {&v32(), &v21()}) {
    const unsigned m_max = 4 * v->n + 8;
    const auto r = testvar::verify_prop21(*v, m_max);
    for (unsigned m = 1; m <= m_max; ++m) {
      const bool b1 = v->n % m == 0;
      const bool b2 = std::lcm(m, v->n) >= 4 * v->n;
      if (b1 || b2) {
        EXPECT_EQ(testvar::has_point(*v, m), b2);
      }
      const bool listed1 = std::find(r.bullet1.begin(), r.bullet1.end(), m) != r.bullet1.end();
      const bool listed2 = std::find(r.bullet2.begin(), r.bullet2.end(), m) != r.bullet2.end();
      EXPECT_EQ(listed1, b1);
      EXPECT_EQ(listed2, b2);
    }
  }
}

TEST(TestVariety, GapReportForF3) {
  const auto r = testvar::verify_prop21(v32(), 12);
  std::vector<unsigned> gap;
  for (const auto& [m, s] : r.gap) {
    gap.push_back(m);
    EXPECT_NE(s, PointStatus::unknown);
  }
  EXPECT_EQ(gap, (std::vector<unsigned>{3, 4, 6}));
  EXPECT_EQ(r.bullet1, (std::vector<unsigned>{1, 2}));
  EXPECT_FALSE(r.cross_checks.empty());
  for (const auto& c : r.cross_checks) EXPECT_EQ(c.expected, c.enumerated);
  ASSERT_TRUE(r.smoothness.has_value());
  EXPECT_TRUE(r.smoothness->smooth);
}

TEST(TestVariety, NOneHasNoGap) {
  const auto r = testvar::verify_prop21(v21(), 8);
  EXPECT_EQ(r.bullet1, (std::vector<unsigned>{1}));
  EXPECT_EQ(r.bullet2, (std::vector<unsigned>{4, 5, 6, 7, 8}));
  std::vector<unsigned> gap;
  for (const auto& [m, s] : r.gap) gap.push_back(m);
  EXPECT_EQ(gap, (std::vector<unsigned>{2, 3}));
}

TEST(TestVariety, TamperedCurveFailsAtN) {
  try {
    testvar::verify_prop21(tampered(3, 1, 1), 8);
    FAIL();
  } catch (const AssertionFailed& e) {
    EXPECT_EQ(e.m(), 1U);
  }
  // For n = 2 the first divisor of n already sees N_C(1) > 0.
  try {
    testvar::verify_prop21(tampered(3, 1, 2), 8);
    FAIL();
  } catch (const AssertionFailed& e) {
    EXPECT_EQ(e.m(), 1U);
  }
}

TEST(TestVariety, MMaxMustReachFourN) { EXPECT_THROW(testvar::verify_prop21(v32(), 7), Error); }

TEST(TestVariety, BulletBackedLargeN) {
  const auto v = testvar::build_test_variety(2, 47);
  EXPECT_EQ(v.backing, testvar::Backing::bullets);
  EXPECT_FALSE(v.cert.has_value());
  EXPECT_FALSE(v.compiled.has_value());
  EXPECT_LE(v.lang_weil, 4U);
  EXPECT_EQ(testvar::point_status(v, 47), PointStatus::empty);
  EXPECT_EQ(testvar::point_status(v, 1), PointStatus::empty);
  EXPECT_EQ(testvar::point_status(v, 4), PointStatus::nonempty);
  EXPECT_EQ(testvar::point_status(v, 94), PointStatus::unknown);
  try {
    testvar::has_point(v, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::undetermined);
  }
  const auto r = testvar::verify_prop21(v, 4 * 47);
  EXPECT_EQ(r.backing, testvar::Backing::bullets);
  EXPECT_TRUE(r.cross_checks.empty());
  testvar::BuildOptions strict;
  strict.allow_bullets = false;
  EXPECT_THROW(testvar::build_test_variety(2, 47, strict), Error);
}

TEST(TestVariety, CacheRoundTrip) {
  oracle::TempPath path("pointless-testvar");
  testvar::BuildOptions opts;
  opts.cache_path = path.str();
  testvar::BuildInfo first, second;
  const auto a = testvar::build_test_variety(3, 2, opts, &first);
  const auto b = testvar::build_test_variety(3, 2, opts, &second);
  EXPECT_FALSE(first.from_cache);
  EXPECT_TRUE(second.from_cache);
  EXPECT_EQ(a.cert->curve, b.cert->curve);
  EXPECT_EQ(a.cert->l_poly, b.cert->l_poly);
}

TEST(TestVariety, CorruptCacheEntriesAreIgnored) {
  oracle::TempPath path("pointless-corrupt");
  testvar::BuildOptions opts;
  opts.cache_path = path.str();
  testvar::build_test_variety(2, 1, opts);
  std::ifstream in(path.str());
  auto doc = io::json::parse(in);
  in.close();
  doc["entries"][0]["l_poly"]["coeffs"][1] = "5";
  std::ofstream(path.str()) << doc.dump();
  testvar::BuildInfo info;
  const auto v = testvar::build_test_variety(2, 1, opts, &info);
  EXPECT_FALSE(info.from_cache);
  EXPECT_EQ(info.cache_rejected, 1U);
  EXPECT_TRUE(search::check_certificate(*v.cert).ok);
}

TEST(TestVariety, Json) {
  const auto j = testvar::to_json(v32());
  EXPECT_EQ(j.at("backing"), "certificate");
  EXPECT_EQ(j.at("compiled").at("num_vars"), 4);
  EXPECT_EQ(j.at("certificate").at("curve").at("field").at("k"), 2);
  const auto r = testvar::to_json(testvar::verify_prop21(v32(), 12));
  EXPECT_EQ(r.at("gap").size(), 3U);
  EXPECT_TRUE(r.at("passed").get<bool>());
}
