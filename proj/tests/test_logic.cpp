#include <gtest/gtest.h>

#include <random>

#include "pointless/logic.hpp"
#include "pointless/sentence.hpp"
#include "support.hpp"

using namespace pointless;
using logic::Expr;
using logic::Formula;
using logic::Sentence;

namespace {

Sentence random_sentence(std::mt19937_64& rng, std::uint64_t p) {
  std::uniform_int_distribution<int> nv(1, 3), na(1, 3);
  Sentence s;
  s.p = p;
  for (int i = nv(rng); i > 0; --i) s.vars.push_back(std::string(1, static_cast<char>('a' + s.vars.size())));
  s.body = oracle::random_formula(s.vars, p, static_cast<unsigned>(na(rng)), 3, rng);
  return s;
}

bool any_system_solvable(const std::vector<PolySystem>& systems, unsigned m) {
  for (const auto& sys : systems) {
    if (has_solution(sys, m, std::uint64_t{1} << 26)) return true;
  }
  return false;
}

logic::PlaceProfile profile_of(std::uint64_t p, std::set<std::uint64_t> degrees) {
  return {p, [degrees](std::uint64_t d) { return degrees.count(d) > 0; }, {}, "test"};
}

std::set<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) {
  std::set<std::uint64_t> out;
  for (std::uint64_t x = lo; x < hi; ++x) {
    bool prime = x > 1;
    for (std::uint64_t d = 2; d * d <= x; ++d) prime = prime && x % d != 0;
    if (prime) out.insert(x);
  }
  return out;
}

}  // namespace

TEST(Parse, Examples) {
  const auto s = logic::parse("(exists (x) (= (* x x) 2))", 7);
  EXPECT_EQ(s.p, 7U);
  EXPECT_EQ(s.vars, std::vector<std::string>{"x"});
  EXPECT_EQ(s.body, Formula::eq(Expr::mul({Expr::var("x"), Expr::var("x")}), Expr::integer(2)));
  const auto t = logic::parse("p: 3\n(exists (x y) (and (= y 0) (!= x 0)))");
  ASSERT_EQ(t.body.children.size(), 2U);
  EXPECT_EQ(t.body.children[1].kind, Formula::Kind::neq);
}

TEST(Parse, HeadersCommentsAndLiterals) {
  const auto s = logic::parse("; a comment\np: 2\nk: 2\n(exists (x) (= (+ x (elt 0 1)) -1)) ; trailing\n");
  EXPECT_EQ(s.k, 2U);
  EXPECT_EQ(s.body.sides[0].args[1].digits, (std::vector<std::int64_t>{0, 1}));
  EXPECT_EQ(s.body.sides[1], Expr::integer(-1));
  EXPECT_TRUE(logic::parse("p: 5\n(exists () (and))").vars.empty());
  EXPECT_THROW(logic::parse("p: 5 (exists () (and))"), SyntaxError);
}

TEST(Parse, SyntaxErrors) {
  EXPECT_THROW(logic::parse("(exists (x", 2), SyntaxError);
  EXPECT_THROW(logic::parse("(exists (x) (= y 0))", 2), SyntaxError);
  EXPECT_THROW(logic::parse("(exists (x) (= x 0))"), SyntaxError);
  EXPECT_THROW(logic::parse("p: 4\n(exists (x) (= x 0))"), SyntaxError);
  EXPECT_THROW(logic::parse("(exists (x x) (= x 0))", 2), SyntaxError);
  EXPECT_THROW(logic::parse("(exists (x) (= x 0)) extra", 2), SyntaxError);
  EXPECT_THROW(logic::parse("(exists (x) (xor (= x 0)))", 2), SyntaxError);
  EXPECT_THROW(logic::parse("(exists (x) (= (^ x -1) 0))", 2), SyntaxError);
  try {
    logic::parse("(exists (x) (= y 0))", 2);
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.position(), 15U);
  }
}

TEST(Parse, PrintRoundTrip) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto s = random_sentence(rng, std::vector<std::uint64_t>{2, 3, 5}[i % 3]);
    const std::string text = logic::print(s);
    EXPECT_EQ(logic::parse(text), s) << text;
    EXPECT_EQ(logic::print(logic::parse(text)), text);
  }
}

TEST(Parse, ExprMpolyRoundTrip) {
  std::mt19937_64 rng(8);
  const auto F = gf::make_field(3, 2);
  const std::vector<std::string> vars{"a", "b"};
  for (int i = 0; i < 100; ++i) {
    const auto e = oracle::random_expr(vars, 3, 4, rng);
    const MPoly f = logic::to_mpoly(e, F, vars);
    EXPECT_EQ(logic::to_mpoly(logic::to_expr(f, vars), F, vars), f);
  }
  const MPoly x = MPoly::variable(F, 2, 0), y = MPoly::variable(F, 2, 1);
  EXPECT_EQ(logic::print(logic::to_expr(x * x * y + y.scale(F->from_int(2)) + MPoly::constant(F, 2, F->gen()), vars)),
            "(+ (* (^ a 2) b) (* 2 b) (elt 0 1))");
}

TEST(Normalize, Examples) {
  const auto neq = logic::normalize(logic::parse("(exists (x) (!= x 0))", 5));
  ASSERT_EQ(neq.size(), 1U);
  const auto F5 = gf::make_field(5, 1);
  const MPoly x = MPoly::variable(F5, 2, 0), z = MPoly::variable(F5, 2, 1);
  EXPECT_EQ(neq[0].var_names, (std::vector<std::string>{"x", "z0"}));
  EXPECT_EQ(neq[0].equations, std::vector<MPoly>{x * z - MPoly::constant(F5, 2, F5->one())});

  const auto disj = logic::normalize(logic::parse("(exists (x) (or (= x 0) (= x 1)))", 5));
  ASSERT_EQ(disj.size(), 2U);
  const MPoly x1 = MPoly::variable(F5, 1, 0);
  EXPECT_EQ(disj[0].equations, std::vector<MPoly>{x1});
  EXPECT_EQ(disj[1].equations, std::vector<MPoly>{x1 - MPoly::constant(F5, 1, F5->one())});
}

TEST(Normalize, FreshNamesAvoidCollisions) {
  const auto sys = logic::normalize(logic::parse("(exists (z0 z1) (and (!= z0 0) (!= z1 1)))", 3));
  ASSERT_EQ(sys.size(), 1U);
  EXPECT_EQ(sys[0].var_names, (std::vector<std::string>{"z0", "z1", "_z0", "_z1"}));
}

TEST(Normalize, EmptyConnectives) {
  EXPECT_TRUE(logic::normalize(logic::parse("(exists (x) (or))", 2)).empty());
  const auto t = logic::normalize(logic::parse("(exists (x) (and))", 2));
  ASSERT_EQ(t.size(), 1U);
  EXPECT_TRUE(t[0].equations.empty());
  EXPECT_TRUE(logic::satisfiable_brute(logic::parse("(exists (x) (and))", 2), 1));
  EXPECT_FALSE(logic::satisfiable_brute(logic::parse("(exists (x) (or))", 2), 1));
}

TEST(Normalize, SoundOnRandomFormulas) {
  std::mt19937_64 rng(2718);
  int checked = 0;
  for (int i = 0; i < 120; ++i) {
    const std::uint64_t p = std::vector<std::uint64_t>{2, 3, 5}[i % 3];
    const auto s = random_sentence(rng, p);
    const auto systems = logic::normalize(s);
    for (unsigned m = 1; m <= 3; ++m) {
      if (ipow(ipow(BigInt(p), m), s.vars.size()) > 20000) continue;
      EXPECT_EQ(logic::satisfiable_brute(s, m), any_system_solvable(systems, m)) << logic::print(s) << " m=" << m;
      for (const auto& sys : systems) {
        if (ipow(ipow(BigInt(p), m), sys.num_vars()) > 5000) continue;
        EXPECT_EQ(has_solution(sys, m), !brute_solutions(sys, m).empty());
      }
      ++checked;
    }
  }
  EXPECT_GT(checked, 150);
}

TEST(Places, DegreeCount) {
  EXPECT_EQ(logic::degree_count(2, 1), 2);
  EXPECT_EQ(logic::degree_count(2, 2), 1);
  EXPECT_EQ(logic::degree_count(3, 3), 8);
  for (std::uint64_t p : {2, 3, 5}) {
    for (unsigned d = 1; d <= 5 && ipow(BigInt(p), d) < 4000; ++d) {
      std::uint64_t total = 1, n = 0;
      for (unsigned i = 0; i < d; ++i) total *= p;
      for (std::uint64_t idx = 0; idx < total; ++idx) n += oracle::irreducible(oracle::monic_from_index(idx, d, p), p);
      EXPECT_EQ(logic::degree_count(p, d), BigInt(n)) << p << " " << d;
    }
  }
}

TEST(Places, PrescriptionExamples) {
  logic::Prescription pres{{5}, {7}, 4};
  const auto prof = logic::apply_prescription(logic::base_profile(2), pres);
  EXPECT_TRUE(prof.occurs(5));
  EXPECT_TRUE(prof.occurs(8));
  EXPECT_GE(std::lcm(7ULL, 8ULL), 28ULL);
  EXPECT_FALSE(prof.occurs(7));
  EXPECT_FALSE(prof.occurs(1));
  EXPECT_FALSE(prof.occurs(14));
  EXPECT_TRUE(prof.occurs(4 * 7));
  EXPECT_NE(prof.provenance.find("S1={5}"), std::string::npos);
}

TEST(Places, InvalidPrescriptions) {
  EXPECT_THROW(logic::validate({{4}, {}, 4}), Error);
  EXPECT_THROW(logic::validate({{9}, {}, 4}), Error);
  EXPECT_THROW(logic::validate({{5}, {5}, 4}), Error);
  EXPECT_THROW(logic::validate({{5}, {7}, 3}), Error);
  EXPECT_NO_THROW(logic::validate({{}, {}, 1}));
}

TEST(Places, RandomPrescriptionsSatisfyConditions) {
  std::mt19937_64 rng(31337);
  const auto pool = primes_between(5, 100);
  const std::vector<std::uint64_t> primes(pool.begin(), pool.end());
  for (int t = 0; t < 50; ++t) {
    logic::Prescription pres;
    for (std::uint64_t l : primes) {
      const int r = static_cast<int>(rng() % 4);
      if (r == 0) pres.s1.insert(l);
      if (r == 1) pres.s2.insert(l);
    }
    pres.multiplier = std::vector<unsigned>{1, 2, 4}[rng() % 3];
    const auto prof = logic::apply_prescription(logic::base_profile(2), pres);
    for (std::uint64_t l : pres.s1) EXPECT_TRUE(prof.occurs(l));
    for (std::uint64_t l : pres.s2) {
      for (std::uint64_t d = 1; d < 16 * l; ++d) {
        if (prof.occurs(d)) {
          EXPECT_GE(std::lcm(l, d), 4 * l) << "l=" << l << " d=" << d;
        }
      }
    }
  }
}

TEST(Places, ConditionCheckerFlagsViolations) {
  const logic::Prescription pres{{5}, {7}, 4};
  EXPECT_FALSE(logic::check_conditions(profile_of(2, {7}), pres).ok);
  EXPECT_FALSE(logic::check_conditions(profile_of(2, {14}), pres).ok);
  EXPECT_FALSE(logic::check_conditions(profile_of(2, {}), pres).ok);
  EXPECT_TRUE(logic::check_conditions(profile_of(2, {5, 28}), pres).ok);
}

TEST(Evaluate, QueryDegrees) {
  EXPECT_EQ(logic::query_degrees(7), (std::vector<std::uint64_t>{1, 2, 3, 7, 14, 21}));
  EXPECT_EQ(logic::query_degrees(2), (std::vector<std::uint64_t>{1, 2, 3, 4, 6}));
}

TEST(Evaluate, Examples) {
  const auto v = testvar::build_test_variety(2, 7);
  EXPECT_FALSE(logic::evaluate(v, profile_of(2, {7})));
  EXPECT_TRUE(logic::evaluate(v, profile_of(2, {4, 5, 28})));
  for (unsigned l : {5, 7, 11, 13}) {
    EXPECT_FALSE(logic::evaluate(testvar::build_test_variety(2, l), logic::base_profile(2)));
  }
  try {
    logic::evaluate(v, profile_of(2, {2}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::undetermined);
  }
}

TEST(Evaluate, MonotoneInOccurringDegrees) {
  const auto v = testvar::build_test_variety(3, 2);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    std::set<std::uint64_t> small, big;
    for (std::uint64_t d = 1; d <= 12; ++d) {
      const auto r = rng() % 3;
      if (r == 0) small.insert(d);
      if (r <= 1) big.insert(d);
    }
    if (logic::evaluate(v, profile_of(3, big))) {
      EXPECT_TRUE(logic::evaluate(v, profile_of(3, small)));
    }
  }
}

TEST(Reduction, AgreesWithMembership) {
  for (const char* name : {"mod4eq1", "evenbin", "all"}) {
    const auto s = logic::sample_set(name);
    for (std::uint64_t l : primes_between(5, 50)) {
      const auto r = logic::reduction_check(s, l);
      EXPECT_EQ(r.value, s(l)) << name << " l=" << l;
      EXPECT_EQ(r.prescription.s1.count(l) + r.prescription.s2.count(l), 1U);
    }
  }
}

TEST(Reduction, Examples) {
  const auto s = logic::sample_set("mod4eq1");
  EXPECT_TRUE(logic::reduction_check(s, 13).value);
  const auto r7 = logic::reduction_check(s, 7);
  EXPECT_FALSE(r7.value);
  EXPECT_EQ(r7.occurring, std::vector<std::uint64_t>{7});
  EXPECT_EQ(r7.backing, testvar::Backing::bullets);
  EXPECT_THROW(logic::reduction_check(s, 4), Error);
  EXPECT_THROW(logic::reduction_check(s, 9), Error);
}

TEST(Reduction, SampleSets) {
  EXPECT_TRUE(logic::sample_set("evenbin")(5));
  EXPECT_FALSE(logic::sample_set("evenbin")(7));
  EXPECT_TRUE(logic::sample_set("list:5,13")(13));
  EXPECT_FALSE(logic::sample_set("list:5,13")(7));
  EXPECT_FALSE(logic::sample_set("none")(5));
  EXPECT_THROW(logic::sample_set("primes"), Error);
  EXPECT_THROW(logic::sample_set("list:5,x"), Error);
}

TEST(Encode, CompiledVariety) {
  const auto v = testvar::build_test_variety(2, 2);
  const auto s = logic::encode_variety(v);
  EXPECT_EQ(s.vars.size(), 4U);
  EXPECT_EQ(s.body.children.size(), 2U);
  EXPECT_EQ(logic::to_system(logic::parse(logic::print(s))), v.compiled->target);
  for (unsigned m = 1; m <= 3; ++m) EXPECT_EQ(logic::satisfiable_brute(s, m), testvar::has_point(v, m));
}

TEST(Encode, BulletVarietyIsNotCompiled) {
  try {
    logic::encode_variety(testvar::build_test_variety(2, 11));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_compiled);
  }
}

TEST(Encode, SystemRoundTrip) {
  const auto F = gf::make_field(2, 3);
  const MPoly a = MPoly::variable(F, 2, 0), b = MPoly::variable(F, 2, 1);
  const PolySystem sys(F, {"a", "b"}, {a * b + MPoly::constant(F, 2, F->gen()), a.pow(3) - b});
  EXPECT_EQ(logic::to_system(logic::parse(logic::print(logic::to_sentence(sys)))), sys);
}
