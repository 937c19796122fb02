#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "timewarp/fuzz.hpp"
#include "timewarp/parser.hpp"
#include "timewarp/pipeline.hpp"

using namespace timewarp;

namespace {

Verdict run(const char* text) { return decide(parse_query(text)); }

void expect_invalid(const char* text) {
  Query q = parse_query(text);
  Verdict v = decide(q);
  ASSERT_FALSE(v.valid) << text;
  ASSERT_TRUE(v.counterexample.has_value());
  const Counterexample& c = *v.counterexample;
  EXPECT_TRUE(c.verified);
  EXPECT_TRUE(verify(c.valuation, c.p, c.goals)) << to_string(c);
  EXPECT_TRUE(refutes(q, c.valuation, c.p)) << to_string(c);
}

}  // namespace

TEST(Pipeline, ValidExamples) {
  EXPECT_TRUE(run("id <= x \\ x").valid);
  EXPECT_TRUE(run("id <= x / x").valid);
  EXPECT_TRUE(run("top == id / bot").valid);
  EXPECT_TRUE(run("x (y z) == (x y) z").valid);
  EXPECT_TRUE(run("id").valid);
}

TEST(Pipeline, InvalidExamples) {
  expect_invalid("id <= x");
  expect_invalid("x y == y x");
  expect_invalid("id <= bot");
  expect_invalid("x & y == x | y");
  expect_invalid("id <= x y x^l | y^l");
}

TEST(Pipeline, KnownWitnessesRefute) {
  EXPECT_TRUE(refutes(parse_query("id <= x"), {{"x", Warp::bottom()}}, ExtNat(1)));
  // (xy)(1) = ω but (yx)(1) = 1; the residuated goal id ≤ yx/xy first fails at 2
  Valuation comm{{"x", Warp::top()}, {"y", Warp::unit_step()}};
  EXPECT_EQ(interpret(parse_term("x y"), comm)(ExtNat(1)), kOmega);
  EXPECT_EQ(interpret(parse_term("y x"), comm)(ExtNat(1)), ExtNat(1));
  EXPECT_TRUE(refutes(parse_query("x y == y x"), comm, ExtNat(2)));
  EXPECT_FALSE(refutes(parse_query("id <= x"), {{"x", Warp::identity()}}, ExtNat(1)));
}

TEST(Pipeline, GoalsAndDirections) {
  Verdict v = run("x y == y x");
  ASSERT_FALSE(v.goals.empty());
  EXPECT_EQ(v.goals[v.goal_index].outcome, GoalReport::Outcome::Invalid);
  EXPECT_EQ(v.goals[v.goal_index].direction, v.direction);
  for (std::size_t i = 0; i < v.goal_index; ++i) EXPECT_EQ(v.goals[i].outcome, GoalReport::Outcome::Valid);
}

TEST(Pipeline, ThreadCountDoesNotChangeTheAnswer) {
  for (const char* q : {"x y == y x", "x & y == x | y", "x (y | z) w == x y w | x z w"}) {
    DecideOptions one, many;
    one.threads = 1;
    many.threads = 4;
    Verdict a = decide(parse_query(q), one), b = decide(parse_query(q), many);
    EXPECT_EQ(a.valid, b.valid) << q;
    EXPECT_EQ(a.goal_index, b.goal_index) << q;
    if (!a.valid) EXPECT_EQ(to_json(*a.counterexample), to_json(*b.counterexample)) << q;
  }
}

TEST(Pipeline, Trace) {
  DecideOptions opts;
  opts.trace = true;
  Verdict v = decide(parse_query("id <= x"), opts);
  ASSERT_EQ(v.goals.size(), 1u);
  EXPECT_NE(v.goals[0].trace.find("psi.struct"), std::string::npos);
  EXPECT_NE(v.goals[0].trace.find("x[κ]"), std::string::npos);
}

TEST(BruteRefute, Examples) {
  std::optional<Counterexample> c = brute_refute(parse_query("id <= bot"), default_pool(), 3);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->p, ExtNat(1));

  EXPECT_FALSE(brute_refute(parse_query("id <= x \\ x"), default_pool(), 4).has_value());

  // step(1 ↦ ω) is ⊤
  Warp step_omega = Warp::from_breakpoints({{Breakpoint{1, kOmega, false}}}, Tail::constant(kOmega));
  EXPECT_EQ(step_omega, Warp::top());
  std::vector<Warp> pool{Warp::bottom(), Warp::top(), Warp::identity(), step_omega};
  c = brute_refute(parse_query("id <= x y x^l | y^l"), pool, 4);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->valuation.at("x"), Warp::bottom());
  EXPECT_EQ(c->valuation.at("y"), step_omega);
  EXPECT_EQ(c->p, ExtNat(2));
}

TEST(Fuzz, SmallRunIsCleanAndDeterministic) {
  FuzzOptions fo;
  fo.queries = 25;
  fo.seed = 3;
  FuzzReport a = fuzz(fo), b = fuzz(fo);
  EXPECT_EQ(a.mismatches(), 0u) << to_json(a).dump(2);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  EXPECT_EQ(a.queries, 25u);
  EXPECT_EQ(a.valid + a.invalid + a.budget_exceeded, a.queries);
}

TEST(Fuzz, GeneratorRespectsLimits) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    Query q = random_query(rng, 3, 2);
    for (const std::string& v : free_vars(q)) EXPECT_TRUE(v == "x" || v == "y") << v;
  }
}
