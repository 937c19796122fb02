#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "timewarp/constraints.hpp"
#include "timewarp/solve.hpp"

using namespace timewarp;

namespace {

BasicTerm x() { return BasicTerm::var("x"); }

struct XDelta {
  std::vector<SampleId> goals;
  SampleSet delta = saturate_goals({BasicTerm::var("x")}, {}, &goals);
  SampleArena& ar() { return delta.arena(); }
  TermId tx() { return ar().intern(BasicTerm::var("x")); }
  SampleId kappa() { return *delta.find_kappa(); }
  SampleId xk() { return *delta.find_app(tx(), kappa()); }
  SampleId last() { return *delta.find_last(tx()); }
  SampleId xlast() { return *delta.find_app(tx(), last()); }

  Prediagram diagram(ExtNat k, ExtNat a, ExtNat l, ExtNat b) {
    Prediagram d(ar().size());
    d[kappa()] = k;
    d[xk()] = a;
    d[last()] = l;
    d[xlast()] = b;
    return d;
  }
};

bool has_condition(const std::vector<Violation>& v, int c) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.condition == c; });
}

bool psi_has(const Psi& psi, PsiSet set, const std::string& text, const SampleArena& ar) {
  return std::any_of(psi.clauses.begin(), psi.clauses.end(),
                     [&](const PsiClause& c) { return c.set == set && print(c.formula, ar) == text; });
}

}  // namespace

TEST(Constraints, PsiContents) {
  std::vector<SampleId> goals;
  SampleSet bot = saturate_goals({BasicTerm::bot()}, {}, &goals);
  Psi psi = build_psi(bot, goals);
  EXPECT_TRUE(psi_has(psi, PsiSet::Log, "I(last(bot))", bot.arena()));
  EXPECT_TRUE(psi_has(psi, PsiSet::Fail, "bot[κ] ≼ κ ∧ ¬κ ≼ bot[κ]", bot.arena()));

  XDelta xd;
  Psi px = build_psi(xd.delta, xd.goals);
  EXPECT_TRUE(psi_has(px, PsiSet::Struct, "last(x) ≼ κ ⇔ x[κ] ≗ x[last(x)]", xd.ar()));
  std::size_t fails = std::count_if(px.clauses.begin(), px.clauses.end(),
                                    [](const PsiClause& c) { return c.set == PsiSet::Fail; });
  EXPECT_EQ(fails, 1u);
}

TEST(Constraints, PsiRejectsUnsaturated) {
  auto arena = std::make_shared<SampleArena>();
  SampleSet s(arena);
  SampleId g = arena->app(arena->intern(x()), arena->kappa());
  s.insert(g);
  EXPECT_THROW(build_psi(s, {g}), std::invalid_argument);
}

TEST(Constraints, AtomSemantics) {
  XDelta xd;
  Prediagram d(xd.ar().size(), kOmega);
  EXPECT_TRUE(eval_atom(TauAtom{TauAtom::Kind::Leq, xd.kappa(), xd.xk()}, d));
  EXPECT_TRUE(eval_atom(TauAtom{TauAtom::Kind::Succ, xd.kappa(), xd.xk()}, d));
  d[xd.kappa()] = ExtNat(1);
  EXPECT_FALSE(eval_atom(TauAtom{TauAtom::Kind::IsZero, xd.kappa()}, d));
  d[xd.xk()] = ExtNat(2);
  EXPECT_TRUE(eval_atom(TauAtom{TauAtom::Kind::Succ, xd.kappa(), xd.xk()}, d));
  EXPECT_FALSE(eval_atom(TauAtom{TauAtom::Kind::Succ, xd.xk(), xd.kappa()}, d));
}

TEST(Constraints, CheckDiagramExamples) {
  XDelta xd;
  Prediagram ok = xd.diagram(ExtNat(1), ExtNat(0), ExtNat(0), ExtNat(0));
  EXPECT_TRUE(check_diagram(ok, xd.delta).empty());
  EXPECT_TRUE(fail_holds(ok, xd.delta, xd.goals));

  Prediagram zero = xd.diagram(ExtNat(0), ExtNat(1), ExtNat(0), ExtNat(1));
  EXPECT_TRUE(has_condition(check_diagram(zero, xd.delta), 2));
  EXPECT_STREQ(condition_name(2), "zero");

  Prediagram last = xd.diagram(ExtNat(1), ExtNat(0), kOmega, ExtNat(3));
  EXPECT_TRUE(has_condition(check_diagram(last, xd.delta), 6));
}

TEST(Constraints, DiagramFromValuation) {
  XDelta xd;
  Prediagram d = diagram_from_valuation({{"x", Warp::bottom()}}, ExtNat(1), xd.delta);
  EXPECT_EQ(d[xd.kappa()], ExtNat(1));
  EXPECT_EQ(d[xd.xk()], ExtNat(0));
  EXPECT_EQ(d[xd.last()], ExtNat(0));
  EXPECT_EQ(d[xd.xlast()], ExtNat(0));

  d = diagram_from_valuation({{"x", Warp::top()}}, ExtNat(0), xd.delta);
  EXPECT_EQ(d[xd.xk()], ExtNat(0));

  d = diagram_from_valuation({{"x", Warp::identity()}}, ExtNat(5), xd.delta);
  EXPECT_EQ(d[xd.xk()], ExtNat(5));
  EXPECT_EQ(d[xd.last()], kOmega);
  EXPECT_EQ(d[xd.xlast()], kOmega);
}

TEST(Constraints, ValuationDiagramsAreDiagrams) {
  std::mt19937_64 rng(41);
  std::vector<std::string> vars{"x", "y"};
  for (int i = 0; i < 60; ++i) {
    BasicTerm t = tw_test::random_basic(rng, 5, vars);
    SampleSet delta = saturate_goals({t});
    Valuation th{{"x", tw_test::random_warp(rng, 6, 6)}, {"y", tw_test::random_warp(rng, 6, 6)}};
    std::uint64_t k = tw_test::below(rng, 9);
    ExtNat p = k == 8 ? kOmega : ExtNat(k);
    Prediagram d = diagram_from_valuation(th, p, delta);
    std::vector<Violation> bad = check_diagram(d, delta);
    EXPECT_TRUE(bad.empty()) << print(t) << " violates " << (bad.empty() ? "" : condition_name(bad[0].condition));
  }
}

// ψ, the direct check, and the translated formula agree on every prediagram.
TEST(Constraints, PsiMatchesDirectCheck) {
  std::mt19937_64 rng(42);
  std::vector<std::string> vars{"x"};
  int accepted = 0;
  for (int i = 0; i < 120; ++i) {
    BasicTerm t = tw_test::random_basic(rng, 4, vars);
    std::vector<SampleId> goals;
    SampleSet delta = saturate_goals({t}, {}, &goals);
    Psi psi = build_psi(delta, goals);
    TauFormula all = psi.conjunction();
    SigmaFormula phi = translate(all);
    Prediagram d;
    switch (i % 3) {
      case 0: d = tw_test::random_prediagram(rng, delta.arena().size()); break;
      case 1: d = diagram_from_valuation({{"x", tw_test::random_warp(rng, 5, 5)}}, ExtNat(1 + i % 4), delta); break;
      default:
        d = tw_test::perturb(rng, diagram_from_valuation({{"x", tw_test::random_warp(rng, 5, 5)}},
                                                         ExtNat(1 + i % 4), delta));
    }
    bool direct = check_diagram(d, delta).empty() && fail_holds(d, delta, goals);
    EXPECT_EQ(eval_tau(all, d), direct) << print(t);
    EXPECT_EQ(eval_sigma(phi, encode(d)), direct) << print(t);
    accepted += direct;
  }
  EXPECT_GT(accepted, 0);
}
