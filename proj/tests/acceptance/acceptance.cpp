// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "timewarp/constraints.hpp"
#include "timewarp/extract.hpp"
#include "timewarp/fuzz.hpp"
#include "timewarp/parser.hpp"
#include "timewarp/pipeline.hpp"
#include "timewarp/saturate.hpp"
#include "timewarp/solve.hpp"

using namespace timewarp;
using tw_test::below;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> problems;

  void fail(std::string why) {
    pass = false;
    if (problems.size() < 5) problems.push_back(std::move(why));
  }
};

int report(int n, const char* title, const Outcome& o) {
  std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << title;
  if (!o.detail.empty()) std::cout << " (" << o.detail << ")";
  std::cout << "\n";
  for (const std::string& p : o.problems) std::cout << "    " << p << "\n";
  std::cout.flush();
  return o.pass ? 0 : 1;
}

constexpr double kPerQuerySeconds = 5.0;

// Decides each query, expecting `valid`; Invalid answers must verify.
Outcome decide_suite(const std::vector<const char*>& queries, bool valid) {
  Outcome o;
  double slowest = 0;
  for (const char* text : queries) {
    Query q = parse_query(text);
    auto t0 = Clock::now();
    Verdict v;
    try {
      v = decide(q);
    } catch (const std::exception& e) {
      o.fail(std::string(text) + ": " + e.what());
      continue;
    }
    double dt = seconds_since(t0);
    slowest = std::max(slowest, dt);
    if (dt >= kPerQuerySeconds) o.fail(std::string(text) + ": took " + std::to_string(dt) + " s");
    if (v.valid != valid) {
      o.fail(std::string(text) + ": expected " + (valid ? "Valid" : "Invalid") + ", got " + to_string(v));
      continue;
    }
    if (!valid) {
      const Counterexample& c = *v.counterexample;
      if (!verify(c.valuation, c.p, c.goals) || !refutes(q, c.valuation, c.p))
        o.fail(std::string(text) + ": counterexample does not verify: " + to_string(c));
    }
  }
  std::ostringstream os;
  os << queries.size() << " queries, slowest " << std::fixed;
  os.precision(2);
  os << slowest << " s";
  o.detail = os.str();
  return o;
}

Outcome identities() {
  return decide_suite(
      {
          "x \\ (y & z) == (x \\ y) & (x \\ z)",
          "(y & z) \\ x == (y \\ x) | (z \\ x)",
          "x \\ (y | z) == (x \\ y) | (x \\ z)",
          "(y | z) \\ x == (y \\ x) & (z \\ x)",
          "(y & z) / x == (y / x) & (z / x)",
          "x / (y & z) == (x / y) | (x / z)",
          "(y | z) / x == (y / x) | (z / x)",
          "x / (y | z) == (x / y) & (x / z)",
          "x \\ y == x^r y | (top x)^r | y^o",
          "y / x == y x^l | (x^l)^o",
          "top == id / bot",
          "x (y | z) w == x y w | x z w",
          "x (y & z) w == x y w & x z w",
          "(x y) z == x (y z)",
          "x id == x",
          "id x == x",
          "id <= x \\ x",
          "id <= x / x",
      },
      true);
}

Outcome invalidities() {
  return decide_suite({"id <= x", "id <= bot", "x y == y x", "x & y == x | y", "id <= x y x^l | y^l"}, false);
}

// fg ≤ h ⟺ g ≤ f\h ⟺ f ≤ h/g, plus the pointwise characterizations of the
// unary operations.
Outcome warp_calculator() {
  Outcome o;
  std::mt19937_64 rng(1001);
  std::size_t law_checks = 0, holds = 0;
  for (int i = 0; i < 1000; ++i) {
    Warp f = tw_test::random_warp(rng), g = tw_test::random_warp(rng), h = tw_test::random_warp(rng);
    // small perturbations make the inequalities hold now and then
    if (i % 3 == 0) h = join(h, compose(f, g));
    Warp fg = compose(f, g), fh = lres(f, h), hg = rres(h, g);
    std::uint64_t H = tw_test::horizon({&f, &g, &h, &fg, &fh, &hg});
    bool a = tw_test::pointwise_leq(fg, h, H);
    bool b = tw_test::pointwise_leq(g, fh, H);
    bool c = tw_test::pointwise_leq(f, hg, H);
    ++law_checks;
    holds += a;
    if (a != b || b != c)
      o.fail("residuation law: f=" + to_string(f) + " g=" + to_string(g) + " h=" + to_string(h));
  }

  std::size_t clause_checks = 0;
  auto clause = [&](bool lhs, bool rhs, const char* what, const Warp& f) {
    ++clause_checks;
    if (lhs != rhs) o.fail(std::string(what) + " fails for " + to_string(f));
  };
  const ExtNat w = kOmega;
  for (int i = 0; i < 1000; ++i) {
    Warp f = tw_test::random_warp(rng);
    Warp fo = op_o(f), fr = op_r(f), fl = op_l(f);
    std::uint64_t H = tw_test::horizon({&f, &fo, &fr, &fl});
    bool all_finite = !tw_test::reaches_omega_finitely(f, H);
    bool stable_at_omega = f(w) < w || (f(w) == w && all_finite);
    auto some_k = [&](const Warp& u, std::uint64_t m) {
      for (std::uint64_t k = 0; k <= H; ++k)
        if (u(k) == ExtNat(m)) return true;
      return false;
    };
    for (std::uint64_t n = 1; n <= 50; ++n) {
      ExtNat N(n);
      clause(fo(N) == ExtNat(0), f(N) < w, "o1", f);
      clause(fo(N) == w, f(N) == w, "o2", f);
      clause(fr(N) == w, f(w) <= N, "r2", f);
      clause(fl(N) == w, f(w) < N, "l2", f);
      for (std::uint64_t m = 0; m <= 50; ++m) {
        ExtNat M(m);
        clause(fr(N) == M, f(M) <= N && N < f(M.succ()), "r1", f);
        clause(fl(N) == M, N <= f(M) && (m == 0 || f(ExtNat(m - 1)) < N), "l1", f);
      }
    }
    clause(fo(w) == ExtNat(0), all_finite, "o3", f);
    clause(fo(w) == w, !all_finite, "o4", f);
    for (std::uint64_t m = 0; m <= 50; ++m) {
      clause(fr(w) == ExtNat(m), f(ExtNat(m + 1)) == w && some_k(fr, m), "r3", f);
      clause(fl(w) == ExtNat(m), f(ExtNat(m)) == w && some_k(fl, m), "l3", f);
    }
    clause(fr(w) == w, stable_at_omega, "r4", f);
    clause(fl(w) == w, stable_at_omega, "l4", f);
  }
  o.detail = std::to_string(law_checks) + " triples (" + std::to_string(holds) + " with fg <= h), " +
             std::to_string(clause_checks) + " unary clause checks";
  return o;
}

Outcome saturation() {
  Outcome o;
  std::mt19937_64 rng(1004);
  std::vector<std::string> vars{"x", "y"};
  std::size_t largest = 0;
  for (int i = 0; i < 200; ++i) {
    BasicTerm t = tw_test::random_basic(rng, 6, vars);
    BasicTerm u = tw_test::random_basic(rng, 6, vars);
    try {
      SampleSet d = saturate_goals({t});
      largest = std::max(largest, d.size());
      if (static_cast<double>(d.size()) > saturation_bound(t.complexity()))
        o.fail(print(t) + ": " + std::to_string(d.size()) + " samples exceed the bound");
      SampleSet again = saturate(d);
      if (again.printed() != d.printed()) o.fail(print(t) + ": saturation is not idempotent");
      std::vector<std::string> small = d.printed(), big = saturate_goals({t, u}).printed();
      if (!std::includes(big.begin(), big.end(), small.begin(), small.end()))
        o.fail(print(t) + " , " + print(u) + ": saturation is not monotone");
    } catch (const std::exception& e) {
      o.fail(print(t) + ": " + e.what());
    }
  }
  o.detail = "200 terms, largest set " + std::to_string(largest);
  return o;
}

Outcome valuation_diagrams() {
  Outcome o;
  std::mt19937_64 rng(1005);
  std::vector<std::string> vars{"x", "y"};
  for (int i = 0; i < 300; ++i) {
    BasicTerm t = tw_test::random_basic(rng, 5, vars);
    SampleSet delta = saturate_goals({t});
    Valuation th{{"x", tw_test::random_warp(rng, 8, 8)}, {"y", tw_test::random_warp(rng, 8, 8)}};
    std::uint64_t k = below(rng, 11);
    ExtNat p = k == 10 ? kOmega : ExtNat(k);
    std::vector<Violation> bad = check_diagram(diagram_from_valuation(th, p, delta), delta);
    if (!bad.empty()) o.fail(print(t) + ": violates " + condition_name(bad[0].condition));
  }
  o.detail = "300 valuations";
  return o;
}

struct CoherenceCase {
  SampleSet delta;
  Prediagram d;
};

// Criterion 7 also hands its Δ-diagrams to criterion 6.
Outcome coherence(std::vector<CoherenceCase>& diagrams) {
  Outcome o;
  std::mt19937_64 rng(1007);
  std::vector<std::string> vars{"x", "y"};
  std::size_t accepted = 0;
  for (int i = 0; i < 300; ++i) {
    std::vector<BasicTerm> goal{tw_test::random_basic(rng, 4, vars)};
    if (i % 4 == 0) goal.push_back(tw_test::random_basic(rng, 3, vars));
    std::vector<SampleId> goals;
    SampleSet delta = saturate_goals(goal, {}, &goals);
    Psi psi = build_psi(delta, goals);
    TauFormula tau = psi.conjunction();
    SigmaFormula phi = translate(tau);

    Prediagram d;
    auto from_valuation = [&] {
      Valuation th{{"x", tw_test::random_warp(rng, 6, 6)}, {"y", tw_test::random_warp(rng, 6, 6)}};
      return diagram_from_valuation(th, ExtNat(1 + below(rng, 6)), delta);
    };
    switch (i % 3) {
      case 0: d = tw_test::random_prediagram(rng, delta.arena().size()); break;
      case 1: d = from_valuation(); break;
      default: d = tw_test::perturb(rng, from_valuation()); break;
    }
    bool is_diagram = check_diagram(d, delta).empty();
    bool direct = is_diagram && fail_holds(d, delta, goals);
    bool by_tau = eval_tau(tau, d);
    bool by_sigma = eval_sigma(phi, encode(d));
    if (by_tau != direct || by_sigma != direct) {
      std::string g;
      for (const BasicTerm& t : goal) g += print(t) + " ";
      o.fail("goal " + g + ": psi " + std::to_string(by_tau) + ", direct " + std::to_string(direct) +
             ", phi " + std::to_string(by_sigma));
    }
    accepted += direct;
    if (is_diagram) diagrams.push_back({delta, d});
  }
  o.detail = "300 prediagrams, " + std::to_string(accepted) + " satisfy psi, " + std::to_string(diagrams.size()) +
             " are diagrams";
  if (accepted == 0) o.fail("no prediagram satisfied psi; the check is vacuous");
  return o;
}

Outcome reconstruction(const std::vector<CoherenceCase>& diagrams) {
  Outcome o;
  std::size_t samples = 0, strong = 0;
  for (const CoherenceCase& c : diagrams) {
    const SampleArena& ar = c.delta.arena();
    Valuation th;
    try {
      th = valuation_from_diagram(c.d, c.delta, {"x", "y"});
    } catch (const std::exception& e) {
      o.fail(std::string("extraction failed: ") + e.what());
      continue;
    }
    for (SampleId s : c.delta.members()) {
      const SampleNode& n = ar.node(s);
      if (n.kind == SampleKind::App) {
        ++samples;
        if (interpret(ar.term(n.term), th)(c.d[n.child]) != c.d[s])
          o.fail(ar.print(s) + " = " + c.d[s].to_string() + " is not reproduced");
      } else if (n.kind == SampleKind::Last && c.d[s].is_omega()) {
        // D_t nonempty holds for every term with last(t) ∈ Δ: t[last(t)] ∈ Δ
        ++strong;
        if (!last(interpret(ar.term(n.term), th)).is_omega())
          o.fail(ar.print(s) + " = omega but the warp stabilizes");
      }
    }
  }
  o.detail = std::to_string(diagrams.size()) + " diagrams, " + std::to_string(samples) + " samples, " +
             std::to_string(strong) + " strong-extension checks";
  if (diagrams.empty()) o.fail("no diagrams to check");
  return o;
}

std::string fuzz_json(const std::string& solver, std::size_t queries, std::uint64_t seed, FuzzReport* out,
                      double* elapsed) {
  FuzzOptions fo;
  fo.queries = queries;
  fo.seed = seed;
  fo.max_depth = 3;
  fo.max_vars = 2;
  fo.decide.external_solver = solver;
  auto t0 = Clock::now();
  FuzzReport r = fuzz(fo);
  *elapsed = seconds_since(t0);
  if (out) *out = r;
  return to_json(r).dump(2);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::string solver;
  std::size_t queries = 500;
  std::uint64_t seed = 1;
  app.add_option("--external-solver", solver, "SMT solver for the fuzz cross-check");
  app.add_option("--fuzz-queries", queries, "Fuzz corpus size")->capture_default_str();
  app.add_option("--seed", seed, "Fuzz seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  failed += report(1, "identity suite decides Valid", identities());
  failed += report(2, "invalidity suite yields verified counterexamples", invalidities());
  failed += report(3, "warp calculator against residuation and unary-operation laws", warp_calculator());
  failed += report(4, "saturation bound, idempotence, monotonicity", saturation());

  failed += report(5, "valuation-induced diagrams satisfy every condition", valuation_diagrams());
  std::vector<CoherenceCase> diagrams;
  Outcome c7 = coherence(diagrams);
  failed += report(6, "extracted valuations reproduce every diagram", reconstruction(diagrams));
  failed += report(7, "psi, direct check and translated formula agree", c7);

  FuzzReport r;
  double first = 0, second = 0;
  std::string json = fuzz_json(solver, queries, seed, &r, &first);
  Outcome c8;
  std::ostringstream d8;
  d8 << r.queries << " queries, " << r.valid << " valid, " << r.invalid << " invalid, " << r.budget_exceeded
     << " over budget, oracle refuted " << r.oracle_refuted << ", ";
  if (r.external_available)
    d8 << "external agreed on " << r.external_agreements << "/" << r.external_checked << " goals, ";
  else
    d8 << "external solver check skipped, ";
  d8 << std::fixed;
  d8.precision(1);
  d8 << first << " s";
  c8.detail = d8.str();
  if (r.mismatches() != 0) {
    c8.fail(std::to_string(r.mismatches()) + " mismatches");
    for (const FuzzFailure& f : r.failures) c8.fail("#" + std::to_string(f.index) + " [" + f.check + "] " + f.query);
  }
  if (r.budget_exceeded != 0) c8.fail(std::to_string(r.budget_exceeded) + " queries ran out of budget");
  if (!solver.empty() && !r.external_available) c8.fail("external solver " + solver + " did not run");
  if (first >= 600) c8.fail("corpus took longer than 10 minutes");
  failed += report(8, "end-to-end fuzz", c8);

  std::string again = fuzz_json(solver, queries, seed, nullptr, &second);
  Outcome c9;
  c9.detail = std::to_string(json.size()) + " bytes";
  if (again != json) c9.fail("second run produced a different report");
  failed += report(9, "fuzz report is reproducible byte for byte", c9);

  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << "\n";
  return failed == 0 ? 0 : 1;
}
