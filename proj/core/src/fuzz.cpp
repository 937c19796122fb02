#include "timewarp/fuzz.hpp"

#include <nlohmann/json.hpp>

#include "timewarp/errors.hpp"
#include "timewarp/normalize.hpp"

namespace timewarp {

namespace {

// Plain modulo keeps the stream identical across standard libraries, unlike
// the std distributions.
std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

std::string var_name(int i) { return std::string(1, static_cast<char>('x' + i % 3)) + (i >= 3 ? std::to_string(i / 3) : ""); }

// Every valuation of `vars` over `pool`.
template <class F>
void for_each_valuation(const std::vector<std::string>& vars, const std::vector<Warp>& pool, F&& f) {
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    Valuation theta;
    for (std::size_t i = 0; i < vars.size(); ++i) theta[vars[i]] = pool[idx[i]];
    if (!f(theta)) return;
    std::size_t i = vars.size();
    while (i > 0 && ++idx[i - 1] == pool.size()) idx[--i] = 0;
    if (i == 0) return;
  }
}

}  // namespace

Term random_term(std::mt19937_64& rng, int depth, int vars) {
  if (depth <= 1 || pick(rng, 3) == 0) {
    std::uint64_t k = pick(rng, static_cast<std::uint64_t>(vars) + 3);
    if (k < static_cast<std::uint64_t>(vars)) return Term::var(var_name(static_cast<int>(k)));
    if (k == static_cast<std::uint64_t>(vars)) return Term::id();
    if (k == static_cast<std::uint64_t>(vars) + 1) return Term::bot();
    return Term::top();
  }
  auto sub = [&] { return random_term(rng, depth - 1, vars); };
  switch (pick(rng, 8)) {
    case 0: { Term a = sub(); return Term::meet(a, sub()); }
    case 1: { Term a = sub(); return Term::join(a, sub()); }
    case 2: { Term a = sub(); return Term::comp(a, sub()); }
    case 3: { Term a = sub(); return Term::lres(a, sub()); }
    case 4: { Term a = sub(); return Term::rres(a, sub()); }
    case 5: return Term::lres(Term::top(), sub());  // ^o
    case 6: return Term::rres(Term::id(), sub());   // ^l
    default: return Term::lres(sub(), Term::id());  // ^r
  }
}

Query random_query(std::mt19937_64& rng, int depth, int vars) {
  bool equation = pick(rng, 2) == 0;
  Term s = random_term(rng, depth, vars);
  Term t = random_term(rng, depth, vars);
  return equation ? Query::equation(s, t) : Query::inequation(s, t);
}

FuzzReport fuzz(const FuzzOptions& opts) {
  FuzzReport rep;
  rep.seed = opts.seed;
  std::mt19937_64 rng(opts.seed);
  std::vector<Warp> pool = default_pool();
  DecideOptions dopts = opts.decide;
  dopts.threads = 1;
  dopts.trace = false;

  if (!dopts.external_solver.empty()) {
    rep.external_available =
        run_external_solver(dopts.external_solver, "(set-logic QF_LIA)\n(check-sat)\n").has_value();
    if (!rep.external_available) dopts.external_solver.clear();
  }

  for (std::size_t i = 0; i < opts.queries; ++i) {
    Query q = random_query(rng, opts.max_depth, opts.max_vars);
    std::string text = print(q);
    ++rep.queries;
    auto fail = [&](const char* check, std::string detail) {
      rep.failures.push_back(FuzzFailure{i, text, check, std::move(detail)});
    };

    // (d) every residuated direction equals its normal form under each
    // pool valuation.
    std::vector<Term> sides;
    if (q.kind == Query::Kind::Equation) {
      auto [a, b] = split_equation(q);
      sides = {residuate(a).rhs, residuate(b).rhs};
    } else {
      sides = {residuate(q).rhs};
    }
    std::vector<std::string> vars = free_vars(q);
    for (const Term& t : sides) {
      Term nf_term = Term::top();
      try {
        nf_term = to_term(normal_form(t, dopts.normalize));
      } catch (const BudgetExceeded&) {
        continue;
      }
      for_each_valuation(vars, pool, [&](const Valuation& theta) {
        ++rep.normalization_checks;
        if (interpret(t, theta) == interpret(nf_term, theta)) return true;
        ++rep.mismatches_d;
        fail("d", "normal form of " + print(t) + " differs from the term");
        return false;
      });
    }

    std::optional<Counterexample> oracle = brute_refute(q, pool, opts.p_max);
    if (oracle) ++rep.oracle_refuted;

    Verdict v;
    try {
      v = decide(q, dopts);
    } catch (const BudgetExceeded& e) {
      ++rep.budget_exceeded;
      rep.over_budget.push_back(FuzzFailure{i, text, "budget", e.what()});
      continue;
    } catch (const std::exception& e) {
      ++rep.mismatches_b;
      fail("error", e.what());
      continue;
    }

    rep.goals += v.goals.size();
    if (v.valid) {
      ++rep.valid;
      if (oracle) {
        ++rep.mismatches_a;
        fail("a", "Valid, but refuted at " + to_string(*oracle));
      }
    } else {
      ++rep.invalid;
      if (oracle) ++rep.oracle_agreements;
      const Counterexample& c = *v.counterexample;
      if (!c.verified || !verify(c.valuation, c.p, c.goals) || !refutes(q, c.valuation, c.p)) {
        ++rep.mismatches_b;
        fail("b", "counterexample does not verify: " + to_string(c));
      }
    }

    // (c) compare answers goal by goal.
    for (const GoalReport& g : v.goals) {
      if (!g.external_sat) continue;
      if (g.outcome != GoalReport::Outcome::Valid && g.outcome != GoalReport::Outcome::Invalid) continue;
      ++rep.external_checked;
      bool sat = g.outcome == GoalReport::Outcome::Invalid;
      if (sat == *g.external_sat) {
        ++rep.external_agreements;
      } else {
        ++rep.mismatches_c;
        fail("c", "goal " + print(g.goal) + ": built-in " + (sat ? "sat" : "unsat") +
                      ", external " + (*g.external_sat ? "sat" : "unsat"));
      }
    }
  }
  return rep;
}

nlohmann::json to_json(const FuzzReport& r) {
  auto list = [](const std::vector<FuzzFailure>& fs) {
    nlohmann::json out = nlohmann::json::array();
    for (const FuzzFailure& f : fs)
      out.push_back({{"index", f.index}, {"query", f.query}, {"check", f.check}, {"detail", f.detail}});
    return out;
  };
  return {
      {"seed", r.seed},
      {"queries", r.queries},
      {"valid", r.valid},
      {"invalid", r.invalid},
      {"budget_exceeded", r.budget_exceeded},
      {"goals", r.goals},
      {"oracle_refuted", r.oracle_refuted},
      {"oracle_agreements", r.oracle_agreements},
      {"normalization_checks", r.normalization_checks},
      {"external", {{"available", r.external_available},
                    {"checked", r.external_checked},
                    {"agreements", r.external_agreements}}},
      {"mismatches", {{"a", r.mismatches_a},
                      {"b", r.mismatches_b},
                      {"c", r.mismatches_c},
                      {"d", r.mismatches_d},
                      {"total", r.mismatches()}}},
      {"failures", list(r.failures)},
      {"over_budget", list(r.over_budget)},
  };
}

}  // namespace timewarp
