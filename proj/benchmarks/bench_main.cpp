#include <random>

#include <benchmark/benchmark.h>

#include "timewarp/fuzz.hpp"
#include "timewarp/normalize.hpp"
#include "timewarp/parser.hpp"
#include "timewarp/pipeline.hpp"
#include "timewarp/solve.hpp"

using namespace timewarp;

namespace {

// Random warps built from the fuzz pool and its pairwise composites.
std::vector<Warp> warps() {
  std::vector<Warp> base = default_pool(), out = base;
  for (const Warp& f : base)
    for (const Warp& g : base) out.push_back(join(compose(f, g), op_l(g)));
  return out;
}

const char* const kQueries[] = {
    "id <= x \\ x",
    "x (y | z) == x y | x z",
    "(x y)^r <= y^r x^r",
    "x y == y x",
    "id <= x y x^l | y^l",
    "x \\ (y / z) == (x \\ y) / z",
};

void BM_Compose(benchmark::State& st) {
  std::vector<Warp> ws = warps();
  std::size_t i = 0;
  for (auto _ : st) {
    const Warp& f = ws[i % ws.size()];
    const Warp& g = ws[(i * 7 + 3) % ws.size()];
    benchmark::DoNotOptimize(compose(f, g));
    ++i;
  }
}
BENCHMARK(BM_Compose);

void BM_Residuals(benchmark::State& st) {
  std::vector<Warp> ws = warps();
  std::size_t i = 0;
  for (auto _ : st) {
    const Warp& f = ws[i % ws.size()];
    const Warp& g = ws[(i * 5 + 1) % ws.size()];
    benchmark::DoNotOptimize(lres(f, g));
    benchmark::DoNotOptimize(rres(g, f));
    ++i;
  }
}
BENCHMARK(BM_Residuals);

void BM_NormalForm(benchmark::State& st) {
  Query q = parse_query(kQueries[st.range(0)]);
  Term t = residuate(q.kind == Query::Kind::Equation ? split_equation(q).first : q).rhs;
  for (auto _ : st) benchmark::DoNotOptimize(normal_form(t));
  st.SetLabel(kQueries[st.range(0)]);
}
BENCHMARK(BM_NormalForm)->DenseRange(0, 5);

void BM_Saturate(benchmark::State& st) {
  std::vector<BasicTerm> goals = unit_goals(parse_term("x y x^l | y^l")).at(0).goals;
  for (auto _ : st) benchmark::DoNotOptimize(saturate_goals(goals).size());
}
BENCHMARK(BM_Saturate);

void BM_Solve(benchmark::State& st) {
  std::vector<SampleId> ids;
  SampleSet delta = saturate_goals(unit_goals(parse_term("x y x^l")).at(0).goals, {}, &ids);
  SigmaFormula phi = translate(build_psi(delta, ids).conjunction());
  for (auto _ : st) benchmark::DoNotOptimize(solve_builtin(phi, delta.arena().size()).sat);
}
BENCHMARK(BM_Solve);

void BM_Decide(benchmark::State& st) {
  Query q = parse_query(kQueries[st.range(0)]);
  DecideOptions opts;
  opts.threads = 1;
  for (auto _ : st) benchmark::DoNotOptimize(decide(q, opts).valid);
  st.SetLabel(kQueries[st.range(0)]);
}
BENCHMARK(BM_Decide)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_DecideRandom(benchmark::State& st) {
  std::mt19937_64 rng(11);
  std::vector<Query> qs;
  for (int i = 0; i < 32; ++i) qs.push_back(random_query(rng, 3, 2));
  DecideOptions opts;
  opts.threads = 1;
  std::size_t i = 0;
  for (auto _ : st) {
    try {
      benchmark::DoNotOptimize(decide(qs[i++ % qs.size()], opts).valid);
    } catch (const BudgetExceeded&) {
    }
  }
}
BENCHMARK(BM_DecideRandom)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
