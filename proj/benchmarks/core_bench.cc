#include <benchmark/benchmark.h>

#include "nashflow/finite_game.h"
#include "nashflow/flows.h"
#include "nashflow/learners.h"
#include "nashflow/response.h"

using namespace nashflow;

namespace {

FiniteGame Game(int players, int actions) {
  Rng rng(1);
  return RandomGame(std::vector<int>(players, actions), rng);
}

void BM_UtilityVector(benchmark::State& state) {
  const int players = static_cast<int>(state.range(0));
  const int actions = static_cast<int>(state.range(1));
  const auto g = Game(players, actions);
  const auto pi = UniformProfile(std::vector<int>(players, actions));
  for (auto _ : state) benchmark::DoNotOptimize(UtilityVector(g, pi, 0));
}
BENCHMARK(BM_UtilityVector)->Args({2, 2})->Args({2, 16})->Args({3, 8})->Args({4, 6});

void BM_SimplexProjection(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  std::vector<double> y(n);
  for (double& v : y) v = 2.0 * rng.Uniform() - 1.0;
  const ActionSet set = SimplexSet{n};
  for (auto _ : state) benchmark::DoNotOptimize(EuclideanProject(y, set));
}
BENCHMARK(BM_SimplexProjection)->Arg(4)->Arg(64)->Arg(1024);

void BM_QuantalResponse(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(3);
  std::vector<double> u(n);
  for (double& v : u) v = rng.Uniform();
  const Regularizer reg{RegularizerKind::kEntropy, 0.1};
  for (auto _ : state) benchmark::DoNotOptimize(QuantalResponse(u, reg));
}
BENCHMARK(BM_QuantalResponse)->Arg(4)->Arg(64)->Arg(1024);

void BM_DaStep(benchmark::State& state) {
  const auto g = Game(2, static_cast<int>(state.range(0)));
  LearnerConfig c;
  auto s = InitialFiniteState(g, 0, c);
  const std::vector<double> u(g.num_actions(0), 0.5);
  std::int64_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(s = DaStep(s, u, c, ++k));
}
BENCHMARK(BM_DaStep)->Arg(4)->Arg(64);

void BM_SbrStep(benchmark::State& state) {
  const auto g = Game(2, static_cast<int>(state.range(0)));
  LearnerConfig c;
  c.type = LearnerType::kSbr;
  auto s = InitialFiniteState(g, 0, c);
  const std::vector<double> u(g.num_actions(0), 0.5);
  std::int64_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(s = SbrStep(s, u, c, ++k));
}
BENCHMARK(BM_SbrStep)->Arg(4)->Arg(64);

void BM_Rk4Replicator(benchmark::State& state) {
  const auto g = Game(2, static_cast<int>(state.range(0)));
  ReplicatorFlow flow(g);
  const auto y0 = flow.Lift(UniformProfile(g.action_counts()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Integrate(flow, y0, 1.0, 1e-2, IntegrationMethod::kRk4, 1000));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_Rk4Replicator)->Arg(2)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
