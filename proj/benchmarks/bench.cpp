#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "drosvi/gap.hpp"
#include "drosvi/harness.hpp"
#include "drosvi/nsdp.hpp"
#include "drosvi/qmc.hpp"
#include "drosvi/rng.hpp"
#include "drosvi/solver.hpp"

using namespace drosvi;

namespace {

AffineSvip game(std::uint64_t seed) { return to_svip(generate_game({}, seed)); }

void BM_Projection(benchmark::State& state) {
  const AffineSvip inst = game(1);
  Rng rng(7);
  Eigen::VectorXd z(inst.n());
  for (int i = 0; i < z.size(); ++i) z[i] = rng.uniform(-5, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(project(inst.feasible(), z).point);
  }
}
BENCHMARK(BM_Projection);

void BM_GapValue(benchmark::State& state) {
  const AffineSvip inst = game(1);
  const double alpha = 1.0 / inst.beta0();
  const Eigen::VectorXd x =
      project(inst.feasible(), Eigen::VectorXd::Zero(inst.n())).point;
  const Eigen::VectorXd xi = Eigen::VectorXd::Constant(inst.m(), 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gap_value(inst, alpha, x, xi).value);
  }
}
BENCHMARK(BM_GapValue);

void BM_AssembleD(benchmark::State& state) {
  const AffineSvip inst = game(1);
  const double alpha = 1.0 / inst.beta0();
  const ConicProgram prog =
      build(inst, alpha, nominal_ambiguity(inst.m(), 0.0, 1.0), SupportSpec::full());
  Rng rng(11);
  Eigen::VectorXd v(prog.layout().total);
  for (int i = 0; i < v.size(); ++i) v[i] = rng.uniform(-1, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(prog.d_block(v));
  }
}
BENCHMARK(BM_AssembleD);

void BM_SolveConic(benchmark::State& state) {
  const AffineSvip inst = game(static_cast<std::uint64_t>(state.range(0)));
  const double alpha = 1.0 / inst.beta0();
  const ConicProgram prog =
      build(inst, alpha, nominal_ambiguity(inst.m(), 0.0, 1.0), SupportSpec::full());
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_conic(prog).report.objective);
  }
}
BENCHMARK(BM_SolveConic)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Sobol(benchmark::State& state) {
  const int count = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sobol(count, 6));
  }
}
BENCHMARK(BM_Sobol)->Arg(80)->Arg(10000);

void BM_ErmObjective(benchmark::State& state) {
  const AffineSvip inst = game(1);
  const double alpha = 1.0 / inst.beta0();
  const MomentAmbiguity amb = nominal_ambiguity(inst.m(), 0.0, 1.0);
  const QmcSampleSet samples =
      qmc_samples(amb, static_cast<int>(state.range(0)));
  const Eigen::VectorXd x =
      project(inst.feasible(), Eigen::VectorXd::Zero(inst.n())).point;
  for (auto _ : state) {
    benchmark::DoNotOptimize(erm_objective(inst, alpha, samples, amb, x));
  }
}
BENCHMARK(BM_ErmObjective)->Arg(80)->Arg(10000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
