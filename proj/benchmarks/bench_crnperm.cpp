#include <benchmark/benchmark.h>

#include <Eigen/Core>
#include <vector>

#include "crnperm/certify.hpp"
#include "crnperm/corpus.hpp"
#include "crnperm/dynamics.hpp"
#include "crnperm/lyapunov.hpp"
#include "crnperm/region.hpp"
#include "crnperm/witness.hpp"

namespace {

using namespace crnperm;

NetworkDocument load(const char* name) { return parse_network(corpus_get(name).document); }

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) out(i++) = v;
  return out;
}

void BM_VectorField(benchmark::State& state) {
  const auto doc = load("example-7.3");
  const auto rates = doc.schedule.rates_at(0.0);
  const Eigen::VectorXd x = vec({0.7, 1.3, 2.1});
  for (auto _ : state) benchmark::DoNotOptimize(vector_field(doc.network, rates, x));
}
BENCHMARK(BM_VectorField);

void BM_VDotSup(benchmark::State& state) {
  const auto doc = load("example-7.3");
  const auto bounds = doc.schedule.bounds();
  const Eigen::VectorXd x = vec({0.7, 1.3, 2.1});
  const Eigen::VectorXd center = vec({1.0, 1.0, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(V_centered_dot_sup(doc.network, bounds, x, center));
}
BENCHMARK(BM_VDotSup);

void BM_Integrate(benchmark::State& state) {
  const auto doc = load("cubic-chain");
  IntegratorConfig config;
  config.num_samples = 11;
  const Eigen::VectorXd x0 = vec({1.9, 0.1});
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(doc.network, doc.schedule, x0, static_cast<double>(state.range(0)), config));
  }
}
BENCHMARK(BM_Integrate)->Arg(10)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_PathSumSup(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(path_sum_sup_loglog(p, 50.0));
}
BENCHMARK(BM_PathSumSup)->DenseRange(1, 4);

void BM_PsiInverse(benchmark::State& state) {
  const auto doc = load("example-7.3");
  const auto basis = select_basis_reactions(doc.network);
  const Eigen::VectorXd p = vec({1.0, 1.0, 1.0});
  const Eigen::VectorXd target = Eigen::VectorXd::Constant(basis.dimension(), 1e4);
  for (auto _ : state) benchmark::DoNotOptimize(psi_inverse(doc.network, basis, p, target));
}
BENCHMARK(BM_PsiInverse);

void BM_ValidateDelta(benchmark::State& state) {
  const auto doc = load("cubic-chain");
  const auto bounds = doc.schedule.bounds();
  DeltaConfig config;
  config.samples = 10'000;
  config.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(validate_delta(doc.network, bounds, 1.0, 10.0, config));
}
BENCHMARK(BM_ValidateDelta)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_TrappingRegion(benchmark::State& state) {
  const auto entry = corpus_get("cubic-chain");
  const auto doc = parse_network(entry.document);
  RegionConfig config;
  config.verify = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_trapping_region(doc.network, doc.schedule, entry.class_point, config));
  }
}
BENCHMARK(BM_TrappingRegion)->Unit(benchmark::kMillisecond);

void BM_Witness(benchmark::State& state) {
  const auto entry = corpus_get("example-7.1");
  const auto doc = parse_network(entry.document);
  WitnessConfig config;
  config.workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_positive_vdot(doc.network, doc.schedule, entry.equilibria.front(),
                                                Regime::kNearOrigin, std::nullopt, nullptr, config));
  }
}
BENCHMARK(BM_Witness)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
