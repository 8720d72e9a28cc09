#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "groundseg/plane_fit.hpp"

namespace {

using namespace groundseg;

std::vector<Eigen::Vector3d> noisy_plane(std::size_t n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::normal_distribution<double> g(0.0, 0.02);
  std::vector<Eigen::Vector3d> pts(n);
  for (auto& p : pts) {
    const double x = u(rng), y = u(rng);
    p = {x, y, -1.7 + 0.05 * x + g(rng)};
  }
  return pts;
}

void BM_PcaPlane(benchmark::State& state) {
  const auto pts = noisy_plane(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pca_plane(pts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PcaPlane)->RangeMultiplier(4)->Range(16, 4096);

void BM_EigenSymmetric3(benchmark::State& state) {
  Eigen::Matrix3d m;
  m << 2.0, 0.3, 0.1, 0.3, 1.5, 0.05, 0.1, 0.05, 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eigen_symmetric3(m));
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_EigenSymmetric3);

}  // namespace
