#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "plate/config.hpp"
#include "plate/kernels.hpp"
#include "plate/modal.hpp"
#include "plate/riemann.hpp"
#include "plate/scenario.hpp"

using namespace plate;

namespace {

KernelOptions grid(int m) {
  KernelOptions o;
  o.m = m;
  return o;
}

void BM_ControllerKernels(benchmark::State& state) {
  const ModalCoefficients c(reference_profile(), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        solve_controller_kernels(c, Vec3::Constant(5.0), grid(static_cast<int>(state.range(0)))));
  }
}
BENCHMARK(BM_ControllerKernels)->Arg(21)->Arg(41)->Unit(benchmark::kMillisecond);

void BM_ObserverKernels(benchmark::State& state) {
  const DimensionlessParams d = reference_profile();
  const ModalCoefficients c(d, 1);
  const Mat3 R = observer_reflection(d, false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_observer_kernels(c, Vec3::Constant(5.0), R,
                                                    grid(static_cast<int>(state.range(0)))));
  }
}
BENCHMARK(BM_ObserverKernels)->Arg(21)->Arg(41)->Unit(benchmark::kMillisecond);

// Closed-loop simulation of one mode over 0.1 time units.
void BM_StateFeedbackMode(benchmark::State& state) {
  RunConfig cfg = reference_run_config();
  cfg.scenario = Scenario::kStateFeedback;
  cfg.kernel_m = 21;
  cfg.T = 0.1;
  cfg.snapshot_times.clear();
  const ModeSetup setup = prepare_mode(cfg, 1);
  for (auto _ : state) benchmark::DoNotOptimize(run_mode(cfg, setup));
}
BENCHMARK(BM_StateFeedbackMode)->Unit(benchmark::kMillisecond);

void BM_RiemannRoundTrip(benchmark::State& state) {
  const DimensionlessParams d = reference_profile();
  const Grid1D g{static_cast<std::size_t>(state.range(0))};
  PhysicalModalState s = PhysicalModalState::zeros(g);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Eigen::VectorXd* v : {&s.w, &s.alpha, &s.beta, &s.w_t, &s.alpha_t, &s.beta_t, &s.w_x,
                             &s.alpha_x, &s.beta_x}) {
    for (Eigen::Index i = 0; i < v->size(); ++i) (*v)(i) = u(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(to_physical(to_hyperbolic(s, d), d));
}
BENCHMARK(BM_RiemannRoundTrip)->Arg(81)->Arg(801);

void BM_ModalProjection(benchmark::State& state) {
  const double L = reference_profile().L;
  const int N = static_cast<int>(state.range(0));
  const std::vector<double> y = uniform_y_grid(181, L);
  Eigen::MatrixXd field(101, y.size());
  for (Eigen::Index i = 0; i < field.rows(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) field(i, j) = std::sin(0.3 * i + y[j]);
  }
  for (auto _ : state) benchmark::DoNotOptimize(project(field, Basis::kSine, N, L));
}
BENCHMARK(BM_ModalProjection)->Arg(3)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
