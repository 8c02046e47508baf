#include <benchmark/benchmark.h>

#include "xysim/hamiltonian.hpp"
#include "xysim/kernels.hpp"
#include "xysim/propagator.hpp"
#include "xysim/rng.hpp"

namespace {

using namespace xysim;

VectorC random_state(std::size_t n) {
  Rng rng(7);
  VectorC v(hilbert_dim(n));
  for (auto& x : v) x = cplx(rng.normal(), rng.normal());
  return v.normalized();
}

template <Exec E>
void BM_rotation_all(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  VectorC psi = random_state(n);
  const Mat2 r = rotation_matrix(Vec3::UnitY(), 0.3);
  for (auto _ : st) {
    kernels::apply_rotation_all(psi, n, r, E);
    benchmark::DoNotOptimize(psi.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(hilbert_dim(n) * n));
}

template <Exec E>
void BM_expectation(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const VectorC psi = random_state(n);
  const Mat2 sy = spin_matrix(Axis::y);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::expectation_one(psi, n, n / 2, sy, E));
}

template <Exec E>
void BM_propagator_apply(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  Rng rng(3);
  MatrixR J = MatrixR::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) J(i, j) = J(j, i) = rng.normal();
  DisorderField d;
  d.deltas = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < n; ++i) d.deltas[i] = rng.normal();
  const Propagator p(build_xy_hamiltonian(J, d).H_total);
  VectorC psi = random_state(n);
  for (auto _ : st) {
    p.apply(psi, 0.1, E);
    benchmark::DoNotOptimize(psi.data());
  }
}

}  // namespace

BENCHMARK(BM_rotation_all<Exec::serial>)->Arg(10)->Arg(14)->Arg(16);
BENCHMARK(BM_rotation_all<Exec::parallel>)->Arg(10)->Arg(14)->Arg(16);
BENCHMARK(BM_expectation<Exec::serial>)->Arg(10)->Arg(14)->Arg(16);
BENCHMARK(BM_expectation<Exec::parallel>)->Arg(10)->Arg(14)->Arg(16);
BENCHMARK(BM_propagator_apply<Exec::serial>)->Arg(8)->Arg(10);
BENCHMARK(BM_propagator_apply<Exec::parallel>)->Arg(8)->Arg(10);

BENCHMARK_MAIN();
