#include "xysim/kernels.hpp"

#include <cstdint>

#include "xysim/errors.hpp"

namespace xysim::kernels {

namespace {

// Below this size the OpenMP fork costs more than the loop.
constexpr std::int64_t kParallelThreshold = 1 << 12;

void check(const Eigen::Ref<const VectorC>& psi, std::size_t n_spins) {
  if (static_cast<std::size_t>(psi.size()) != hilbert_dim(n_spins))
    throw ShapeError("state dimension does not match 2^N");
}

inline void rotate_pair(cplx* data, std::uint64_t lo, std::uint64_t hi, const Mat2& r) {
  const cplx a = data[lo];
  const cplx b = data[hi];
  data[lo] = r(0, 0) * a + r(0, 1) * b;
  data[hi] = r(1, 0) * a + r(1, 1) * b;
}

void rotate_qubit_serial(cplx* data, std::int64_t dim, std::uint64_t mask, const Mat2& r) {
  for (std::int64_t s = 0; s < dim; ++s) {
    const auto u = static_cast<std::uint64_t>(s);
    if (u & mask) continue;
    rotate_pair(data, u, u | mask, r);
  }
}

void rotate_qubit_parallel(cplx* data, std::int64_t dim, std::uint64_t mask, const Mat2& r) {
  // Enumerate the dim/2 lower partners directly so iterations are uniform.
  const std::int64_t half = dim / 2;
  const std::uint64_t low_bits = mask - 1;
#pragma omp parallel for schedule(static) if (dim >= kParallelThreshold)
  for (std::int64_t p = 0; p < half; ++p) {
    const auto q = static_cast<std::uint64_t>(p);
    const std::uint64_t lo = ((q & ~low_bits) << 1) | (q & low_bits);
    rotate_pair(data, lo, lo | mask, r);
  }
}

}  // namespace

void apply_rotation_one(Eigen::Ref<VectorC> psi, std::size_t n_spins, std::size_t spin, const Mat2& r,
                        Exec exec) {
  check(psi, n_spins);
  const auto dim = static_cast<std::int64_t>(psi.size());
  const std::uint64_t mask = spin_mask(n_spins, spin);
  if (exec == Exec::serial)
    rotate_qubit_serial(psi.data(), dim, mask, r);
  else
    rotate_qubit_parallel(psi.data(), dim, mask, r);
}

void apply_rotation_all(Eigen::Ref<VectorC> psi, std::size_t n_spins, const Mat2& r, Exec exec) {
  for (std::size_t i = 0; i < n_spins; ++i) apply_rotation_one(psi, n_spins, i, r, exec);
}

Mat2 reduced_density(const Eigen::Ref<const VectorC>& psi, std::size_t n_spins, std::size_t spin, Exec exec) {
  check(psi, n_spins);
  const auto dim = static_cast<std::int64_t>(psi.size());
  const std::uint64_t mask = spin_mask(n_spins, spin);
  const cplx* d = psi.data();
  double p0 = 0.0, p1 = 0.0, cr = 0.0, ci = 0.0;  // rho00, rho11, rho10
  if (exec == Exec::serial) {
    for (std::int64_t s = 0; s < dim; ++s) {
      const auto u = static_cast<std::uint64_t>(s);
      if (u & mask) continue;
      const cplx a = d[u];
      const cplx b = d[u | mask];
      p0 += std::norm(a);
      p1 += std::norm(b);
      const cplx c = b * std::conj(a);
      cr += c.real();
      ci += c.imag();
    }
  } else {
    const std::int64_t half = dim / 2;
    const std::uint64_t low_bits = mask - 1;
    // Reduction order differs from the serial loop, so results agree to
    // rounding rather than bitwise; the ensemble layer never relies on this.
#pragma omp parallel for schedule(static) reduction(+ : p0, p1, cr, ci) if (dim >= kParallelThreshold)
    for (std::int64_t p = 0; p < half; ++p) {
      const auto q = static_cast<std::uint64_t>(p);
      const std::uint64_t lo = ((q & ~low_bits) << 1) | (q & low_bits);
      const cplx a = d[lo];
      const cplx b = d[lo | mask];
      p0 += std::norm(a);
      p1 += std::norm(b);
      const cplx c = b * std::conj(a);
      cr += c.real();
      ci += c.imag();
    }
  }
  Mat2 rho;
  rho(0, 0) = p0;
  rho(1, 1) = p1;
  rho(1, 0) = cplx{cr, ci};
  rho(0, 1) = cplx{cr, -ci};
  return rho;
}

cplx expectation_one(const Eigen::Ref<const VectorC>& psi, std::size_t n_spins, std::size_t spin, const Mat2& op,
                     Exec exec) {
  const Mat2 rho = reduced_density(psi, n_spins, spin, exec);
  return (rho * op).trace();
}

void apply_rotation_columns(MatrixC& states, std::size_t n_spins, const Mat2& r, Exec exec) {
  for (Eigen::Index j = 0; j < states.cols(); ++j)
    apply_rotation_all(states.col(j), n_spins, r, exec);
}

}  // namespace xysim::kernels
