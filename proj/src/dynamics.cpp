#include "xysim/dynamics.hpp"

#include <cmath>

#include "xysim/errors.hpp"
#include "xysim/units.hpp"

namespace xysim {

void evolve_free(Eigen::Ref<VectorC> state, const Propagator& propagator, double dt, Exec exec) {
  if (!(dt >= 0.0)) throw InvalidArgument("evolution time must be non-negative");
  if (state.size() != propagator.dim()) throw ShapeError("state dimension does not match H");
  if (dt == 0.0) return;
  propagator.apply(state, dt, exec);
}

void apply_ideal_pulse(Eigen::Ref<VectorC> state, std::size_t n_spins, const Vec3& axis,
                       double angle, Exec exec) {
  if (angle == 0.0) return;
  kernels::apply_rotation_all(state, n_spins, rotation_matrix(axis, angle), exec);
}

MatrixC driven_hamiltonian(const MatrixC& h, std::size_t n_spins, const Vec3& axis, double rabi) {
  const double norm = axis.norm();
  if (!(norm > 0.0)) throw InvalidArgument("drive axis must be non-zero");
  const Vec3 n = axis / norm;
  MatrixC out = h;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n_spins));
  if (n.x() != 0.0) out += (rabi * n.x()) * onsite_field(ones, Axis::x);
  if (n.y() != 0.0) out += (rabi * n.y()) * onsite_field(ones, Axis::y);
  if (n.z() != 0.0) out += (rabi * n.z()) * onsite_field(ones, Axis::z);
  return out;
}

void apply_finite_pulse(Eigen::Ref<VectorC> state, const Propagator& driven, double duration,
                        Exec exec) {
  evolve_free(state, driven, duration, exec);
}

VectorC product_state(std::size_t n_spins, std::uint64_t flipped_bits) {
  if (n_spins == 0 || n_spins > kMaxSpins) throw CapacityError("unsupported spin count");
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < n_spins; ++i)
    if (flipped_bits & (std::uint64_t{1} << i)) index |= spin_mask(n_spins, i);
  VectorC psi = VectorC::Zero(static_cast<Eigen::Index>(hilbert_dim(n_spins)));
  psi[static_cast<Eigen::Index>(index)] = 1.0;
  return psi;
}

VectorC prepare_initial(Rng& rng, std::size_t n_spins, double phi, double eta_pol) {
  if (!(eta_pol >= 0.5 && eta_pol <= 1.0))
    throw InvalidArgument("eta_pol must lie in [0.5, 1]");
  if (!(phi >= 0.0 && phi <= 0.5 * pi + 1e-12))
    throw InvalidArgument("phi must lie in [0, pi/2]");
  std::uint64_t flips = 0;
  for (std::size_t i = 0; i < n_spins; ++i)
    if (rng.uniform_open() >= eta_pol) flips |= std::uint64_t{1} << i;
  VectorC psi = product_state(n_spins, flips);
  apply_ideal_pulse(psi, n_spins, Vec3::UnitX(), phi);
  return psi;
}

Vec3 bloch_vector(const Eigen::Ref<const VectorC>& state, std::size_t n_spins, std::size_t spin) {
  const Mat2 rho = kernels::reduced_density(state, n_spins, spin, Exec::serial);
  auto expect = [&](Axis a) { return (rho * spin_matrix(a)).trace().real(); };
  return {expect(Axis::x), expect(Axis::y), expect(Axis::z)};
}

double center_coherence(const Eigen::Ref<const VectorC>& state, std::size_t n_spins,
                        std::size_t center) {
  return 2.0 * kernels::expectation_one(state, n_spins, center, spin_matrix(Axis::y), Exec::serial)
                   .real();
}

double transverse_coherence(const Eigen::Ref<const VectorC>& state, std::size_t n_spins,
                            std::size_t center) {
  const Vec3 b = bloch_vector(state, n_spins, center);
  return 2.0 * std::hypot(b.x(), b.y());
}

}  // namespace xysim
