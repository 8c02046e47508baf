#pragma once

#include <cstddef>

#include "xysim/kernels.hpp"
#include "xysim/propagator.hpp"
#include "xysim/rng.hpp"
#include "xysim/spin_ops.hpp"

namespace xysim {

enum class PulseMode { ideal, finite };

struct PulseOp {
  Vec3 axis = Vec3::UnitX();
  double angle = 0.0;
  PulseMode mode = PulseMode::ideal;
  double rabi = 0.0;  // rad/us, finite mode only

  double duration() const { return mode == PulseMode::finite ? std::abs(angle) / rabi : 0.0; }
};

/// Unit vectors for the pulse phases used by the sequences.
inline Vec3 axis_vector(Axis a) {
  switch (a) {
    case Axis::x:
      return Vec3::UnitX();
    case Axis::y:
      return Vec3::UnitY();
    default:
      return Vec3::UnitZ();
  }
}

/// state <- exp(-i H dt) state
void evolve_free(Eigen::Ref<VectorC> state, const Propagator& propagator, double dt,
                 Exec exec = Exec::serial);

/// Simultaneous rotation exp(-i angle n.S_tot).
void apply_ideal_pulse(Eigen::Ref<VectorC> state, std::size_t n_spins, const Vec3& axis,
                       double angle, Exec exec = Exec::serial);

/// H + rabi * n.S_tot; the propagator of this matrix drives a finite pulse.
MatrixC driven_hamiltonian(const MatrixC& h, std::size_t n_spins, const Vec3& axis, double rabi);

/// Evolution under a driven Hamiltonian for the pulse duration.
void apply_finite_pulse(Eigen::Ref<VectorC> state, const Propagator& driven, double duration,
                        Exec exec = Exec::serial);

/// Product state: bit i set means spin i starts in |1>.
VectorC product_state(std::size_t n_spins, std::uint64_t flipped_bits);

/// Each spin in |0> with probability eta_pol, otherwise |1>, then rotated by
/// phi about x. phi = pi/2 polarizes the register along +y.
VectorC prepare_initial(Rng& rng, std::size_t n_spins, double phi, double eta_pol);

/// (<Sx>, <Sy>, <Sz>) of one spin.
Vec3 bloch_vector(const Eigen::Ref<const VectorC>& state, std::size_t n_spins, std::size_t spin);

/// 2 <Sy> of the readout spin, signed.
double center_coherence(const Eigen::Ref<const VectorC>& state, std::size_t n_spins,
                        std::size_t center);

/// 2 |<S_perp>| of the readout spin.
double transverse_coherence(const Eigen::Ref<const VectorC>& state, std::size_t n_spins,
                            std::size_t center);

}  // namespace xysim
