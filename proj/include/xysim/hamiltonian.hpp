#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "xysim/lattice.hpp"
#include "xysim/rng.hpp"
#include "xysim/spin_ops.hpp"
#include "xysim/units.hpp"

namespace xysim {

struct PhysicalConstants {
  double g_parallel = 6.08;
  double g_perp = 0.85;
  // mu0 muB^2 g_par^2 / (4 pi), rad/us * nm^3
  double dipolar_prefactor = mhz(480.0);

  void validate() const;
};

/// Symmetric N x N, zero diagonal, rad/us.
using CouplingMatrix = MatrixR;

struct DisorderField {
  Eigen::VectorXd deltas;  // rad/us
  double W = 0.0;          // Lorentzian FWHM, rad/us
};

/// Truncation of Lorentzian tails in units of W.
inline constexpr double kDisorderTruncation = 20.0;

/// Default maximum register size for the Hamiltonian builders.
inline constexpr std::size_t kDefaultSpinCap = 14;

/// -(prefactor/2) (3 z^2 - 1) / r^3 with z the c-axis direction cosine.
double pairwise_coupling(const Vec3& pos_i, const Vec3& pos_j,
                         const PhysicalConstants& constants = {});

CouplingMatrix coupling_matrix(const SpinConfiguration& config,
                               const PhysicalConstants& constants = {});

/// Lorentzian detunings with FWHM W, re-drawn while |delta| > 20 W.
DisorderField sample_disorder(Rng& rng, double W, std::size_t n_spins);

// Labeled parts of a many-body Hamiltonian on the 2^N register. All parts are
// real symmetric in the computational basis.
struct HamiltonianTerms {
  std::size_t n_spins = 0;
  MatrixR H_dis;        // sum_i Delta_i Sz^i
  MatrixR H_exchange;   // sum_{i>j} J_ij (Sx Sx + Sy Sy)
  MatrixR H_ising_z;    // sum_{i>j} J_ij Sz Sz
  MatrixR H_total;
  double exchange_weight = 1.0;
  double ising_weight = 0.0;

  std::size_t dim() const { return hilbert_dim(n_spins); }
};

HamiltonianTerms build_xy_hamiltonian(const CouplingMatrix& couplings,
                                      const DisorderField& disorder,
                                      std::size_t spin_cap = kDefaultSpinCap);

// Small-field XXZ control. alpha_B = g_par muB B / omega.
struct XxzControl {
  double alpha_B = 0.0;
  double omega = mhz(675.0);

  static constexpr double kMaxAlpha = 0.3;
  static constexpr double kWarnAlpha = 0.1;
};

/// (1 - a^2/2) H_exchange + 2 a^2 H_ising_z, disorder unchanged.
HamiltonianTerms build_xxz_hamiltonian(const CouplingMatrix& couplings,
                                       const DisorderField& disorder, const XxzControl& control,
                                       std::size_t spin_cap = kDefaultSpinCap);

/// Flip-flip/flop-flop part dropped by the secular approximation,
/// sum_{i>j} (J_ij/2)(S+S+ + S-S-). Diagnostics only.
MatrixR non_secular_terms(const CouplingMatrix& couplings);

/// (g_perp/g_par)^4: golden-rule rate ratio of qubit->Aux vs qubit flip-flops.
double aux_leakage_ratio(const PhysicalConstants& constants = {});

/// -(1/4)(g_perp/g_par)^2 J_ij: Aux<->qubit exchange matrix element.
double aux_exchange_element(double J_ij, const PhysicalConstants& constants = {});

}  // namespace xysim
