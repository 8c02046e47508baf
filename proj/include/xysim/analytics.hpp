#pragma once

#include <array>
#include <vector>

#include "xysim/hamiltonian.hpp"
#include "xysim/rng.hpp"
#include "xysim/stats.hpp"

namespace xysim {

struct TwoSpinParams {
  double J = 0.0;
  double Delta = 0.0;  // relative detuning
};

/// Spin-echo polarization of a pair:
/// D^2/(D^2+J^2) + J^2/(D^2+J^2) cos(sqrt(D^2+J^2) tau / 2).
double two_spin_echo_polarization(const TwoSpinParams& p, double tau);

/// Gaussian sampling spec: mean and FWHM (rad/us).
struct GaussianDist {
  double mean = 0.0;
  double fwhm = 0.0;
  double sample(Rng& rng) const;
};

/// Monte Carlo mean of the pair formula over sampled (J, Delta).
double two_spin_ensemble_average(const GaussianDist& J_dist, const GaussianDist& W_dist,
                                 double tau, std::size_t n_samples, Rng& rng);

/// <J^2>/4: early-time coefficient of d<P>/dtau = -(<J^2>/4) tau.
double early_decay_rate(const std::vector<double>& J_samples);

struct ThreeSpinParams {
  double J0 = 0.0;
  double J1 = 0.0;
  double J2 = 0.0;
};

struct OscillationTerm {
  double amplitude = 0.0;
  double frequency = 0.0;  // rad/us
};

// Second-order expansion of spin 1's echo polarization for a strong pair
// (J0) weakly coupled to a third spin (J1, J2).
struct PerturbativeTerms {
  double dc = 0.0;
  OscillationTerm slow;              // J1 J2 / J0
  std::array<OscillationTerm, 5> fast;  // J0 + nu0, J0/2 + nu1..nu4
  std::array<double, 5> nu{};

  double evaluate(double tau) const;
  double amplitude_sum() const;
};

/// Throws InvalidArgument for J0 = 0; warns on std::clog when |J1|,|J2| > 0.4 |J0|.
PerturbativeTerms perturbative_terms(const ThreeSpinParams& p);
double three_spin_perturbative(const ThreeSpinParams& p, double tau);

/// Largest-|J| coupling of the readout spin (Model I pair).
double model_I_coupling(const CouplingMatrix& J, std::size_t center);

/// Ensemble mean of cos(J_max tau / 2).
TraceStats model_I_trace(const std::vector<double>& j_max, const std::vector<double>& tau_grid);

}  // namespace xysim
