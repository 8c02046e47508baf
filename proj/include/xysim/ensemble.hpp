#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "xysim/fit.hpp"
#include "xysim/hamiltonian.hpp"
#include "xysim/lattice.hpp"
#include "xysim/sequences.hpp"
#include "xysim/stats.hpp"

namespace xysim {

struct EnsembleSpec {
  std::size_t n_realizations = 500;
  std::uint64_t master_seed = 1;
  std::size_t n_spins = 9;
  double ppm = 46.0;
  double W = mhz(0.65);
  double eta_pol = 1.0;
  PulseMode pulse_mode = PulseMode::ideal;
  double t_p = 0.0;      // used by eps-CPMG / WAHUHA-echo in finite mode
  double alpha_B = 0.0;  // XXZ admixture; 0 is the zero-field XY model
  std::size_t spin_cap = kDefaultSpinCap;
  CrystalLattice lattice;
  PhysicalConstants constants;

  void validate() const;
};

/// Everything drawn for realization r. Sub-streams are keyed by purpose, so
/// e.g. positions do not change when W or eta_pol do.
struct Realization {
  std::size_t index = 0;
  SpinConfiguration config;
  CouplingMatrix J;
  DisorderField disorder;
  VectorC state0;
};

Realization make_realization(const EnsembleSpec& spec, const DopingRegion& region, std::size_t r,
                             double phi = pi / 2);

/// Hamiltonian for a realization (XY, or XXZ when alpha_B != 0).
HamiltonianTerms realization_hamiltonian(const EnsembleSpec& spec, const Realization& real);

/// Applies the ensemble's pulse mode and t_p to sequences that support them.
SequenceSpec with_pulse_mode(const SequenceSpec& seq, const EnsembleSpec& spec);

/// Calls fn(r) for r in [0, n) on `workers` threads (0 = all available).
/// The first failure by realization index is rethrown as RealizationError.
void for_each_realization(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

/// Per-realization signed coherence rows, in realization order.
std::vector<std::vector<double>> ensemble_rows(const EnsembleSpec& spec, const SequenceSpec& seq,
                                               const std::vector<double>& grid, int workers = 0);

TraceStats run_ensemble(const EnsembleSpec& spec, const SequenceSpec& seq,
                        const std::vector<double>& grid, int workers = 0);

/// J_max of the readout spin for each realization (Model I), paired with run_ensemble.
std::vector<double> model_I_couplings(const EnsembleSpec& spec);

struct Calibration {
  double ppm = 0.0;
  double slope = 0.0;
  int iterations = 0;
};

/// Spin-echo early quadratic coefficient of an ensemble at spec.ppm.
double ensemble_early_slope(const EnsembleSpec& spec, int workers = 0);

/// Bisection in log(ppm) until the early slope is within 3% of the target.
/// Throws FitError when the target lies outside the range.
Calibration calibrate_concentration(double target_slope, double ppm_lo, double ppm_hi,
                                    const EnsembleSpec& base, int workers = 0);

/// Divides means and standard errors by (2 eta_pol - 1).
TraceStats rescale_by_polarization(const TraceStats& trace, double eta_pol);

}  // namespace xysim
