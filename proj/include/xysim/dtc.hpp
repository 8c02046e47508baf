#pragma once

#include <vector>

#include "xysim/ensemble.hpp"

namespace xysim {

enum class SpectrumInput { signed_series, contrast };

struct Spectrum {
  std::vector<double> nu;         // cycles per Floquet period
  std::vector<double> intensity;  // |S(nu)|^2
};

/// Grid {j/K : j = 0..K-1}.
std::vector<double> default_nu_grid(std::size_t K);

/// S(nu) = (1/K) sum_{k=1..K} P(k) exp(-2 pi i nu k).
Spectrum dft_spectrum(const std::vector<double>& series, const std::vector<double>& nu_grid);
Spectrum dft_spectrum(const std::vector<double>& series);

/// |S(1/2)|^2; the grid must contain 1/2.
double subharmonic_intensity(const Spectrum& spectrum);

struct PhaseDiagramOptions {
  int k_cycles = 60;
  double phi = pi / 2;
  double omega_y = mhz(10.0);
  double threshold = 0.4;
  SpectrumInput input = SpectrumInput::signed_series;
};

struct PhaseDiagram {
  std::vector<double> taus;      // us
  std::vector<double> epsilons;  // rad
  // intensity[i][j] for taus[i], epsilons[j], from the ensemble-mean series
  std::vector<std::vector<double>> intensity;
  std::vector<double> boundary;     // eps*(tau) >= 0, NaN if no crossing
  std::vector<bool> reentrant;      // row crosses back above threshold further out
  double threshold = 0.4;
};

/// Ensemble-averaged series at every (tau, eps); each realization is
/// diagonalized once and reused across the whole grid.
PhaseDiagram build_phase_diagram(const EnsembleSpec& spec, const std::vector<double>& taus,
                                 const std::vector<double>& epsilons,
                                 const PhaseDiagramOptions& options, int workers = 0);

/// eps* per row: scanning outward from eps = 0 on each side, the first
/// threshold crossing (linear interpolation in |eps|); the innermost side wins.
void compute_boundary(PhaseDiagram& diagram);

/// Least-squares slope of eps*(tau) in rad/us; needs >= 3 finite points.
double boundary_slope(const PhaseDiagram& diagram);

/// Fraction of grid cells at or above the threshold.
double subharmonic_area(const PhaseDiagram& diagram);

}  // namespace xysim
