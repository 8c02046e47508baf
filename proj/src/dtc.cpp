#include "xysim/dtc.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "xysim/errors.hpp"

namespace xysim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Crossing {
  double eps = kNaN;
  bool reentrant = false;
};

// `side` holds (|eps|, intensity) sorted by |eps|.
Crossing scan_side(const std::vector<std::pair<double, double>>& side, double thr) {
  Crossing c;
  if (side.empty() || side.front().second < thr) return c;
  for (std::size_t p = 1; p < side.size(); ++p) {
    if (side[p].second >= thr) continue;
    const auto [e0, i0] = side[p - 1];
    const auto [e1, i1] = side[p];
    c.eps = e0 + (i0 - thr) / (i0 - i1) * (e1 - e0);
    for (std::size_t q = p + 1; q < side.size(); ++q)
      if (side[q].second >= thr) c.reentrant = true;
    break;
  }
  return c;
}

}  // namespace

std::vector<double> default_nu_grid(std::size_t K) {
  std::vector<double> nu(K);
  for (std::size_t j = 0; j < K; ++j) nu[j] = static_cast<double>(j) / static_cast<double>(K);
  return nu;
}

Spectrum dft_spectrum(const std::vector<double>& series, const std::vector<double>& nu_grid) {
  if (series.empty()) throw InvalidArgument("empty polarization series");
  const double K = static_cast<double>(series.size());
  Spectrum s;
  s.nu = nu_grid;
  s.intensity.reserve(nu_grid.size());
  for (double nu : nu_grid) {
    std::complex<double> acc{};
    for (std::size_t k = 1; k <= series.size(); ++k)
      acc += series[k - 1] * std::polar(1.0, -two_pi * nu * static_cast<double>(k));
    s.intensity.push_back(std::norm(acc / K));
  }
  return s;
}

Spectrum dft_spectrum(const std::vector<double>& series) {
  return dft_spectrum(series, default_nu_grid(series.size()));
}

double subharmonic_intensity(const Spectrum& spectrum) {
  for (std::size_t j = 0; j < spectrum.nu.size(); ++j)
    if (std::abs(spectrum.nu[j] - 0.5) < 1e-12) return spectrum.intensity[j];
  throw InvalidArgument("frequency grid does not contain nu = 1/2");
}

PhaseDiagram build_phase_diagram(const EnsembleSpec& spec, const std::vector<double>& taus,
                                 const std::vector<double>& epsilons,
                                 const PhaseDiagramOptions& options, int workers) {
  spec.validate();
  if (taus.empty() || epsilons.empty()) throw InvalidArgument("phase-diagram grids must be non-empty");
  if (options.k_cycles < 8) throw InvalidArgument("k_cycles must be >= 8");
  if (options.k_cycles % 2 != 0)
    throw InvalidArgument("k_cycles must be even so that nu = 1/2 lies on the DFT grid");
  for (double t : taus) validate(DtcFloquet{t, 0.0, options.k_cycles, options.phi, options.omega_y});
  for (double e : epsilons)
    validate(DtcFloquet{0.0, e, options.k_cycles, options.phi, options.omega_y});

  const std::size_t nt = taus.size(), ne = epsilons.size();
  const auto K = static_cast<std::size_t>(options.k_cycles);
  const DopingRegion region(spec.lattice, spec.ppm, spec.n_spins);

  // rows[r][i * ne + j] is the signed series of realization r at (tau_i, eps_j).
  std::vector<std::vector<std::vector<double>>> rows(spec.n_realizations);
  for_each_realization(spec.n_realizations, workers, [&](std::size_t r) {
    const Realization real = make_realization(spec, region, r, options.phi);
    SpinSystem sys(realization_hamiltonian(spec, real).H_total, spec.n_spins,
                   real.config.center_index);
    auto& out = rows[r];
    out.resize(nt * ne);
    for (std::size_t i = 0; i < nt; ++i) {
      auto series = run_dtc_batch(sys, real.state0, taus[i], options.k_cycles, options.omega_y,
                                  epsilons);
      for (std::size_t j = 0; j < ne; ++j) out[i * ne + j] = std::move(series[j].signed_values);
    }
  });

  PhaseDiagram d;
  d.taus = taus;
  d.epsilons = epsilons;
  d.threshold = options.threshold;
  d.intensity.assign(nt, std::vector<double>(ne, 0.0));
  const auto n = static_cast<double>(spec.n_realizations);
  const std::vector<double> nu = default_nu_grid(K);
  for (std::size_t i = 0; i < nt; ++i) {
    for (std::size_t j = 0; j < ne; ++j) {
      std::vector<double> mean(K, 0.0);
      for (const auto& row : rows)
        for (std::size_t k = 0; k < K; ++k) mean[k] += row[i * ne + j][k];
      for (auto& v : mean) {
        v /= n;
        if (options.input == SpectrumInput::contrast) v = std::abs(v);
      }
      d.intensity[i][j] = subharmonic_intensity(dft_spectrum(mean, nu));
    }
  }
  compute_boundary(d);
  return d;
}

void compute_boundary(PhaseDiagram& d) {
  const std::size_t nt = d.taus.size();
  d.boundary.assign(nt, kNaN);
  d.reentrant.assign(nt, false);
  for (std::size_t i = 0; i < nt; ++i) {
    std::vector<std::pair<double, double>> pos, neg;
    for (std::size_t j = 0; j < d.epsilons.size(); ++j) {
      const double e = d.epsilons[j];
      if (e >= 0.0) pos.emplace_back(e, d.intensity[i][j]);
      if (e <= 0.0) neg.emplace_back(-e, d.intensity[i][j]);
    }
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());
    const Crossing a = scan_side(pos, d.threshold);
    const Crossing b = scan_side(neg, d.threshold);
    double eps = kNaN;
    bool re = false;
    for (const Crossing& c : {a, b}) {
      if (std::isnan(c.eps)) continue;
      if (std::isnan(eps) || c.eps < eps) {
        eps = c.eps;
        re = c.reentrant;
      }
    }
    d.boundary[i] = eps;
    d.reentrant[i] = re;
  }
}

double boundary_slope(const PhaseDiagram& d) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < d.taus.size() && i < d.boundary.size(); ++i) {
    if (std::isnan(d.boundary[i])) continue;
    const double x = d.taus[i], y = d.boundary[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) throw InvalidArgument("insufficient data: need at least 3 boundary points");
  const double denom = n * sxx - sx * sx;
  if (!(denom > 0.0)) throw InvalidArgument("insufficient data: boundary taus coincide");
  return (n * sxy - sx * sy) / denom;
}

double subharmonic_area(const PhaseDiagram& d) {
  std::size_t above = 0, total = 0;
  for (const auto& row : d.intensity)
    for (double v : row) {
      ++total;
      if (v >= d.threshold) ++above;
    }
  return total ? static_cast<double>(above) / static_cast<double>(total) : 0.0;
}

}  // namespace xysim
