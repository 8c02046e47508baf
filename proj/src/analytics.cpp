#include "xysim/analytics.hpp"

#include <cmath>
#include <iostream>

#include "xysim/errors.hpp"

namespace xysim {

double two_spin_echo_polarization(const TwoSpinParams& p, double tau) {
  if (!(tau >= 0.0)) throw InvalidArgument("tau must be >= 0");
  const double w2 = p.Delta * p.Delta + p.J * p.J;
  if (w2 == 0.0) return 1.0;
  const double w = std::sqrt(w2);
  return (p.Delta * p.Delta + p.J * p.J * std::cos(0.5 * w * tau)) / w2;
}

double GaussianDist::sample(Rng& rng) const {
  if (fwhm == 0.0) return mean;
  const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  return mean + sigma * rng.normal();
}

double two_spin_ensemble_average(const GaussianDist& J_dist, const GaussianDist& W_dist,
                                 double tau, std::size_t n_samples, Rng& rng) {
  if (n_samples == 0) throw InvalidArgument("n_samples must be >= 1");
  double sum = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double J = J_dist.sample(rng);
    const double D = W_dist.sample(rng);
    sum += two_spin_echo_polarization({J, D}, tau);
  }
  return sum / static_cast<double>(n_samples);
}

double early_decay_rate(const std::vector<double>& J_samples) {
  if (J_samples.empty()) throw InvalidArgument("no coupling samples");
  double s = 0.0;
  for (double J : J_samples) s += J * J;
  return 0.25 * s / static_cast<double>(J_samples.size());
}

PerturbativeTerms perturbative_terms(const ThreeSpinParams& p) {
  const double J0 = p.J0, J1 = p.J1, J2 = p.J2;
  if (J0 == 0.0) throw InvalidArgument("J0 must be non-zero");
  if (std::max(std::abs(J1), std::abs(J2)) > 0.4 * std::abs(J0))
    std::clog << "warning: |J1|,|J2| not small against |J0|; perturbation theory unreliable\n";
  const double a = 1.0 / J0, a2 = a * a;

  PerturbativeTerms t;
  t.nu = {(J1 * J1 + J2 * J2) / (2 * J0), (J1 * J1 + J2 * J2 + 6 * J1 * J2) / (4 * J0),
          (J1 + J2) * (J1 + J2) / (4 * J0), (J1 * J1 + J2 * J2 - 6 * J1 * J2) / (4 * J0),
          (J1 - J2) * (J1 - J2) / (4 * J0)};
  t.dc = J2 * a / 2 + (3 * J1 * J1 + J2 * J2 + 4 * J1 * J2) * a2 / 2;
  t.slow = {-0.5 * (J2 * a - J2 * (J1 + J2) * a2), J1 * J2 * a};
  t.fast[0] = {J1 * (J1 - J2) * a2 / 2, J0 + t.nu[0]};
  t.fast[1] = {0.5 * (1 - (J1 + J2) * a / 2 - (13 * J1 * J1 + 7 * J2 * J2 + 12 * J1 * J2) * a2 / 4),
               J0 / 2 + t.nu[1]};
  t.fast[2] = {0.5 * (1 + (J1 + J2) * a / 2 - (J1 * J1 + 3 * J2 * J2 + 4 * J1 * J2) * a2 / 4),
               J0 / 2 + t.nu[2]};
  t.fast[3] = {0.5 * ((J1 - J2) * a / 2 + 3 * (J2 * J2 - J1 * J1) * a2 / 4), J0 / 2 + t.nu[3]};
  t.fast[4] = {0.5 * ((J2 - J1) * a / 2 + (J1 * J1 - J2 * J2) * a2 / 4), J0 / 2 + t.nu[4]};
  return t;
}

double PerturbativeTerms::evaluate(double tau) const {
  double v = dc + slow.amplitude * std::cos(slow.frequency * tau);
  for (const auto& f : fast) v += f.amplitude * std::cos(f.frequency * tau);
  return v;
}

double PerturbativeTerms::amplitude_sum() const {
  double s = dc + slow.amplitude;
  for (const auto& f : fast) s += f.amplitude;
  return s;
}

double three_spin_perturbative(const ThreeSpinParams& p, double tau) {
  return perturbative_terms(p).evaluate(tau);
}

double model_I_coupling(const CouplingMatrix& J, std::size_t center) {
  const auto c = static_cast<Eigen::Index>(center);
  if (c >= J.rows()) throw InvalidArgument("readout spin index out of range");
  double best = 0.0;
  for (Eigen::Index j = 0; j < J.cols(); ++j)
    if (j != c && std::abs(J(c, j)) > std::abs(best)) best = J(c, j);
  return best;
}

TraceStats model_I_trace(const std::vector<double>& j_max, const std::vector<double>& tau_grid) {
  std::vector<std::vector<double>> rows;
  rows.reserve(j_max.size());
  for (double J : j_max) {
    std::vector<double> r;
    r.reserve(tau_grid.size());
    for (double t : tau_grid) r.push_back(std::cos(0.5 * J * t));
    rows.push_back(std::move(r));
  }
  return aggregate(tau_grid, rows);
}

}  // namespace xysim
