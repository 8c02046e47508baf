#include "xysim/ensemble.hpp"

#include <cmath>
#include <exception>
#include <string>

#include <omp.h>

#include "xysim/analytics.hpp"
#include "xysim/dynamics.hpp"
#include "xysim/errors.hpp"

namespace xysim {

void EnsembleSpec::validate() const {
  if (n_realizations < 1) throw InvalidArgument("n_realizations must be >= 1");
  if (n_spins < 2) throw InvalidArgument("N must be >= 2");
  if (n_spins > spin_cap) throw CapacityError("N exceeds the spin cap");
  if (!(ppm > 0.0)) throw InvalidArgument("concentration must be positive");
  if (!(W >= 0.0)) throw InvalidArgument("W must be >= 0");
  if (!(eta_pol >= 0.5 && eta_pol <= 1.0)) throw InvalidArgument("eta_pol must lie in [0.5, 1]");
  if (pulse_mode == PulseMode::finite && !(t_p > 0.0))
    throw InvalidArgument("finite pulse mode needs t_p > 0");
  lattice.validate();
  constants.validate();
}

Realization make_realization(const EnsembleSpec& spec, const DopingRegion& region, std::size_t r,
                             double phi) {
  const std::uint64_t seed = derive_seed(spec.master_seed, r);
  Rng pos_rng(derive_seed(seed, Stream::positions));
  Rng dis_rng(derive_seed(seed, Stream::disorder));
  Rng pol_rng(derive_seed(seed, Stream::polarization));
  Realization out;
  out.index = r;
  out.config = region.sample(pos_rng);
  out.J = coupling_matrix(out.config, spec.constants);
  out.disorder = sample_disorder(dis_rng, spec.W, spec.n_spins);
  out.state0 = prepare_initial(pol_rng, spec.n_spins, phi, spec.eta_pol);
  return out;
}

HamiltonianTerms realization_hamiltonian(const EnsembleSpec& spec, const Realization& real) {
  if (spec.alpha_B != 0.0)
    return build_xxz_hamiltonian(real.J, real.disorder, XxzControl{spec.alpha_B}, spec.spin_cap);
  return build_xy_hamiltonian(real.J, real.disorder, spec.spin_cap);
}

SequenceSpec with_pulse_mode(const SequenceSpec& seq, const EnsembleSpec& spec) {
  SequenceSpec out = seq;
  if (spec.pulse_mode != PulseMode::finite) return out;
  if (auto* s = std::get_if<EpsCpmg>(&out)) {
    s->mode = PulseMode::finite;
    s->t_p = spec.t_p;
  } else if (auto* w = std::get_if<WahuhaEcho>(&out)) {
    w->mode = PulseMode::finite;
    w->t_p = spec.t_p;
  }
  return out;
}

void for_each_realization(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for num_threads(threads) schedule(dynamic)
  for (std::int64_t r = 0; r < count; ++r) {
    try {
      fn(static_cast<std::size_t>(r));
    } catch (...) {
      errors[r] = std::current_exception();
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    if (!errors[r]) continue;
    try {
      std::rethrow_exception(errors[r]);
    } catch (const std::exception& e) {
      throw RealizationError(r, e.what());
    }
  }
}

std::vector<std::vector<double>> ensemble_rows(const EnsembleSpec& spec, const SequenceSpec& seq,
                                               const std::vector<double>& grid, int workers) {
  spec.validate();
  const SequenceSpec s = with_pulse_mode(seq, spec);
  validate(s);
  const double phi = std::holds_alternative<DtcFloquet>(s) ? std::get<DtcFloquet>(s).phi : pi / 2;
  const DopingRegion region(spec.lattice, spec.ppm, spec.n_spins);
  std::vector<std::vector<double>> rows(spec.n_realizations);
  for_each_realization(spec.n_realizations, workers, [&](std::size_t r) {
    const Realization real = make_realization(spec, region, r, phi);
    SpinSystem sys(realization_hamiltonian(spec, real).H_total, spec.n_spins,
                   real.config.center_index);
    rows[r] = run_sequence(sys, real.state0, s, grid);
  });
  return rows;
}

TraceStats run_ensemble(const EnsembleSpec& spec, const SequenceSpec& seq,
                        const std::vector<double>& grid, int workers) {
  const auto rows = ensemble_rows(spec, seq, grid, workers);
  return aggregate(sequence_times(with_pulse_mode(seq, spec), grid), rows);
}

std::vector<double> model_I_couplings(const EnsembleSpec& spec) {
  spec.validate();
  const DopingRegion region(spec.lattice, spec.ppm, spec.n_spins);
  std::vector<double> out(spec.n_realizations);
  for (std::size_t r = 0; r < spec.n_realizations; ++r) {
    const std::uint64_t seed = derive_seed(spec.master_seed, r);
    Rng pos_rng(derive_seed(seed, Stream::positions));
    const SpinConfiguration config = region.sample(pos_rng);
    out[r] = model_I_coupling(coupling_matrix(config, spec.constants), config.center_index);
  }
  return out;
}

double ensemble_early_slope(const EnsembleSpec& spec, int workers) {
  const double window = early_window(mean_J_from_ppm(spec.ppm));
  std::vector<double> grid;
  constexpr int kPoints = 12;
  for (int i = 0; i <= kPoints; ++i) grid.push_back(window * i / kPoints);
  const TraceStats t = run_ensemble(spec, SpinEcho{}, grid, workers);
  return fit_early_slope(t.times, t.mean, window).s;
}

Calibration calibrate_concentration(double target_slope, double ppm_lo, double ppm_hi,
                                    const EnsembleSpec& base, int workers) {
  if (!(target_slope > 0.0)) throw InvalidArgument("target slope must be positive");
  if (!(ppm_lo > 0.0 && ppm_hi > ppm_lo)) throw InvalidArgument("invalid ppm search range");
  auto slope_at = [&](double ppm) {
    EnsembleSpec s = base;
    s.ppm = ppm;
    return ensemble_early_slope(s, workers);
  };
  auto close = [&](double s) { return std::abs(s / target_slope - 1.0) < 0.03; };

  double lo = std::log(ppm_lo), hi = std::log(ppm_hi);
  const double s_lo = slope_at(ppm_lo);
  if (close(s_lo)) return {ppm_lo, s_lo, 1};
  const double s_hi = slope_at(ppm_hi);
  if (close(s_hi)) return {ppm_hi, s_hi, 2};
  if (target_slope < s_lo || target_slope > s_hi)
    throw FitError("calibration range exhausted: target slope outside [" + std::to_string(s_lo) +
                   ", " + std::to_string(s_hi) + "]");
  for (int it = 3; it <= 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double s = slope_at(std::exp(mid));
    if (close(s)) return {std::exp(mid), s, it};
    (s < target_slope ? lo : hi) = mid;
  }
  throw FitError("calibration did not converge");
}

TraceStats rescale_by_polarization(const TraceStats& trace, double eta_pol) {
  if (!(eta_pol > 0.5 && eta_pol <= 1.0))
    throw InvalidArgument("eta_pol must lie in (0.5, 1] for rescaling");
  const double f = 1.0 / (2.0 * eta_pol - 1.0);
  TraceStats out = trace;
  for (auto& v : out.mean) v *= f;
  for (auto& v : out.stderr_) v *= f;
  return out;
}

}  // namespace xysim
