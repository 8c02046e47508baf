#pragma once

#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "xysim/dynamics.hpp"
#include "xysim/propagator.hpp"
#include "xysim/units.hpp"

namespace xysim {

// All sequences start from a state that already carries the preparation
// rotation (prepare_initial with phi = pi/2 is the pi/2_x pulse).

struct Ramsey {
  double tau = 0.0;
};

struct SpinEcho {
  double tau = 0.0;  // total free time; the pi_y pulse sits at tau/2
};

struct EpsCpmg {
  double tau = 0.0;      // pulse spacing; block = tau/2, (pi+eps)_y, tau/2
  double epsilon = 0.0;  // rad
  int k = 1;
  double t_p = 0.0;      // (pi+eps) pulse duration, finite mode
  PulseMode mode = PulseMode::ideal;
};

struct WahuhaEcho {
  double tau = 0.0;  // pulse-center spacing; block length 6 tau
  int k = 1;
  double t_p = 0.0;  // pi/2 duration in finite mode; pi takes 2 t_p
  PulseMode mode = PulseMode::ideal;
};

struct SpinLock {
  double omega_y = 0.0;
  double T = 0.0;
};

struct DtcFloquet {
  double tau = 0.0;  // spin-lock time per cycle
  double epsilon = 0.0;
  int k = 60;
  double phi = pi / 2;
  double omega_y = mhz(10.0);
};

using SequenceSpec = std::variant<Ramsey, SpinEcho, EpsCpmg, WahuhaEcho, SpinLock, DtcFloquet>;

/// Throws SequenceError on an invalid or infeasible specification.
void validate(const SequenceSpec& spec);
std::string sequence_name(const SequenceSpec& spec);

/// Block length of a repeated sequence (eps-CPMG, WAHUHA-echo, DTC), else 0.
double period(const SequenceSpec& spec);

// One disorder/position realization: Hamiltonian, readout spin and the
// propagators built from it on demand. Not thread-safe; one per worker.
class SpinSystem {
 public:
  SpinSystem(MatrixR h, std::size_t n_spins, std::size_t center, Exec exec = Exec::serial);
  SpinSystem(MatrixC h, std::size_t n_spins, std::size_t center, Exec exec = Exec::serial);

  std::size_t n_spins() const { return n_spins_; }
  std::size_t center() const { return center_; }
  Exec exec() const { return exec_; }
  const MatrixC& hamiltonian() const { return h_; }

  const Propagator& free();
  /// Propagator of H + rabi * n.S_tot.
  const Propagator& driven(const Vec3& axis, double rabi);

  /// Rotation by `angle` about `axis`, ideal or finite (rabi = |angle|/duration).
  void pulse(MatrixC& states, const Vec3& axis, double angle, PulseMode mode, double duration);
  void pulse(MatrixC& states, const Vec3& axis, const Eigen::VectorXd& angles);

  double coherence(const Eigen::Ref<const VectorC>& state) const;
  Eigen::VectorXd coherences(const MatrixC& states) const;

 private:
  MatrixC h_;
  bool real_;
  std::size_t n_spins_;
  std::size_t center_;
  Exec exec_;
  std::unique_ptr<Propagator> free_;
  std::map<std::tuple<double, double, double, double>, std::unique_ptr<Propagator>> driven_;
};

struct CoherenceTrace {
  std::vector<double> times;
  std::vector<double> values;
};

double run_ramsey(SpinSystem& sys, const VectorC& state0, double tau);
double run_spin_echo(SpinSystem& sys, const VectorC& state0, double tau);
/// Coherence after k' = 0..k blocks, at T = k' * period.
CoherenceTrace run_eps_cpmg(SpinSystem& sys, const VectorC& state0, const EpsCpmg& spec);
CoherenceTrace run_wahuha_echo(SpinSystem& sys, const VectorC& state0, const WahuhaEcho& spec);
CoherenceTrace run_spin_lock(SpinSystem& sys, const VectorC& state0, const SpinLock& spec,
                             const std::vector<double>& sample_times);

/// Signed series s(k) = 2<Sy_c> after each cycle k = 1..K; P(k) = |s(k)|.
struct DtcSeries {
  std::vector<double> signed_values;
  std::vector<double> contrast() const;
};
DtcSeries run_dtc_floquet(SpinSystem& sys, const VectorC& state0, const DtcFloquet& spec);

/// Run several DTC specs that differ only in epsilon, sharing the lock propagator.
std::vector<DtcSeries> run_dtc_batch(SpinSystem& sys, const VectorC& state0, double tau, int k,
                                     double omega_y, const std::vector<double>& epsilons);

/// Output times for `spec` given a user grid (Ramsey/echo/spin-lock use the
/// grid; repeated sequences report k' * period for k' = 0..k).
std::vector<double> sequence_times(const SequenceSpec& spec, const std::vector<double>& grid);

/// Signed center coherence at each output time of sequence_times().
std::vector<double> run_sequence(SpinSystem& sys, const VectorC& state0, const SequenceSpec& spec,
                                 const std::vector<double>& grid);

struct AnalyzerFit {
  double C_amp = 0.0;      // sqrt(a^2 + b^2) of a cos + b sin
  double C_offset = 0.0;
  double in_phase = 0.0;   // a / C_offset, equals the signed coherence
  double coherence = 0.0;  // C_amp / C_offset
  double residual = 0.0;   // rms fit residual
};

/// Final pi/2 pulse about (cos theta, sin theta, 0) for each theta, records
/// the readout spin's |1> population and fits C(theta) = a cos + b sin + c.
AnalyzerFit emulate_analyzer_sweep(const Eigen::Ref<const VectorC>& state, std::size_t n_spins,
                                   std::size_t center, const std::vector<double>& theta_grid);

/// Two-readout contrast |C+ - C-| / (C+ + C-) with pi/2 analyzer pulses about +-x.
double dtc_contrast(const Eigen::Ref<const VectorC>& state, std::size_t n_spins,
                    std::size_t center);

}  // namespace xysim
