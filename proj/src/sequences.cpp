#include "xysim/sequences.hpp"

#include <cmath>

#include <Eigen/QR>

#include "xysim/errors.hpp"

namespace xysim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// One element of a pulse block: free evolution (angle == 0, no axis) or a pulse.
struct Step {
  bool is_pulse = false;
  Vec3 axis = Vec3::Zero();
  double angle = 0.0;
  double duration = 0.0;
};

Step free_step(double t) { return {false, Vec3::Zero(), 0.0, t}; }
Step pulse_step(const Vec3& axis, double angle, double duration) {
  return {true, axis, angle, duration};
}

std::vector<Step> cpmg_block(const EpsCpmg& s) {
  const double t_p = s.mode == PulseMode::finite ? s.t_p : 0.0;
  return {free_step(0.5 * s.tau), pulse_step(Vec3::UnitY(), pi + s.epsilon, t_p),
          free_step(0.5 * s.tau)};
}

// WAHUHA-echo block: pulse centers at tau..5tau inside 6 tau. Phases x, y, y(pi), -y, x
// give toggling frames z, y, -x, x, -y, -z.
std::vector<Step> wahuha_block(const WahuhaEcho& s) {
  const bool finite = s.mode == PulseMode::finite;
  const std::array<Vec3, 5> axes{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitY(), -Vec3::UnitY(),
                                 Vec3::UnitX()};
  const std::array<double, 5> angles{pi / 2, pi / 2, pi, pi / 2, pi / 2};
  std::array<double, 5> widths{};
  for (int i = 0; i < 5; ++i) widths[i] = finite ? s.t_p * angles[i] / (pi / 2) : 0.0;
  std::vector<Step> steps;
  double prev_half = 0.0;
  for (int i = 0; i < 5; ++i) {
    steps.push_back(free_step(s.tau - prev_half - 0.5 * widths[i]));
    steps.push_back(pulse_step(axes[i], angles[i], widths[i]));
    prev_half = 0.5 * widths[i];
  }
  steps.push_back(free_step(s.tau - prev_half));
  return steps;
}

void run_steps(SpinSystem& sys, MatrixC& states, const std::vector<Step>& steps, PulseMode mode) {
  for (const Step& st : steps) {
    if (st.is_pulse)
      sys.pulse(states, st.axis, st.angle, mode, st.duration);
    else if (st.duration > 0.0)
      sys.free().apply(states, st.duration, sys.exec());
  }
}

CoherenceTrace run_blocks(SpinSystem& sys, const VectorC& state0, const std::vector<Step>& block,
                          int k, double block_time, PulseMode mode) {
  CoherenceTrace trace;
  MatrixC states = state0;
  trace.times.push_back(0.0);
  trace.values.push_back(sys.coherence(states.col(0)));
  for (int rep = 1; rep <= k; ++rep) {
    run_steps(sys, states, block, mode);
    trace.times.push_back(rep * block_time);
    trace.values.push_back(sys.coherence(states.col(0)));
  }
  return trace;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw SequenceError(what);
}

MatrixC replicate(const VectorC& v, Eigen::Index m) { return v.replicate(1, m); }

Eigen::VectorXd as_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

void validate(const SequenceSpec& spec) {
  std::visit(overloaded{
                 [](const Ramsey& s) { require(s.tau >= 0.0, "tau must be >= 0"); },
                 [](const SpinEcho& s) { require(s.tau >= 0.0, "tau must be >= 0"); },
                 [](const EpsCpmg& s) {
                   require(s.tau >= 0.0 && s.t_p >= 0.0, "times must be >= 0");
                   require(s.k >= 1, "k must be >= 1");
                   require(std::abs(s.epsilon) <= pi + 1e-12, "|epsilon| must be <= pi");
                   if (s.mode == PulseMode::finite)
                     require(s.t_p > 0.0, "finite pulses need t_p > 0");
                 },
                 [](const WahuhaEcho& s) {
                   require(s.tau >= 0.0 && s.t_p >= 0.0, "times must be >= 0");
                   require(s.k >= 1, "k must be >= 1");
                   if (s.mode == PulseMode::finite) {
                     require(s.t_p > 0.0, "finite pulses need t_p > 0");
                     // The 2 t_p pi pulse sits between two pi/2 pulses.
                     require(s.tau >= 1.5 * s.t_p,
                             "WAHUHA timing infeasible: need tau >= 1.5 t_p in finite mode");
                   }
                 },
                 [](const SpinLock& s) {
                   require(s.T >= 0.0, "T must be >= 0");
                   require(std::isfinite(s.omega_y), "omega_y must be finite");
                 },
                 [](const DtcFloquet& s) {
                   require(s.tau >= 0.0, "tau must be >= 0");
                   require(s.k >= 1, "k must be >= 1");
                   require(std::abs(s.epsilon) <= pi + 1e-12, "|epsilon| must be <= pi");
                   require(s.phi >= 0.0 && s.phi <= pi / 2 + 1e-12, "phi must lie in [0, pi/2]");
                 },
             },
             spec);
}

std::string sequence_name(const SequenceSpec& spec) {
  static const char* names[] = {"ramsey", "spin-echo", "eps-cpmg", "wahuha-echo", "spin-lock",
                                "dtc-floquet"};
  return names[spec.index()];
}

double period(const SequenceSpec& spec) {
  return std::visit(
      overloaded{
          [](const EpsCpmg& s) { return s.tau + (s.mode == PulseMode::finite ? s.t_p : 0.0); },
          [](const WahuhaEcho& s) { return 6.0 * s.tau; },
          [](const DtcFloquet& s) { return s.tau; },
          [](const auto&) { return 0.0; },
      },
      spec);
}

SpinSystem::SpinSystem(MatrixR h, std::size_t n_spins, std::size_t center, Exec exec)
    : h_(h.cast<cplx>()), real_(true), n_spins_(n_spins), center_(center), exec_(exec) {
  if (static_cast<std::size_t>(h_.rows()) != hilbert_dim(n_spins))
    throw ShapeError("Hamiltonian size does not match 2^N");
  if (center >= n_spins) throw InvalidArgument("readout spin index out of range");
}

SpinSystem::SpinSystem(MatrixC h, std::size_t n_spins, std::size_t center, Exec exec)
    : h_(std::move(h)), real_(false), n_spins_(n_spins), center_(center), exec_(exec) {
  if (static_cast<std::size_t>(h_.rows()) != hilbert_dim(n_spins))
    throw ShapeError("Hamiltonian size does not match 2^N");
  if (center >= n_spins) throw InvalidArgument("readout spin index out of range");
}

const Propagator& SpinSystem::free() {
  if (!free_) free_ = real_ ? std::make_unique<Propagator>(MatrixR(h_.real()))
                            : std::make_unique<Propagator>(h_);
  return *free_;
}

const Propagator& SpinSystem::driven(const Vec3& axis, double rabi) {
  const auto key = std::make_tuple(axis.x(), axis.y(), axis.z(), rabi);
  auto& slot = driven_[key];
  if (!slot) slot = std::make_unique<Propagator>(driven_hamiltonian(h_, n_spins_, axis, rabi));
  return *slot;
}

void SpinSystem::pulse(MatrixC& states, const Vec3& axis, double angle, PulseMode mode,
                       double duration) {
  if (mode == PulseMode::ideal) {
    if (angle != 0.0) kernels::apply_rotation_columns(states, n_spins_, rotation_matrix(axis, angle), exec_);
    return;
  }
  if (!(duration > 0.0)) throw SequenceError("finite pulse needs a positive duration");
  if (angle == 0.0) {
    free().apply(states, duration, exec_);
    return;
  }
  const Vec3 n = angle > 0.0 ? Vec3(axis.normalized()) : Vec3(-axis.normalized());
  driven(n, std::abs(angle) / duration).apply(states, duration, exec_);
}

void SpinSystem::pulse(MatrixC& states, const Vec3& axis, const Eigen::VectorXd& angles) {
  if (angles.size() != states.cols()) throw ShapeError("one angle per state column required");
  for (Eigen::Index j = 0; j < states.cols(); ++j)
    if (angles[j] != 0.0)
      kernels::apply_rotation_all(states.col(j), n_spins_, rotation_matrix(axis, angles[j]), exec_);
}

double SpinSystem::coherence(const Eigen::Ref<const VectorC>& state) const {
  return center_coherence(state, n_spins_, center_);
}

Eigen::VectorXd SpinSystem::coherences(const MatrixC& states) const {
  Eigen::VectorXd out(states.cols());
  for (Eigen::Index j = 0; j < states.cols(); ++j) out[j] = coherence(states.col(j));
  return out;
}

double run_ramsey(SpinSystem& sys, const VectorC& state0, double tau) {
  return run_sequence(sys, state0, Ramsey{tau}, {tau}).front();
}

double run_spin_echo(SpinSystem& sys, const VectorC& state0, double tau) {
  return run_sequence(sys, state0, SpinEcho{tau}, {tau}).front();
}

CoherenceTrace run_eps_cpmg(SpinSystem& sys, const VectorC& state0, const EpsCpmg& spec) {
  validate(spec);
  return run_blocks(sys, state0, cpmg_block(spec), spec.k, period(spec), spec.mode);
}

CoherenceTrace run_wahuha_echo(SpinSystem& sys, const VectorC& state0, const WahuhaEcho& spec) {
  validate(spec);
  return run_blocks(sys, state0, wahuha_block(spec), spec.k, period(spec), spec.mode);
}

CoherenceTrace run_spin_lock(SpinSystem& sys, const VectorC& state0, const SpinLock& spec,
                             const std::vector<double>& sample_times) {
  validate(spec);
  for (double t : sample_times)
    if (!(t >= 0.0)) throw SequenceError("sample times must be >= 0");
  MatrixC states = replicate(state0, static_cast<Eigen::Index>(sample_times.size()));
  const Propagator& lock = spec.omega_y == 0.0 ? sys.free() : sys.driven(Vec3::UnitY(), spec.omega_y);
  lock.apply(states, as_vector(sample_times), sys.exec());
  const Eigen::VectorXd c = sys.coherences(states);
  return {sample_times, std::vector<double>(c.begin(), c.end())};
}

std::vector<double> DtcSeries::contrast() const {
  std::vector<double> out(signed_values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(signed_values[i]);
  return out;
}

std::vector<DtcSeries> run_dtc_batch(SpinSystem& sys, const VectorC& state0, double tau, int k,
                                     double omega_y, const std::vector<double>& epsilons) {
  for (double e : epsilons) validate(DtcFloquet{tau, e, k, pi / 2, omega_y});
  const auto m = static_cast<Eigen::Index>(epsilons.size());
  MatrixC states = replicate(state0, m);
  Eigen::VectorXd angles(m);
  for (Eigen::Index j = 0; j < m; ++j) angles[j] = pi + epsilons[j];
  const Propagator* lock = nullptr;
  if (tau > 0.0) lock = omega_y == 0.0 ? &sys.free() : &sys.driven(Vec3::UnitY(), omega_y);
  std::vector<DtcSeries> out(static_cast<std::size_t>(m));
  for (auto& s : out) s.signed_values.reserve(static_cast<std::size_t>(k));
  for (int cycle = 1; cycle <= k; ++cycle) {
    if (lock) lock->apply(states, tau, sys.exec());
    sys.pulse(states, Vec3::UnitX(), angles);
    const Eigen::VectorXd c = sys.coherences(states);
    for (Eigen::Index j = 0; j < m; ++j) out[j].signed_values.push_back(c[j]);
  }
  return out;
}

DtcSeries run_dtc_floquet(SpinSystem& sys, const VectorC& state0, const DtcFloquet& spec) {
  validate(spec);
  return run_dtc_batch(sys, state0, spec.tau, spec.k, spec.omega_y, {spec.epsilon}).front();
}

std::vector<double> sequence_times(const SequenceSpec& spec, const std::vector<double>& grid) {
  return std::visit(
      overloaded{
          [&](const EpsCpmg& s) {
            std::vector<double> t;
            for (int i = 0; i <= s.k; ++i) t.push_back(i * period(spec));
            return t;
          },
          [&](const WahuhaEcho& s) {
            std::vector<double> t;
            for (int i = 0; i <= s.k; ++i) t.push_back(i * period(spec));
            return t;
          },
          [&](const DtcFloquet& s) {
            std::vector<double> t;
            for (int i = 1; i <= s.k; ++i) t.push_back(i * s.tau);
            return t;
          },
          [&](const SpinLock& s) {
            if (!grid.empty()) return grid;
            std::vector<double> t;
            for (int i = 0; i <= 40; ++i) t.push_back(s.T * i / 40.0);
            return t;
          },
          [&](const auto&) { return grid; },
      },
      spec);
}

std::vector<double> run_sequence(SpinSystem& sys, const VectorC& state0, const SequenceSpec& spec,
                                 const std::vector<double>& grid) {
  validate(spec);
  const std::vector<double> times = sequence_times(spec, grid);
  auto to_std = [](const Eigen::VectorXd& v) { return std::vector<double>(v.begin(), v.end()); };
  return std::visit(
      overloaded{
          [&](const Ramsey&) {
            for (double t : times) require(t >= 0.0, "tau must be >= 0");
            MatrixC states = replicate(state0, static_cast<Eigen::Index>(times.size()));
            sys.free().apply(states, as_vector(times), sys.exec());
            return to_std(sys.coherences(states));
          },
          [&](const SpinEcho&) {
            for (double t : times) require(t >= 0.0, "tau must be >= 0");
            MatrixC states = replicate(state0, static_cast<Eigen::Index>(times.size()));
            const Eigen::VectorXd half = 0.5 * as_vector(times);
            sys.free().apply(states, half, sys.exec());
            sys.pulse(states, Vec3::UnitY(), pi, PulseMode::ideal, 0.0);
            sys.free().apply(states, half, sys.exec());
            return to_std(sys.coherences(states));
          },
          [&](const EpsCpmg& s) { return run_eps_cpmg(sys, state0, s).values; },
          [&](const WahuhaEcho& s) { return run_wahuha_echo(sys, state0, s).values; },
          [&](const SpinLock& s) { return run_spin_lock(sys, state0, s, times).values; },
          [&](const DtcFloquet& s) { return run_dtc_floquet(sys, state0, s).signed_values; },
      },
      spec);
}

AnalyzerFit emulate_analyzer_sweep(const Eigen::Ref<const VectorC>& state, std::size_t n_spins,
                                   std::size_t center, const std::vector<double>& theta_grid) {
  if (theta_grid.size() < 8) throw InvalidArgument("analyzer sweep needs at least 8 phases");
  const Mat2 rho = kernels::reduced_density(state, n_spins, center, Exec::serial);
  const auto m = static_cast<Eigen::Index>(theta_grid.size());
  Eigen::MatrixXd design(m, 3);
  Eigen::VectorXd signal(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double th = theta_grid[i];
    const Mat2 r = rotation_matrix(Vec3(std::cos(th), std::sin(th), 0.0), pi / 2);
    const Mat2 out = r * rho * r.adjoint();
    signal[i] = out(1, 1).real();
    design.row(i) << std::cos(th), std::sin(th), 1.0;
  }
  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(signal);
  AnalyzerFit fit;
  fit.C_offset = coef[2];
  if (!(std::abs(fit.C_offset) > 1e-12)) throw FitError("degenerate analyzer fit (C_offset ~ 0)");
  fit.C_amp = std::hypot(coef[0], coef[1]);
  fit.in_phase = coef[0] / fit.C_offset;
  fit.coherence = fit.C_amp / fit.C_offset;
  fit.residual = std::sqrt((design * coef - signal).squaredNorm() / static_cast<double>(m));
  return fit;
}

double dtc_contrast(const Eigen::Ref<const VectorC>& state, std::size_t n_spins,
                    std::size_t center) {
  const Mat2 rho = kernels::reduced_density(state, n_spins, center, Exec::serial);
  auto signal = [&](const Vec3& axis) {
    const Mat2 r = rotation_matrix(axis, pi / 2);
    return (r * rho * r.adjoint())(1, 1).real();
  };
  const double c_plus = signal(Vec3::UnitX());
  const double c_minus = signal(-Vec3::UnitX());
  return std::abs(c_plus - c_minus) / std::abs(c_plus + c_minus);
}

}  // namespace xysim
