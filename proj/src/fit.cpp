#include "xysim/fit.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <unsupported/Eigen/LevenbergMarquardt>

#include "xysim/errors.hpp"

namespace xysim {

namespace {

// Parameters: A, log T and (stretched only) beta.
struct DecayFunctor : Eigen::DenseFunctor<double> {
  const Eigen::VectorXd& t;
  const Eigen::VectorXd& y;
  bool stretched;

  DecayFunctor(const Eigen::VectorXd& t_, const Eigen::VectorXd& y_, bool s)
      : Eigen::DenseFunctor<double>(s ? 3 : 2, static_cast<int>(t_.size())), t(t_), y(y_),
        stretched(s) {}

  double beta(const InputType& p) const { return stretched ? p[2] : 1.0; }

  int operator()(const InputType& p, ValueType& f) const {
    const double T = std::exp(p[1]);
    for (Eigen::Index i = 0; i < t.size(); ++i)
      f[i] = p[0] * std::exp(-std::pow(t[i] / T, beta(p))) - y[i];
    return 0;
  }

  int df(const InputType& p, JacobianType& jac) const {
    const double T = std::exp(p[1]);
    const double b = beta(p);
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const double u = t[i] > 0.0 ? std::pow(t[i] / T, b) : 0.0;
      const double e = std::exp(-u);
      jac(i, 0) = e;
      jac(i, 1) = p[0] * e * b * u;
      if (stretched) jac(i, 2) = t[i] > 0.0 ? -p[0] * e * u * std::log(t[i] / T) : 0.0;
    }
    return 0;
  }
};

double initial_time_constant(const std::vector<double>& t, const std::vector<double>& y,
                             double A) {
  const double target = A / std::exp(1.0);
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (y[i] <= target && y[i - 1] > target) {
      const double f = (y[i - 1] - target) / (y[i - 1] - y[i]);
      return t[i - 1] + f * (t[i] - t[i - 1]);
    }
  }
  // No crossing in range: log-linear slope over the positive points.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (y[i] <= 0.0) continue;
    const double ly = std::log(y[i] / A);
    sx += t[i];
    sy += ly;
    sxx += t[i] * t[i];
    sxy += t[i] * ly;
    ++n;
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n >= 2 && denom > 0) ? (n * sxy - sx * sy) / denom : 0.0;
  if (!(slope < 0.0)) throw FitError("data does not decay; no 1/e time can be fitted");
  return -1.0 / slope;
}

}  // namespace

std::string to_string(DecayModel m) {
  return m == DecayModel::exponential ? "exponential" : "stretched";
}

DecayModel decay_model_from_string(const std::string& s) {
  if (s == "exponential") return DecayModel::exponential;
  if (s == "stretched") return DecayModel::stretched;
  throw InvalidArgument("unknown decay model '" + s + "'");
}

FitResult fit_decay(const std::vector<double>& times, const std::vector<double>& values,
                    DecayModel model) {
  if (times.size() != values.size()) throw ShapeError("times/values length mismatch");
  if (times.size() < 4) throw FitError("need at least 4 points to fit a decay");
  if (!(values.front() > 0.0)) throw FitError("initial value must be positive");
  const double A0 = *std::max_element(values.begin(), values.begin() + std::min<std::size_t>(3, values.size()));
  const double T0 = initial_time_constant(times, values, A0);

  const Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(times.data(), times.size());
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
  const bool stretched = model == DecayModel::stretched;
  DecayFunctor functor(t, y, stretched);
  Eigen::VectorXd p(stretched ? 3 : 2);
  p[0] = A0;
  p[1] = std::log(T0);
  if (stretched) p[2] = 1.0;
  Eigen::LevenbergMarquardt<DecayFunctor> lm(functor);
  lm.setMaxfev(2000);
  lm.minimize(p);

  FitResult r;
  r.model = model;
  r.amplitude = p[0];
  r.T_1e = std::exp(p[1]);
  r.beta = stretched ? p[2] : 1.0;
  Eigen::VectorXd f(t.size());
  functor(p, f);
  r.residual = std::sqrt(f.squaredNorm() / static_cast<double>(t.size()));
  if (!std::isfinite(r.T_1e) || !(r.T_1e > 0.0) || !(r.amplitude > 0.0))
    throw FitError("decay fit did not converge");
  if (r.T_1e > 1e3 * times.back()) throw FitError("fitted decay time far beyond the data; non-decaying");
  if (!(r.beta > 0.0 && r.beta <= 3.0)) throw FitError("stretch exponent outside (0, 3]");
  return r;
}

FitResult fit_decay(const TraceStats& trace, DecayModel model) {
  return fit_decay(trace.times, trace.mean, model);
}

EarlySlope fit_early_slope(const std::vector<double>& times, const std::vector<double>& values,
                           double window) {
  if (times.size() != values.size()) throw ShapeError("times/values length mismatch");
  std::vector<std::size_t> use;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] >= 0.0 && times[i] <= window * (1.0 + 1e-12)) use.push_back(i);
  if (use.size() < 3) throw FitError("need at least 3 points inside the early-time window");
  Eigen::MatrixXd a(use.size(), 2);
  Eigen::VectorXd b(use.size());
  for (std::size_t r = 0; r < use.size(); ++r) {
    const double t = times[use[r]];
    a(r, 0) = 1.0;
    a(r, 1) = t * t;
    b[r] = values[use[r]];
  }
  const Eigen::Vector2d c = a.colPivHouseholderQr().solve(b);
  return {-2.0 * c[1], c[0], use.size()};
}

double early_window(double mean_J) {
  if (!(mean_J > 0.0)) throw InvalidArgument("mean coupling must be positive");
  return std::min(1.0, 0.3 / mean_J);
}

}  // namespace xysim
