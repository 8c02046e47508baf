#pragma once

#include <string>
#include <vector>

#include "xysim/stats.hpp"

namespace xysim {

enum class DecayModel { exponential, stretched };

std::string to_string(DecayModel m);
DecayModel decay_model_from_string(const std::string& s);

struct FitResult {
  DecayModel model = DecayModel::exponential;
  double T_1e = 0.0;  // us; value falls to amplitude/e
  double beta = 1.0;
  double amplitude = 0.0;
  double residual = 0.0;  // rms
};

/// Least squares of A exp(-(t/T)^beta); beta fixed to 1 for the exponential model.
/// Throws FitError for non-decaying data or a stretch exponent outside (0, 3].
FitResult fit_decay(const std::vector<double>& times, const std::vector<double>& values,
                    DecayModel model);
FitResult fit_decay(const TraceStats& trace, DecayModel model);

struct EarlySlope {
  double s = 0.0;          // P ~ a - (s/2) tau^2
  double intercept = 0.0;  // a
  std::size_t points = 0;
};

/// Quadratic early-time coefficient over tau in [0, window].
EarlySlope fit_early_slope(const std::vector<double>& times, const std::vector<double>& values,
                           double window);

/// Default window min(1 us, 0.3 / J).
double early_window(double mean_J);

}  // namespace xysim
