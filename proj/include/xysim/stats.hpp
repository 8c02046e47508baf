#pragma once

#include <cstddef>
#include <vector>

namespace xysim {

/// Ensemble mean and standard error per time point. With one realization the
/// standard errors are NaN (undefined).
struct TraceStats {
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::size_t n_realizations = 0;
};

/// Fixed-order reduction of per-realization rows (all of equal length).
TraceStats aggregate(const std::vector<double>& times,
                     const std::vector<std::vector<double>>& rows);

}  // namespace xysim
