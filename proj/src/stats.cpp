#include "xysim/stats.hpp"

#include <cmath>
#include <limits>

#include "xysim/errors.hpp"

namespace xysim {

TraceStats aggregate(const std::vector<double>& times,
                     const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InvalidArgument("no realizations to aggregate");
  const std::size_t m = times.size();
  for (const auto& r : rows)
    if (r.size() != m) throw ShapeError("realization trace length mismatch");
  const auto n = static_cast<double>(rows.size());
  TraceStats out;
  out.times = times;
  out.n_realizations = rows.size();
  out.mean.assign(m, 0.0);
  out.stderr_.assign(m, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t j = 0; j < m; ++j) {
    double sum = 0.0;
    for (const auto& r : rows) sum += r[j];
    const double mu = sum / n;
    out.mean[j] = mu;
    if (rows.size() > 1) {
      double ss = 0.0;
      for (const auto& r : rows) ss += (r[j] - mu) * (r[j] - mu);
      out.stderr_[j] = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
  }
  return out;
}

}  // namespace xysim
