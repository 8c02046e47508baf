#include "xysim/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "xysim/errors.hpp"
#include "xysim/units.hpp"

namespace xysim {

namespace {
constexpr double kDipolarNm3 = 480.0;  // MHz nm^3, calibrated prefactor
}

void CrystalLattice::validate() const {
  if (!(a > 0.0) || !(c > 0.0)) throw InvalidArgument("lattice constants must be positive");
  for (const auto& f : basis) {
    for (int k = 0; k < 3; ++k) {
      if (!(f[k] >= 0.0 && f[k] < 1.0))
        throw InvalidArgument("basis fractional coordinates must lie in [0,1)");
    }
  }
}

double mean_distance_from_ppm(double ppm) {
  if (!(ppm > 0.0)) throw InvalidArgument("concentration must be positive (ppm)");
  return 0.629 / (std::cbrt(4.0 * ppm) * 1e-2);
}

double mean_J_from_ppm(double ppm) {
  const double r = mean_distance_from_ppm(ppm);
  return mhz(kDipolarNm3) / (r * r * r);
}

DensitySpec density_from_ppm(double ppm) {
  return {ppm, mean_distance_from_ppm(ppm), mean_J_from_ppm(ppm)};
}

std::vector<Vec3> generate_sites(const CrystalLattice& lattice, const Vec3& extent,
                                 const Vec3& center) {
  lattice.validate();
  if (!(extent.array() > 0.0).all()) throw InvalidArgument("region extent must be positive");

  const Vec3 cell{lattice.a, lattice.a, lattice.c};
  // Work in fractional units so that box edges hit cell boundaries exactly.
  const Vec3 lo = (center.array() - 0.5 * extent.array()) / cell.array();
  const Vec3 hi = (center.array() + 0.5 * extent.array()) / cell.array();

  std::array<long, 3> first{}, last{};
  for (int k = 0; k < 3; ++k) {
    first[k] = static_cast<long>(std::floor(lo[k])) - 1;
    last[k] = static_cast<long>(std::ceil(hi[k]));
  }

  std::vector<Vec3> sites;
  for (long i = first[0]; i <= last[0]; ++i) {
    for (long j = first[1]; j <= last[1]; ++j) {
      for (long k = first[2]; k <= last[2]; ++k) {
        for (const auto& f : lattice.basis) {
          const Vec3 frac{static_cast<double>(i) + f.x(), static_cast<double>(j) + f.y(),
                          static_cast<double>(k) + f.z()};
          if ((frac.array() >= lo.array()).all() && (frac.array() < hi.array()).all())
            sites.push_back(lattice.cartesian(frac));
        }
      }
    }
  }
  if (sites.empty()) throw ConfigurationError("region too small to contain any lattice site");
  return sites;
}

DopingRegion::DopingRegion(const CrystalLattice& lattice, double ppm, std::size_t n_spins)
    : ppm_(ppm), n_spins_(n_spins) {
  if (!(ppm > 0.0)) throw InvalidArgument("concentration must be positive (ppm)");
  if (n_spins < 2) throw InvalidArgument("need at least 2 spins");

  const double number_density = ppm * 1e-6 * lattice.site_density();
  side_ = std::cbrt(static_cast<double>(n_spins) / number_density);
  const Vec3 origin = lattice.cartesian(lattice.basis[0]);
  sites_ = generate_sites(lattice, Vec3::Constant(side_), origin);
  if (sites_.size() < n_spins)
    throw ConfigurationError("region holds " + std::to_string(sites_.size()) +
                             " sites, fewer than N = " + std::to_string(n_spins));

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < sites_.size(); ++s) {
    const double d = (sites_[s] - origin).squaredNorm();
    if (d < best) {
      best = d;
      center_site_ = s;
    }
  }
}

SpinConfiguration DopingRegion::sample(Rng& rng) const {
  const std::size_t m = sites_.size();
  std::vector<std::size_t> chosen;
  chosen.reserve(n_spins_);
  chosen.push_back(center_site_);

  if (m <= 4 * n_spins_) {
    // Dense case: partial Fisher-Yates over the non-center sites.
    std::vector<std::size_t> pool(m);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    std::swap(pool[center_site_], pool[m - 1]);
    for (std::size_t t = 0; t + 1 < n_spins_; ++t) {
      const std::size_t r = t + rng.below(m - 1 - t);
      std::swap(pool[t], pool[r]);
      chosen.push_back(pool[t]);
    }
  } else {
    while (chosen.size() < n_spins_) {
      const std::size_t r = rng.below(m);
      if (std::find(chosen.begin(), chosen.end(), r) == chosen.end()) chosen.push_back(r);
    }
  }

  SpinConfiguration config;
  config.center_index = 0;
  config.region_extent = Vec3::Constant(side_);
  config.positions.reserve(n_spins_);
  for (std::size_t s : chosen) config.positions.push_back(sites_[s]);
  return config;
}

SpinConfiguration sample_configuration(Rng& rng, double ppm, std::size_t n_spins,
                                       const CrystalLattice& lattice) {
  return DopingRegion(lattice, ppm, n_spins).sample(rng);
}

double center_nearest_neighbor_distance(const SpinConfiguration& config) {
  const Vec3& c = config.positions.at(config.center_index);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (i == config.center_index) continue;
    best = std::min(best, (config.positions[i] - c).norm());
  }
  return best;
}

}  // namespace xysim
