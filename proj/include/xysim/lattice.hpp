#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "xysim/rng.hpp"

namespace xysim {

using Vec3 = Eigen::Vector3d;

/// Tetragonal cell with 4 rare-earth (Y) sites. Lengths in nm.
struct CrystalLattice {
  double a = 0.7119;
  double c = 0.6290;
  // Zircon-structure Y positions in fractional coordinates.
  std::array<Vec3, 4> basis{Vec3{0.0, 0.75, 0.125}, Vec3{0.5, 0.75, 0.375},
                            Vec3{0.0, 0.25, 0.625}, Vec3{0.5, 0.25, 0.875}};

  void validate() const;
  /// Y sites per nm^3.
  double site_density() const { return 4.0 / (a * a * c); }
  Vec3 cartesian(const Vec3& frac) const { return {frac.x() * a, frac.y() * a, frac.z() * c}; }
};

/// Concentration-derived scales.
struct DensitySpec {
  double ppm;
  double mean_nn_distance;  // nm
  double mean_J;            // rad/us
};

/// Mean inter-spin distance <r> = 0.629 / ((4 n_s)^(1/3) * 1e-2) nm.
double mean_distance_from_ppm(double ppm);

/// J = 2*pi*480 MHz nm^3 / <r>^3 as an angular frequency.
double mean_J_from_ppm(double ppm);

DensitySpec density_from_ppm(double ppm);

/// All sites inside the axis-aligned half-open box of size `extent` centered
/// at `center`, ordered lexicographically by cell index then basis index.
/// Throws ConfigurationError if the box holds no site.
std::vector<Vec3> generate_sites(const CrystalLattice& lattice, const Vec3& extent,
                                 const Vec3& center = Vec3::Zero());

struct SpinConfiguration {
  std::vector<Vec3> positions;
  std::size_t center_index = 0;
  Vec3 region_extent = Vec3::Zero();

  std::size_t size() const { return positions.size(); }
};

/// Pre-generated cubic doping region for a given (n_s, N); reusable across
/// realizations. The lattice is centered on a Y site that is always occupied.
class DopingRegion {
 public:
  DopingRegion(const CrystalLattice& lattice, double ppm, std::size_t n_spins);

  const std::vector<Vec3>& sites() const { return sites_; }
  std::size_t center_site() const { return center_site_; }
  double side() const { return side_; }
  std::size_t n_spins() const { return n_spins_; }
  double ppm() const { return ppm_; }

  /// Readout spin at the center plus N-1 sites drawn uniformly without replacement.
  SpinConfiguration sample(Rng& rng) const;

 private:
  std::vector<Vec3> sites_;
  std::size_t center_site_ = 0;
  double side_ = 0.0;
  double ppm_ = 0.0;
  std::size_t n_spins_ = 0;
};

SpinConfiguration sample_configuration(Rng& rng, double ppm, std::size_t n_spins,
                                       const CrystalLattice& lattice = {});

/// Distance from the readout spin to its nearest neighbor in the configuration.
double center_nearest_neighbor_distance(const SpinConfiguration& config);

}  // namespace xysim
