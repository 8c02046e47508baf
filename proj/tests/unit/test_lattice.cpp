#include <doctest.h>

#include <cmath>
#include <set>

#include "xysim/errors.hpp"
#include "xysim/lattice.hpp"
#include "xysim/units.hpp"

using namespace xysim;

namespace {

// Same cube, points placed uniformly in space rather than on lattice sites.
double continuum_nn(double ppm, std::size_t n, int samples) {
  const CrystalLattice lat;
  const double side = std::cbrt(static_cast<double>(n) / (ppm * 1e-6 * lat.site_density()));
  Rng rng(123);
  double acc = 0.0;
  for (int s = 0; s < samples; ++s) {
    double best = 1e300;
    for (std::size_t k = 1; k < n; ++k) {
      const Vec3 p{side * (rng.uniform_open() - 0.5), side * (rng.uniform_open() - 0.5),
                   side * (rng.uniform_open() - 0.5)};
      best = std::min(best, p.norm());
    }
    acc += best;
  }
  return acc / samples;
}

}  // namespace

TEST_SUITE("lattice") {
  TEST_CASE("mean spacing from concentration") {
    CHECK(mean_distance_from_ppm(86) == doctest::Approx(8.98).epsilon(2e-3));
    CHECK(mean_distance_from_ppm(46) == doctest::Approx(11.05).epsilon(2e-3));
    CHECK(mean_distance_from_ppm(2.5e5) == doctest::Approx(0.629));  // (4 n)^(1/3) = 100
    CHECK_THROWS_AS(mean_distance_from_ppm(0.0), InvalidArgument);
    CHECK_THROWS_AS(mean_J_from_ppm(-1.0), InvalidArgument);
  }

  TEST_CASE("mean coupling anchors and linearity") {
    CHECK(to_mhz(mean_J_from_ppm(46)) == doctest::Approx(0.355).epsilon(0.03));
    CHECK(to_mhz(mean_J_from_ppm(25)) == doctest::Approx(0.193).epsilon(0.03));
    for (double n : {3.0, 25.0, 410.0}) CHECK(mean_J_from_ppm(2 * n) == doctest::Approx(2 * mean_J_from_ppm(n)));
    const auto d = density_from_ppm(46);
    CHECK(d.mean_nn_distance == mean_distance_from_ppm(46));
    CHECK(d.mean_J == mean_J_from_ppm(46));
  }

  TEST_CASE("site counts per cell") {
    const CrystalLattice L;
    CHECK(generate_sites(L, {L.a, L.a, L.c}).size() == 4);
    CHECK(generate_sites(L, {2 * L.a, 2 * L.a, 2 * L.c}).size() == 32);
    CHECK_THROWS_AS(generate_sites(L, {0.01, 0.01, 0.01}, Vec3{0.3, 0.3, 0.3}), ConfigurationError);
    CHECK_THROWS_AS(generate_sites(L, {-1.0, 1.0, 1.0}), InvalidArgument);
  }

  TEST_CASE("site density converges") {
    const CrystalLattice L;
    CHECK(L.site_density() == doctest::Approx(12.5478).epsilon(1e-4));
    const Vec3 ext{12 * L.a, 12 * L.a, 12 * L.c};
    const auto sites = generate_sites(L, ext, Vec3{0.1, 0.2, 0.05});
    const double rho = sites.size() / (ext.x() * ext.y() * ext.z());
    CHECK(std::abs(rho / L.site_density() - 1.0) < 0.01);
  }

  TEST_CASE("site order is deterministic") {
    const CrystalLattice L;
    const Vec3 ext{3 * L.a, 3 * L.a, 3 * L.c};
    CHECK(generate_sites(L, ext) == generate_sites(L, ext));
  }

  TEST_CASE("configurations are reproducible and well formed") {
    Rng a(42), b(42);
    const auto x = sample_configuration(a, 46, 9);
    const auto y = sample_configuration(b, 46, 9);
    CHECK(x.positions == y.positions);
    CHECK(x.size() == 9);
    std::set<std::tuple<double, double, double>> seen;
    for (const auto& p : x.positions) seen.insert({p.x(), p.y(), p.z()});
    CHECK(seen.size() == 9);

    Rng c(7);
    const auto two = sample_configuration(c, 25, 2);
    CHECK(two.size() == 2);
    CHECK(two.center_index < 2);
    CHECK(two.positions[0] != two.positions[1]);
    Rng d(1);
    CHECK_THROWS_AS(sample_configuration(d, 46, 1), InvalidArgument);
  }

  TEST_CASE("readout spin is always the region center") {
    const DopingRegion region(CrystalLattice{}, 46, 9);
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
      const auto cfg = region.sample(rng);
      CHECK(cfg.positions[cfg.center_index] == region.sites()[region.center_site()]);
    }
  }

  TEST_CASE("closest approach is the minimum Y-Y distance") {
    const CrystalLattice L;
    const double dmin = std::hypot(L.a / 2, L.c / 4);
    Rng rng(5);
    const DopingRegion region(L, 2e5, 10);
    double best = 1e300;
    for (int r = 0; r < 300; ++r) {
      const auto cfg = region.sample(rng);
      for (std::size_t i = 0; i < cfg.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
          const double dd = (cfg.positions[i] - cfg.positions[j]).norm();
          CHECK(dd > 0.0);
          best = std::min(best, dd);
        }
    }
    CHECK(best == doctest::Approx(dmin).epsilon(1e-9));
  }

  TEST_CASE("center nearest-neighbour distance matches the continuum") {
    Rng rng(11);
    const DopingRegion region(CrystalLattice{}, 46, 9);
    double acc = 0.0;
    const int R = 4000;
    for (int r = 0; r < R; ++r) acc += center_nearest_neighbor_distance(region.sample(rng));
    const double nn = acc / R;
    CHECK(nn == doctest::Approx(continuum_nn(46, 9, 20000)).epsilon(0.05));
    CHECK(nn < mean_distance_from_ppm(46));
  }
}
