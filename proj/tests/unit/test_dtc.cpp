#include <doctest.h>

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "xysim/dtc.hpp"
#include "xysim/errors.hpp"

using namespace xysim;
using namespace xysim::test;

namespace {

// Intensity rows built from a known boundary eps*(tau) = b0 + b1 tau.
PhaseDiagram synthetic(double b0, double b1, const std::vector<double>& taus,
                       const std::vector<double>& eps) {
  PhaseDiagram d;
  d.taus = taus;
  d.epsilons = eps;
  d.threshold = 0.4;
  for (double t : taus) {
    std::vector<double> row;
    const double star = b0 + b1 * t;
    // linear in |eps| so interpolation is exact: 0.4 at |eps| = star
    for (double e : eps) row.push_back(std::max(0.0, 1.0 - 0.6 * std::abs(e) / star));
    d.intensity.push_back(row);
  }
  return d;
}

}  // namespace

TEST_SUITE("dtc") {
  TEST_CASE("period-doubled series puts all weight at one half") {
    std::vector<double> s;
    for (int k = 1; k <= 60; ++k) s.push_back(k % 2 ? -1.0 : 1.0);
    const auto sp = dft_spectrum(s);
    CHECK(subharmonic_intensity(sp) == doctest::Approx(1.0));
    CHECK(sp.intensity[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sp.nu.size() == 60);
  }

  TEST_CASE("constant series sits at zero frequency") {
    const std::vector<double> s(40, 0.7);
    const auto sp = dft_spectrum(s);
    CHECK(sp.intensity[0] == doctest::Approx(0.49));
    CHECK(subharmonic_intensity(sp) < 1e-25);
  }

  TEST_CASE("slow beat splits the subharmonic peak") {
    const int K = 200;
    const double eps = 0.1;
    std::vector<double> s;
    for (int k = 1; k <= K; ++k) s.push_back(std::cos(pi * k) * std::cos(eps * k));
    std::vector<double> nu;
    for (int j = 0; j <= 2000; ++j) nu.push_back(0.4 + 0.2 * j / 2000.0);
    const auto sp = dft_spectrum(s, nu);
    const auto peak = std::max_element(sp.intensity.begin(), sp.intensity.end()) - sp.intensity.begin();
    CHECK(std::abs(std::abs(sp.nu[peak] - 0.5) - eps / two_pi) < 2e-4);
    CHECK(subharmonic_intensity(dft_spectrum(s)) < 0.01);
  }

  TEST_CASE("Parseval on the native grid") {
    Rng r(8);
    std::vector<double> s;
    for (int k = 0; k < 32; ++k) s.push_back(r.normal());
    const auto sp = dft_spectrum(s);
    const double energy = std::inner_product(s.begin(), s.end(), s.begin(), 0.0);
    const double power = std::accumulate(sp.intensity.begin(), sp.intensity.end(), 0.0);
    // sum_j |S(j/K)|^2 = (1/K) sum_k s_k^2
    CHECK(power == doctest::Approx(energy / 32).epsilon(1e-10));
  }

  TEST_CASE("shift by two cycles keeps the subharmonic intensity") {
    Rng r(5);
    std::vector<double> s;
    for (int k = 0; k < 50; ++k) s.push_back(r.normal());
    std::vector<double> shifted(s.begin() + 2, s.end());
    shifted.push_back(s[0]);
    shifted.push_back(s[1]);
    CHECK(subharmonic_intensity(dft_spectrum(s)) == doctest::Approx(subharmonic_intensity(dft_spectrum(shifted))));
  }

  TEST_CASE("one half must lie on the grid") {
    const std::vector<double> s(9, 1.0);
    CHECK_THROWS_AS(subharmonic_intensity(dft_spectrum(s)), InvalidArgument);
    CHECK_THROWS_AS(dft_spectrum(std::vector<double>{}), InvalidArgument);
  }

  TEST_CASE("boundary from a synthetic linear phase edge") {
    const auto taus = linspace(0.0, 2.0, 9);
    const auto eps = linspace(-0.3, 0.3, 61);
    auto d = synthetic(0.05, 0.1, taus, eps);
    compute_boundary(d);
    for (std::size_t i = 0; i < taus.size(); ++i) CHECK(d.boundary[i] == doctest::Approx(0.05 + 0.1 * taus[i]).epsilon(0.02));
    CHECK(boundary_slope(d) == doctest::Approx(0.1).epsilon(0.02));
    CHECK(subharmonic_area(d) > 0.0);
    CHECK(subharmonic_area(d) < 1.0);
    for (bool re : d.reentrant) CHECK_FALSE(re);
  }

  TEST_CASE("boundary edge cases") {
    const auto taus = linspace(0.0, 2.0, 5);
    const auto eps = linspace(0.0, 0.3, 31);
    auto d = synthetic(0.05, 0.1, taus, eps);
    d.threshold = 1.0 + 1e-9;
    compute_boundary(d);
    for (double b : d.boundary) CHECK(std::isnan(b));
    CHECK(subharmonic_area(d) == 0.0);
    CHECK_THROWS_AS(boundary_slope(d), InvalidArgument);

    auto two = synthetic(0.05, 0.1, {0.0, 1.0}, eps);
    compute_boundary(two);
    CHECK_THROWS_AS(boundary_slope(two), InvalidArgument);

    // intensity dips below threshold and recovers further out
    auto re = synthetic(0.05, 0.1, {0.0}, eps);
    re.intensity[0][25] = 0.9;
    compute_boundary(re);
    CHECK(re.boundary[0] == doctest::Approx(0.05));
    CHECK(re.reentrant[0]);
  }

  TEST_CASE("innermost side wins") {
    PhaseDiagram d;
    d.taus = {0.0};
    d.epsilons = {-0.2, -0.1, 0.0, 0.1, 0.2};
    d.intensity = {{0.0, 0.0, 1.0, 0.8, 0.0}};
    compute_boundary(d);
    CHECK(d.boundary[0] == doctest::Approx(0.1 * 0.6));
  }

  TEST_CASE("phase diagram from a small ensemble") {
    EnsembleSpec s;
    s.n_spins = 4;
    s.n_realizations = 6;
    PhaseDiagramOptions o;
    o.k_cycles = 20;
    const std::vector<double> taus{0.0, 0.6283185307179586};
    const std::vector<double> eps{0.0, 0.05 * pi, 0.5 * pi};
    const auto a = build_phase_diagram(s, taus, eps, o, 1);
    const auto b = build_phase_diagram(s, taus, eps, o, 2);
    CHECK(a.intensity == b.intensity);
    CHECK(a.intensity[0][0] == doctest::Approx(1.0));
    CHECK(a.intensity[0][2] < 0.05);
    CHECK(a.intensity[1][0] > a.intensity[1][2]);
    o.k_cycles = 21;
    CHECK_THROWS_AS(build_phase_diagram(s, taus, eps, o, 1), InvalidArgument);
    o.k_cycles = 20;
    CHECK_THROWS_AS(build_phase_diagram(s, {}, eps, o, 1), InvalidArgument);
  }
}
