#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "xysim/dynamics.hpp"
#include "xysim/errors.hpp"

using namespace xysim;
using namespace xysim::test;

TEST_SUITE("dynamics") {
  TEST_CASE("zero time is the identity") {
    const auto in = random_instance(1, 4);
    const Propagator p(in.h.H_total);
    VectorC psi = random_state(4, 2);
    const VectorC ref = psi;
    evolve_free(psi, p, 0.0);
    CHECK((psi - ref).norm() < 1e-14);
  }

  TEST_CASE("Larmor precession by pi flips Sy") {
    const double d = 1.3;
    MatrixR h(2, 2);
    h << -d / 2, 0, 0, d / 2;
    const Propagator p(h);
    Rng r(0);
    VectorC psi = prepare_initial(r, 1, pi / 2, 1.0);
    CHECK(bloch_vector(psi, 1, 0).y() == doctest::Approx(0.5));
    evolve_free(psi, p, pi / d);
    CHECK(bloch_vector(psi, 1, 0).y() == doctest::Approx(-0.5).epsilon(1e-12));
  }

  TEST_CASE("energy and total Sz are conserved") {
    const auto in = random_instance(5, 6);
    const Propagator p(in.h.H_total), px(in.h.H_exchange);
    const MatrixC H = in.h.H_total.cast<cplx>(), Sz = total_spin(6, Axis::z);
    VectorC psi = random_state(6, 8);
    const double e0 = psi.dot(H * psi).real();
    VectorC phi = psi;
    const double s0 = phi.dot(Sz * phi).real();
    for (double dt : {0.1, 3.0, 17.0}) {
      evolve_free(psi, p, dt);
      CHECK(std::abs(psi.dot(H * psi).real() - e0) < 1e-10);
      evolve_free(phi, px, dt);
      CHECK(std::abs(phi.dot(Sz * phi).real() - s0) < 1e-10);
    }
  }

  TEST_CASE("evolution is linear") {
    const auto in = random_instance(6, 5);
    const Propagator p(in.h.H_total);
    const VectorC a = random_state(5, 1), b = random_state(5, 2);
    const cplx al(0.3, -1.1), be(2.0, 0.5);
    VectorC lhs = al * a + be * b, ea = a, eb = b;
    evolve_free(lhs, p, 1.7);
    evolve_free(ea, p, 1.7);
    evolve_free(eb, p, 1.7);
    CHECK((lhs - (al * ea + be * eb)).norm() < 1e-10);
  }

  TEST_CASE("ideal pulses") {
    const std::size_t n = 4;
    VectorC psi = product_state(n, 0);
    apply_ideal_pulse(psi, n, Vec3::UnitX(), pi / 2);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(bloch_vector(psi, n, i).y() == doctest::Approx(0.5).epsilon(1e-14));

    const VectorC s = random_state(n, 3);
    VectorC t = s;
    apply_ideal_pulse(t, n, Vec3(0.6, 0.8, 0.0), 2 * pi);
    CHECK(std::abs(std::abs(s.dot(t)) - 1.0) < 1e-12);  // global phase only
    t = s;
    apply_ideal_pulse(t, n, Vec3::UnitX(), pi);
    apply_ideal_pulse(t, n, Vec3::UnitX(), pi);
    for (std::size_t i = 0; i < n; ++i)
      CHECK((bloch_vector(t, n, i) - bloch_vector(s, n, i)).norm() < 1e-13);
  }

  TEST_CASE("finite pulse angle is rabi times duration") {
    MatrixC h = MatrixC::Zero(2, 2);
    const Propagator p(driven_hamiltonian(h, 1, Vec3::UnitX(), mhz(10.0)));
    VectorC a = product_state(1, 0), b = a;
    apply_finite_pulse(a, p, ns(25.0));
    apply_ideal_pulse(b, 1, Vec3::UnitX(), pi / 2);
    CHECK(std::abs(std::abs(a.dot(b)) - 1.0) < 1e-9);
    VectorC c = product_state(1, 0);
    apply_finite_pulse(c, p, 0.0);
    CHECK((c - product_state(1, 0)).norm() == 0.0);
  }

  TEST_CASE("finite pulses converge to ideal ones") {
    const auto in = random_instance(2, 4);
    const MatrixC H = in.h.H_total.cast<cplx>();
    const double hn = H.operatorNorm();
    const VectorC s = random_state(4, 6);
    VectorC ideal = s;
    apply_ideal_pulse(ideal, 4, Vec3::UnitY(), pi);
    double prev = 1e9, scaled = 0.0;
    for (double f : {10.0, 30.0, 100.0, 1000.0, 1e6}) {
      const double rabi = f * hn;
      VectorC fin = s;
      apply_finite_pulse(fin, Propagator(driven_hamiltonian(H, 4, Vec3::UnitY(), rabi)), pi / rabi);
      const double err = (fin - ideal).norm();
      CHECK(err < prev);
      prev = err;
      scaled = err * f;
    }
    // first order in ||H|| / rabi
    CHECK(scaled < pi);
    CHECK(prev < 1e-5);
  }

  TEST_CASE("initial state preparation") {
    Rng r(1);
    const VectorC y = prepare_initial(r, 3, pi / 2, 1.0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(bloch_vector(y, 3, i).y() == doctest::Approx(0.5));
    const VectorC z = prepare_initial(r, 3, 0.0, 1.0);
    CHECK(std::abs(center_coherence(z, 3, 0)) < 1e-15);
    CHECK(transverse_coherence(z, 3, 0) < 1e-15);
    CHECK(center_coherence(y, 3, 1) == doctest::Approx(1.0));

    const int M = 20000;
    double sum = 0.0;
    for (int k = 0; k < M; ++k) sum += center_coherence(prepare_initial(r, 2, pi / 2, 0.75), 2, 0);
    const double mean = sum / M, se = std::sqrt((1.0 - 0.25) / M);
    CHECK(std::abs(mean - 0.5) < 3 * se);

    CHECK_THROWS_AS(prepare_initial(r, 2, pi / 2, 0.4), InvalidArgument);
    CHECK_THROWS_AS(prepare_initial(r, 2, 2.0, 0.9), InvalidArgument);
  }

  TEST_CASE("norm survives a long chain of operations") {
    const auto in = random_instance(11, 5);
    const Propagator p(in.h.H_total);
    VectorC psi = random_state(5, 12);
    for (int k = 0; k < 500; ++k) {
      evolve_free(psi, p, 0.37);
      apply_ideal_pulse(psi, 5, Vec3::UnitY(), 1.1);
    }
    CHECK(std::abs(psi.norm() - 1.0) < 1e-10);
  }

  TEST_CASE("resonant pair echo reaches -1 at tau = 2 pi / J") {
    const double J = mhz(0.35);
    MatrixR c = MatrixR::Zero(2, 2);
    c(0, 1) = c(1, 0) = J;
    const auto h = build_xy_hamiltonian(c, {Eigen::VectorXd::Zero(2), 0.0});
    const Propagator p(h.H_total);
    VectorC psi = product_state(2, 0);
    apply_ideal_pulse(psi, 2, Vec3::UnitX(), pi / 2);
    const double tau = 2 * pi / J;
    evolve_free(psi, p, tau / 2);
    apply_ideal_pulse(psi, 2, Vec3::UnitY(), pi);
    evolve_free(psi, p, tau / 2);
    CHECK(center_coherence(psi, 2, 0) == doctest::Approx(-1.0).epsilon(1e-10));
  }
}
