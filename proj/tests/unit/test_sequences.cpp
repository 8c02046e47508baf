#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "xysim/analytics.hpp"
#include "xysim/dynamics.hpp"
#include "xysim/errors.hpp"
#include "xysim/sequences.hpp"

using namespace xysim;
using namespace xysim::test;

namespace {

SpinSystem single_spin(double delta) {
  MatrixR h(2, 2);
  h << -delta / 2, 0, 0, delta / 2;
  return SpinSystem(h, 1, 0);
}

VectorC plus_y(std::size_t n) {
  Rng r(0);
  return prepare_initial(r, n, pi / 2, 1.0);
}

SpinSystem system_of(const Instance& in, std::size_t n) {
  return SpinSystem(in.h.H_total, n, in.center);
}

}  // namespace

TEST_SUITE("sequences") {
  TEST_CASE("isolated resonant spin keeps full Ramsey coherence") {
    auto s = single_spin(0.0);
    for (double t : {0.0, 1.0, 50.0}) CHECK(run_ramsey(s, plus_y(1), t) == doctest::Approx(1.0));
  }

  TEST_CASE("Lorentzian Ramsey decay is exp(-W tau / 2)") {
    const double W = mhz(0.65);
    Rng r(4);
    const auto d = sample_disorder(r, W, 40000);
    for (double tau : {0.2, 0.5, 1.0}) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < d.deltas.size(); ++i) {
        auto s = single_spin(d.deltas[i]);
        acc += run_ramsey(s, plus_y(1), tau);
      }
      CHECK(acc / d.deltas.size() == doctest::Approx(std::exp(-W * tau / 2)).epsilon(0.02));
    }
  }

  TEST_CASE("single-spin echo refocuses any detuning") {
    for (double d : {-3.0, 0.4, 11.0}) {
      auto s = single_spin(d);
      for (double t : {0.3, 2.0, 7.5}) CHECK(run_spin_echo(s, plus_y(1), t) == doctest::Approx(1.0));
    }
  }

  TEST_CASE("pair echo equals the closed form") {
    for (double delta : {0.0, 0.8, -2.1}) {
      const double J = 1.37;
      MatrixR c = MatrixR::Zero(2, 2);
      c(0, 1) = c(1, 0) = J;
      DisorderField d{Eigen::Vector2d(0.3 + delta, 0.3), 0.0};
      SpinSystem s(build_xy_hamiltonian(c, d).H_total, 2, 0);
      for (double t : {0.0, 0.9, 4.4, 13.0})
        CHECK(std::abs(run_spin_echo(s, plus_y(2), t) -
                       two_spin_echo_polarization({J, delta}, t)) < 1e-10);
    }
  }

  TEST_CASE("interacting Ramsey decays faster than echo") {
    double ram = 0.0, echo = 0.0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto inst = random_instance(100 + seed, 6);
      auto sys = system_of(inst, 6);
      ram += run_ramsey(sys, plus_y(6), 1.5);
      echo += run_spin_echo(sys, plus_y(6), 1.5);
    }
    CHECK(ram < echo);
  }

  TEST_CASE("zero-angle CPMG on free spins is Ramsey") {
    auto s = single_spin(0.9);
    const auto t = run_eps_cpmg(s, plus_y(1), EpsCpmg{0.25, -pi, 6});
    for (std::size_t k = 0; k < t.values.size(); ++k)
      CHECK(t.values[k] == doctest::Approx(run_ramsey(s, plus_y(1), t.times[k])).epsilon(1e-10));
  }

  TEST_CASE("perfect CPMG keeps a single spin") {
    auto s = single_spin(2.3);
    const auto t = run_eps_cpmg(s, plus_y(1), EpsCpmg{0.4, 0.0, 10});
    for (double v : t.values) CHECK(v == doctest::Approx(1.0));
    CHECK(t.times.size() == 11);
    CHECK(t.times.back() == doctest::Approx(4.0));
  }

  TEST_CASE("one CPMG block is a spin echo") {
    const auto in = random_instance(5, 6);
    auto s = system_of(in, 6);
    const auto t = run_eps_cpmg(s, plus_y(6), EpsCpmg{0.7, 0.0, 1});
    CHECK(t.values.back() == doctest::Approx(run_spin_echo(s, plus_y(6), 0.7)).epsilon(1e-12));
  }

  TEST_CASE("finite pulses lengthen the CPMG period") {
    const EpsCpmg e{0.2, 0.0, 3, 0.05, PulseMode::finite};
    CHECK(period(e) == doctest::Approx(0.25));
    auto s = single_spin(0.0);
    const auto t = run_eps_cpmg(s, plus_y(1), e);
    CHECK(t.times.back() == doctest::Approx(0.75));
  }

  TEST_CASE("WAHUHA approaches the Heisenberg limit as tau shrinks") {
    // W = 0: the polarized state is an eigenstate of the average Hamiltonian
    const auto in = random_instance(8, 5, 46.0, 0.0);
    auto s = system_of(in, 5);
    const double T = 3.0;
    double prev = -2.0;
    for (int k : {1, 4, 16, 64}) {
      const auto t = run_wahuha_echo(s, plus_y(5), WahuhaEcho{T / (6.0 * k), k});
      CHECK(t.times.back() == doctest::Approx(T));
      CHECK(t.values.back() >= prev - 1e-9);
      prev = t.values.back();
    }
    CHECK(prev > 0.99);
  }

  TEST_CASE("WAHUHA outlasts the echo at W = 0") {
    double wah = 0.0, echo = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto in = random_instance(300 + seed, 6, 46.0, 0.0);
      auto s = system_of(in, 6);
      wah += run_wahuha_echo(s, plus_y(6), WahuhaEcho{0.05, 10}).values.back();
      echo += run_spin_echo(s, plus_y(6), 3.0);
    }
    CHECK(wah > echo);
  }

  TEST_CASE("finite WAHUHA timing feasibility") {
    CHECK_THROWS_AS(validate(WahuhaEcho{0.05, 2, 0.04, PulseMode::finite}), SequenceError);
    CHECK_NOTHROW(validate(WahuhaEcho{0.06, 2, 0.04, PulseMode::finite}));
    CHECK_THROWS_AS(validate(EpsCpmg{0.1, 4.0, 2}), SequenceError);
    CHECK_THROWS_AS(validate(EpsCpmg{0.1, 0.0, 0}), SequenceError);
    CHECK_THROWS_AS(validate(DtcFloquet{0.1, 0.0, 8, 2.0}), SequenceError);
  }

  TEST_CASE("spin lock") {
    const auto in = random_instance(13, 6);
    auto s = system_of(in, 6);
    const auto g = linspace(0.0, 4.0, 9);
    const auto off = run_spin_lock(s, plus_y(6), SpinLock{0.0, 4.0}, g);
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(off.values[i] == doctest::Approx(run_ramsey(s, plus_y(6), g[i])).epsilon(1e-12));

    const double J = mean_J_from_ppm(46.0);
    const auto on = run_spin_lock(s, plus_y(6), SpinLock{mhz(10.0), 10 / J}, linspace(0, 10 / J, 11));
    for (double v : on.values) CHECK(v > 0.9);

    // along z: Rabi precession at omega_y
    auto one = single_spin(0.0);
    Rng r(0);
    const VectorC z = prepare_initial(r, 1, 0.0, 1.0);
    const double w = mhz(10.0);
    for (double t : {0.013, 0.05, 0.071}) {
      MatrixC st = z;
      one.driven(Vec3::UnitY(), w).apply(st, t);
      CHECK(bloch_vector(st.col(0), 1, 0).z() == doctest::Approx(-0.5 * std::cos(w * t)).epsilon(1e-10));
    }
  }

  TEST_CASE("analyzer sweep") {
    std::vector<double> th;
    for (int i = 0; i < 16; ++i) th.push_back(2 * pi * i / 16);
    const auto fy = emulate_analyzer_sweep(plus_y(3), 3, 1, th);
    CHECK(fy.coherence == doctest::Approx(1.0));
    CHECK(fy.residual < 1e-10);
    Rng r(0);
    const auto fz = emulate_analyzer_sweep(prepare_initial(r, 3, 0.0, 1.0), 3, 1, th);
    CHECK(std::abs(fz.C_amp) < 1e-12);
    CHECK(std::abs(fz.coherence) < 1e-12);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const VectorC psi = random_state(4, seed);
      const auto f = emulate_analyzer_sweep(psi, 4, 2, th);
      CHECK(std::abs(f.coherence - transverse_coherence(psi, 4, 2)) < 1e-8);
      CHECK(std::abs(f.in_phase - center_coherence(psi, 4, 2)) < 1e-8);
    }
    CHECK_THROWS_AS(emulate_analyzer_sweep(plus_y(1), 1, 0, {0.0, 1.0}), InvalidArgument);
  }

  TEST_CASE("readout paths agree along a sequence") {
    const auto in = random_instance(31, 5);
    auto s = system_of(in, 5);
    std::vector<double> th;
    for (int i = 0; i < 8; ++i) th.push_back(2 * pi * i / 8);
    MatrixC st = plus_y(5);
    for (int k = 0; k < 5; ++k) {
      s.free().apply(st, 0.3);
      s.pulse(st, Vec3::UnitY(), pi - 0.4 * k, PulseMode::ideal, 0.0);
      const auto f = emulate_analyzer_sweep(st.col(0), 5, in.center, th);
      CHECK(std::abs(f.coherence - transverse_coherence(st.col(0), 5, in.center)) < 1e-8);
    }
  }

  TEST_CASE("DTC series") {
    auto s = single_spin(0.0);
    const auto perfect = run_dtc_floquet(s, plus_y(1), DtcFloquet{0.0, 0.0, 12});
    for (std::size_t k = 0; k < perfect.signed_values.size(); ++k)
      CHECK(perfect.signed_values[k] == doctest::Approx((k % 2 == 0) ? -1.0 : 1.0));

    const double eps = 0.03 * pi;
    const auto tilted = run_dtc_floquet(s, plus_y(1), DtcFloquet{0.0, eps, 60});
    const auto c = tilted.contrast();
    for (std::size_t k = 0; k < c.size(); ++k)
      CHECK(c[k] == doctest::Approx(std::abs(std::cos((k + 1) * eps))).epsilon(1e-10));
  }

  TEST_CASE("DTC contrast bounds, readout and eps symmetry") {
    // A pi rotation about y maps (eps, Delta) to (-eps, -Delta) and leaves the
    // exchange, the y lock and the +y state alone.
    const auto in = random_instance(41, 6);
    auto s = system_of(in, 6);
    DisorderField flipped = in.disorder;
    flipped.deltas = -flipped.deltas;
    SpinSystem mirror(build_xy_hamiltonian(in.J, flipped).H_total, 6, in.center);
    const auto a = run_dtc_floquet(s, plus_y(6), DtcFloquet{0.3, 0.05 * pi, 20});
    const auto b = run_dtc_floquet(mirror, plus_y(6), DtcFloquet{0.3, -0.05 * pi, 20});
    const auto ca = a.contrast(), cb = b.contrast();
    for (std::size_t k = 0; k < ca.size(); ++k) {
      CHECK(ca[k] >= 0.0);
      CHECK(ca[k] <= 1.0 + 1e-12);
      CHECK(ca[k] == doctest::Approx(cb[k]).epsilon(1e-9));
    }
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const VectorC psi = random_state(4, seed);
      CHECK(dtc_contrast(psi, 4, 1) ==
            doctest::Approx(std::abs(center_coherence(psi, 4, 1))).epsilon(1e-12));
    }
  }

  TEST_CASE("batch DTC equals individual runs") {
    const auto in = random_instance(43, 5);
    auto s = system_of(in, 5);
    const std::vector<double> eps{0.0, 0.02 * pi, -0.07 * pi};
    const auto batch = run_dtc_batch(s, plus_y(5), 0.2, 10, mhz(10.0), eps);
    for (std::size_t j = 0; j < eps.size(); ++j) {
      const auto one = run_dtc_floquet(s, plus_y(5), DtcFloquet{0.2, eps[j], 10});
      for (std::size_t k = 0; k < 10; ++k)
        CHECK(batch[j].signed_values[k] == doctest::Approx(one.signed_values[k]).epsilon(1e-13));
    }
  }
}
