#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace xysim {

struct OracleCheck {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool below = true;  // pass when measured < tolerance, else measured > tolerance
  bool pass() const;
};

struct OracleReport {
  std::string suite;
  std::vector<OracleCheck> checks;
  bool passed() const;
  void print(std::ostream& out) const;
};

struct OracleOptions {
  std::size_t realizations = 200;  // convergence suite
  std::uint64_t seed = 1;
  int workers = 0;
};

std::vector<std::string> oracle_suites();  // two-spin, three-spin, aht, convergence

/// Throws InvalidArgument for an unknown suite name.
OracleReport run_oracle(const std::string& suite, const OracleOptions& options = {});

// Individual measurements, shared with the acceptance tests.

/// Max |engine - closed form| over `count` random (J, Delta, tau) pairs.
double two_spin_max_deviation(std::uint64_t seed, std::size_t count);

struct ThreeSpinComparison {
  double max_deviation = 0.0;    // on tau in [0, 20/J0]
  double slow_peak = 0.0;        // located spectral peak of the simulated signal, rad/us
  double slow_expected = 0.0;    // |J1 J2 / J0|
};
ThreeSpinComparison three_spin_comparison(double J0, double r1, double r2);

/// Echo polarization of spin 1 from the full three-spin engine.
std::vector<double> three_spin_engine(double J0, double J1, double J2,
                                      const std::vector<double>& taus);

/// ||U_sequence - c exp(-i H0 T)||_2 for eps = -pi/2 CPMG on a fixed 4-spin
/// instance over one toggling period, c the net control phase.
double magnus_error(double tau);

}  // namespace xysim
