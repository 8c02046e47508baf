#pragma once

#include <vector>

#include "xysim/hamiltonian.hpp"
#include "xysim/lattice.hpp"
#include "xysim/rng.hpp"
#include "xysim/spin_ops.hpp"

namespace xysim::test {

struct Instance {
  CouplingMatrix J;
  DisorderField disorder;
  HamiltonianTerms h;
  std::size_t center = 0;
};

inline Instance random_instance(std::uint64_t seed, std::size_t n, double ppm = 46.0,
                                double W = mhz(0.65)) {
  Rng rng(seed);
  const auto cfg = sample_configuration(rng, ppm, n);
  Instance in;
  in.J = coupling_matrix(cfg);
  in.disorder = sample_disorder(rng, W, n);
  in.h = build_xy_hamiltonian(in.J, in.disorder);
  in.center = cfg.center_index;
  return in;
}

inline VectorC random_state(std::size_t n, std::uint64_t seed) {
  Rng r(seed);
  VectorC v(hilbert_dim(n));
  for (auto& x : v) x = cplx(r.normal(), r.normal());
  return v.normalized();
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return v;
}

}  // namespace xysim::test
