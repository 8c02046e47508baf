#include "xysim/hamiltonian.hpp"

#include <cmath>
#include <iostream>

#include "xysim/errors.hpp"

namespace xysim {

namespace {

double sz_of(std::uint64_t s, std::uint64_t mask) { return (s & mask) ? 0.5 : -0.5; }

void check_cap(std::size_t n, std::size_t cap) {
  if (n == 0) throw InvalidArgument("empty spin register");
  if (n > cap || n > kMaxSpins)
    throw CapacityError("N = " + std::to_string(n) + " exceeds the spin cap " +
                        std::to_string(std::min(cap, kMaxSpins)));
}

void check_shapes(const CouplingMatrix& couplings, const DisorderField& disorder) {
  if (couplings.rows() != couplings.cols())
    throw ShapeError("coupling matrix must be square");
  if (disorder.deltas.size() != couplings.rows())
    throw ShapeError("disorder and coupling sizes differ");
}

MatrixR disorder_part(const Eigen::VectorXd& deltas) {
  const auto n = static_cast<std::size_t>(deltas.size());
  const std::size_t dim = hilbert_dim(n);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (std::uint64_t s = 0; s < dim; ++s) {
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) e += deltas[i] * sz_of(s, spin_mask(n, i));
    diag[s] = e;
  }
  return diag.asDiagonal();
}

MatrixR exchange_part(const CouplingMatrix& J) {
  const auto n = static_cast<std::size_t>(J.rows());
  const std::size_t dim = hilbert_dim(n);
  MatrixR h = MatrixR::Zero(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double Jij = J(i, j);
      if (Jij == 0.0) continue;
      const std::uint64_t both = spin_mask(n, i) | spin_mask(n, j);
      for (std::uint64_t s = 0; s < dim; ++s) {
        const std::uint64_t b = s & both;
        if (b != 0 && b != both) h(s ^ both, s) += 0.5 * Jij;
      }
    }
  }
  return h;
}

MatrixR ising_z_part(const CouplingMatrix& J) {
  const auto n = static_cast<std::size_t>(J.rows());
  const std::size_t dim = hilbert_dim(n);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (std::uint64_t s = 0; s < dim; ++s) {
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j)
        e += J(i, j) * sz_of(s, spin_mask(n, i)) * sz_of(s, spin_mask(n, j));
    diag[s] = e;
  }
  return diag.asDiagonal();
}

}  // namespace

void PhysicalConstants::validate() const {
  if (!(dipolar_prefactor > 0.0)) throw InvalidArgument("dipolar prefactor must be positive");
  if (!(g_parallel > g_perp && g_perp > 0.0))
    throw InvalidArgument("g-factors must satisfy g_parallel > g_perp > 0");
}

double pairwise_coupling(const Vec3& pos_i, const Vec3& pos_j,
                         const PhysicalConstants& constants) {
  const Vec3 d = pos_i - pos_j;
  const double r = d.norm();
  if (!(r > 0.0)) throw InvalidArgument("coincident spin positions (dipolar singularity)");
  const double z = std::abs(d.z()) / r;
  return -0.5 * constants.dipolar_prefactor * (3.0 * z * z - 1.0) / (r * r * r);
}

CouplingMatrix coupling_matrix(const SpinConfiguration& config,
                               const PhysicalConstants& constants) {
  const auto n = static_cast<Eigen::Index>(config.size());
  CouplingMatrix J = CouplingMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = pairwise_coupling(config.positions[i], config.positions[j], constants);
      J(i, j) = v;
      J(j, i) = v;
    }
  }
  return J;
}

DisorderField sample_disorder(Rng& rng, double W, std::size_t n_spins) {
  if (!(W >= 0.0)) throw InvalidArgument("disorder width must be non-negative");
  DisorderField field;
  field.W = W;
  field.deltas = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_spins));
  if (W == 0.0) return field;
  const double bound = kDisorderTruncation * W;
  for (std::size_t i = 0; i < n_spins; ++i) {
    double d;
    do {
      d = 0.5 * W * std::tan(pi * (rng.uniform_open() - 0.5));
    } while (std::abs(d) > bound);
    field.deltas[i] = d;
  }
  return field;
}

HamiltonianTerms build_xy_hamiltonian(const CouplingMatrix& couplings,
                                      const DisorderField& disorder, std::size_t spin_cap) {
  check_shapes(couplings, disorder);
  const auto n = static_cast<std::size_t>(couplings.rows());
  check_cap(n, spin_cap);
  HamiltonianTerms h;
  h.n_spins = n;
  h.H_dis = disorder_part(disorder.deltas);
  h.H_exchange = exchange_part(couplings);
  h.H_ising_z = ising_z_part(couplings);
  h.H_total = h.H_dis + h.H_exchange;
  return h;
}

HamiltonianTerms build_xxz_hamiltonian(const CouplingMatrix& couplings,
                                       const DisorderField& disorder, const XxzControl& control,
                                       std::size_t spin_cap) {
  const double a = control.alpha_B;
  if (!(std::abs(a) <= XxzControl::kMaxAlpha))
    throw InvalidArgument("admixture ratio alpha_B outside |alpha_B| <= 0.3");
  if (std::abs(a) > XxzControl::kWarnAlpha)
    std::clog << "warning: alpha_B = " << a << " is not small; perturbed-basis XXZ model is "
              << "only accurate for |alpha_B| << 1\n";
  HamiltonianTerms h = build_xy_hamiltonian(couplings, disorder, spin_cap);
  h.exchange_weight = 1.0 - 0.5 * a * a;
  h.ising_weight = 2.0 * a * a;
  h.H_total = h.H_dis + h.exchange_weight * h.H_exchange + h.ising_weight * h.H_ising_z;
  return h;
}

MatrixR non_secular_terms(const CouplingMatrix& J) {
  const auto n = static_cast<std::size_t>(J.rows());
  const std::size_t dim = hilbert_dim(n);
  MatrixR h = MatrixR::Zero(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const std::uint64_t both = spin_mask(n, i) | spin_mask(n, j);
      for (std::uint64_t s = 0; s < dim; ++s) {
        const std::uint64_t b = s & both;
        if (b == 0 || b == both) h(s ^ both, s) += 0.5 * J(i, j);
      }
    }
  }
  return h;
}

double aux_leakage_ratio(const PhysicalConstants& constants) {
  const double r = constants.g_perp / constants.g_parallel;
  return r * r * r * r;
}

double aux_exchange_element(double J_ij, const PhysicalConstants& constants) {
  const double r = constants.g_perp / constants.g_parallel;
  return -0.25 * r * r * J_ij;
}

}  // namespace xysim
