#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "xysim/kernels.hpp"
#include "xysim/spin_ops.hpp"

namespace xysim {

// Cached eigendecomposition of a Hermitian matrix for repeated exp(-iHt).
//
// The matrix is split into connected components of its nonzero pattern
// (total-Sz sectors for U(1)-symmetric Hamiltonians). A block is solved with
// the real symmetric solver whenever a diagonal phase change D makes it real,
// H_b = D R D^†; this covers the XY model with a transverse drive in the xy plane.
class Propagator {
 public:
  Propagator() = default;
  explicit Propagator(const MatrixR& h);
  explicit Propagator(const MatrixC& h);

  Eigen::Index dim() const { return dim_; }
  std::size_t n_blocks() const { return blocks_.size(); }
  bool all_real() const;

  /// psi <- exp(-i H t) psi
  void apply(Eigen::Ref<VectorC> psi, double t, Exec exec = Exec::serial) const;
  /// Column j <- exp(-i H times[j]) column j.
  void apply(MatrixC& states, const Eigen::VectorXd& times, Exec exec = Exec::serial) const;
  void apply(MatrixC& states, double t, Exec exec = Exec::serial) const;

  /// Dense exp(-i H t).
  MatrixC unitary(double t) const;
  /// V diag(E) V^†, for round-trip checks.
  MatrixC reconstruct() const;
  Eigen::VectorXd eigenvalues() const;

 private:
  struct Block {
    std::vector<Eigen::Index> index;
    Eigen::VectorXd energies;
    bool real = true;
    VectorC phase;  // D on the diagonal (real path only)
    MatrixR vr;
    MatrixC vc;
  };

  void build(const MatrixC& h, bool known_real);
  void apply_block(const Block& b, MatrixC& states, const Eigen::VectorXd& times) const;

  Eigen::Index dim_ = 0;
  std::vector<Block> blocks_;
};

}  // namespace xysim
