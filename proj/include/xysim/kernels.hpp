#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "xysim/spin_ops.hpp"

// State-vector kernels with a serial reference and an OpenMP variant.
// Rotations agree bit-for-bit; reductions agree to rounding.
namespace xysim {

enum class Exec { serial, parallel };

namespace kernels {

/// psi <- (r ⊗ r ⊗ ... ⊗ r) psi
void apply_rotation_all(Eigen::Ref<VectorC> psi, std::size_t n_spins, const Mat2& r, Exec exec);

/// psi <- r acting on `spin` only.
void apply_rotation_one(Eigen::Ref<VectorC> psi, std::size_t n_spins, std::size_t spin, const Mat2& r,
                        Exec exec);

/// <psi| op_spin |psi> for a single-spin operator.
cplx expectation_one(const Eigen::Ref<const VectorC>& psi, std::size_t n_spins, std::size_t spin, const Mat2& op,
                     Exec exec);

/// Reduced 2x2 density matrix of `spin`.
Mat2 reduced_density(const Eigen::Ref<const VectorC>& psi, std::size_t n_spins, std::size_t spin, Exec exec);

/// Column-wise apply_rotation_all on a batch of states.
void apply_rotation_columns(MatrixC& states, std::size_t n_spins, const Mat2& r, Exec exec);

}  // namespace kernels
}  // namespace xysim
