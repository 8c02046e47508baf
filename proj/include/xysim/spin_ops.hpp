#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

#include <Eigen/Core>

#include "xysim/lattice.hpp"

// Spin-1/2 register conventions, used everywhere:
//   * spin i is tensor factor i (spin 0 leftmost), i.e. bit (N-1-i) of a basis index;
//   * qubit |0> is the Sz = -1/2 state and |1> the Sz = +1/2 state, so in the
//     computational basis Sx = X/2, Sy = -Y/2, Sz = -Z/2.
namespace xysim {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using MatrixC = Eigen::MatrixXcd;
using MatrixR = Eigen::MatrixXd;
using VectorC = Eigen::VectorXcd;

enum class Axis { x, y, z };

inline constexpr std::size_t kMaxSpins = 16;

inline std::size_t hilbert_dim(std::size_t n_spins) { return std::size_t{1} << n_spins; }

inline std::uint64_t spin_mask(std::size_t n_spins, std::size_t spin) {
  return std::uint64_t{1} << (n_spins - 1 - spin);
}

/// Single spin-1/2 operator S_mu in the {|0>,|1>} basis.
Mat2 spin_matrix(Axis axis);

/// n.S for a (not necessarily unit) 3-vector n.
Mat2 spin_matrix(const Vec3& n);

/// exp(-i * angle * n.S) for unit axis n.
Mat2 rotation_matrix(const Vec3& axis, double angle);

/// Operator `op` acting on `spin`, identity elsewhere.
MatrixC one_site(std::size_t n_spins, std::size_t spin, const Mat2& op);

/// Product op_a (on spin i) * op_b (on spin j), i != j.
MatrixC two_site(std::size_t n_spins, std::size_t i, std::size_t j, const Mat2& op_a,
                 const Mat2& op_b);

/// sum_i S_mu^i
MatrixC total_spin(std::size_t n_spins, Axis axis);

/// sum_i h_i S_mu^i
MatrixC onsite_field(const Eigen::VectorXd& h, Axis axis);

/// sum_{i>j} J_ij S_mu^i S_mu^j
MatrixC ising(const MatrixR& couplings, Axis axis);

/// sum_{i>j} J_ij S^i . S^j
MatrixC heisenberg(const MatrixR& couplings);

/// sum_{i>j} J_ij (Sx Sx + Sy Sy)
MatrixC exchange(const MatrixR& couplings);

/// Global rotation exp(-i angle n.S_tot) as a dense matrix (tensor power).
MatrixC global_rotation(std::size_t n_spins, const Vec3& axis, double angle);

/// Largest |A_ij - conj(A_ji)|.
double hermiticity_defect(const MatrixC& a);

}  // namespace xysim
