#include "xysim/spin_ops.hpp"

#include <cmath>

#include "xysim/errors.hpp"

namespace xysim {

namespace {

void check_spins(std::size_t n_spins) {
  if (n_spins == 0 || n_spins > kMaxSpins) throw CapacityError("unsupported spin count");
}

std::uint64_t with_bit(std::uint64_t s, std::uint64_t mask, int bit) {
  return bit ? (s | mask) : (s & ~mask);
}

}  // namespace

Mat2 spin_matrix(Axis axis) {
  const cplx i{0.0, 1.0};
  Mat2 m;
  switch (axis) {
    case Axis::x:
      m << 0.0, 0.5, 0.5, 0.0;
      break;
    case Axis::y:
      m << 0.0, 0.5 * i, -0.5 * i, 0.0;
      break;
    case Axis::z:
      m << -0.5, 0.0, 0.0, 0.5;
      break;
  }
  return m;
}

Mat2 spin_matrix(const Vec3& n) {
  return n.x() * spin_matrix(Axis::x) + n.y() * spin_matrix(Axis::y) +
         n.z() * spin_matrix(Axis::z);
}

Mat2 rotation_matrix(const Vec3& axis, double angle) {
  const double norm = axis.norm();
  if (!(norm > 0.0)) throw InvalidArgument("rotation axis must be non-zero");
  // (2 n.S)^2 = 1 for a unit axis.
  const Mat2 pauli = 2.0 * spin_matrix(Vec3(axis / norm));
  return std::cos(0.5 * angle) * Mat2::Identity() - cplx{0.0, std::sin(0.5 * angle)} * pauli;
}

MatrixC one_site(std::size_t n_spins, std::size_t spin, const Mat2& op) {
  check_spins(n_spins);
  const std::size_t dim = hilbert_dim(n_spins);
  const std::uint64_t m = spin_mask(n_spins, spin);
  MatrixC out = MatrixC::Zero(dim, dim);
  for (std::uint64_t s = 0; s < dim; ++s) {
    const int b = (s & m) ? 1 : 0;
    for (int o = 0; o < 2; ++o) {
      const cplx v = op(o, b);
      if (v != cplx{}) out(with_bit(s, m, o), s) += v;
    }
  }
  return out;
}

MatrixC two_site(std::size_t n_spins, std::size_t i, std::size_t j, const Mat2& op_a,
                 const Mat2& op_b) {
  check_spins(n_spins);
  if (i == j) throw InvalidArgument("two_site requires distinct spins");
  const std::size_t dim = hilbert_dim(n_spins);
  const std::uint64_t mi = spin_mask(n_spins, i);
  const std::uint64_t mj = spin_mask(n_spins, j);
  MatrixC out = MatrixC::Zero(dim, dim);
  for (std::uint64_t s = 0; s < dim; ++s) {
    const int bi = (s & mi) ? 1 : 0;
    const int bj = (s & mj) ? 1 : 0;
    for (int oi = 0; oi < 2; ++oi) {
      for (int oj = 0; oj < 2; ++oj) {
        const cplx v = op_a(oi, bi) * op_b(oj, bj);
        if (v != cplx{}) out(with_bit(with_bit(s, mi, oi), mj, oj), s) += v;
      }
    }
  }
  return out;
}

MatrixC total_spin(std::size_t n_spins, Axis axis) {
  return onsite_field(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n_spins)), axis);
}

MatrixC onsite_field(const Eigen::VectorXd& h, Axis axis) {
  const auto n = static_cast<std::size_t>(h.size());
  check_spins(n);
  const Mat2 s = spin_matrix(axis);
  MatrixC out = MatrixC::Zero(hilbert_dim(n), hilbert_dim(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (h[i] != 0.0) out += h[i] * one_site(n, i, s);
  }
  return out;
}

MatrixC ising(const MatrixR& couplings, Axis axis) {
  const auto n = static_cast<std::size_t>(couplings.rows());
  check_spins(n);
  const Mat2 s = spin_matrix(axis);
  MatrixC out = MatrixC::Zero(hilbert_dim(n), hilbert_dim(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double J = couplings(i, j);
      if (J != 0.0) out += J * two_site(n, i, j, s, s);
    }
  }
  return out;
}

MatrixC heisenberg(const MatrixR& couplings) {
  return ising(couplings, Axis::x) + ising(couplings, Axis::y) + ising(couplings, Axis::z);
}

MatrixC exchange(const MatrixR& couplings) {
  return ising(couplings, Axis::x) + ising(couplings, Axis::y);
}

MatrixC global_rotation(std::size_t n_spins, const Vec3& axis, double angle) {
  check_spins(n_spins);
  const Mat2 r = rotation_matrix(axis, angle);
  MatrixC out = MatrixC::Ones(1, 1);
  for (std::size_t i = 0; i < n_spins; ++i) {
    MatrixC next(out.rows() * 2, out.cols() * 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        next.block(a * out.rows(), b * out.cols(), out.rows(), out.cols()) = r(a, b) * out;
    out = std::move(next);
  }
  return out;
}

double hermiticity_defect(const MatrixC& a) { return (a - a.adjoint()).cwiseAbs().maxCoeff(); }

}  // namespace xysim
