#include <doctest.h>

#include "xysim/kernels.hpp"
#include "xysim/rng.hpp"

using namespace xysim;
using namespace xysim::kernels;

namespace {
VectorC random_state(std::size_t n, std::uint64_t seed) {
  Rng r(seed);
  VectorC v(hilbert_dim(n));
  for (auto& x : v) x = cplx(r.normal(), r.normal());
  return v.normalized();
}
}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("serial and parallel rotations agree bit for bit") {
    const Mat2 r = rotation_matrix(Vec3(0.2, 0.9, -0.4).normalized(), 1.3);
    for (std::size_t n : {1, 5, 11}) {
      VectorC a = random_state(n, n), b = a;
      apply_rotation_all(a, n, r, Exec::serial);
      apply_rotation_all(b, n, r, Exec::parallel);
      CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
      apply_rotation_one(a, n, n - 1, r, Exec::serial);
      apply_rotation_one(b, n, n - 1, r, Exec::parallel);
      CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  TEST_CASE("rotations match the dense operators") {
    const std::size_t n = 4;
    const Vec3 axis = Vec3(1, -2, 0.5).normalized();
    const Mat2 r = rotation_matrix(axis, 0.77);
    VectorC a = random_state(n, 9);
    const VectorC dense = global_rotation(n, axis, 0.77) * a;
    apply_rotation_all(a, n, r, Exec::serial);
    CHECK((a - dense).norm() < 1e-13);

    VectorC b = random_state(n, 10);
    const VectorC one = one_site(n, 2, r) * b;
    apply_rotation_one(b, n, 2, r, Exec::serial);
    CHECK((b - one).norm() < 1e-13);
  }

  TEST_CASE("expectations agree across execution modes and with dense algebra") {
    const std::size_t n = 6;
    const VectorC psi = random_state(n, 4);
    for (Axis ax : {Axis::x, Axis::y, Axis::z}) {
      const cplx s = expectation_one(psi, n, 3, spin_matrix(ax), Exec::serial);
      const cplx p = expectation_one(psi, n, 3, spin_matrix(ax), Exec::parallel);
      const cplx d = psi.dot(one_site(n, 3, spin_matrix(ax)) * psi);
      CHECK(std::abs(s - p) < 1e-14);
      CHECK(std::abs(s - d) < 1e-14);
    }
    const Mat2 rho = reduced_density(psi, n, 1, Exec::serial);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-14);
    CHECK((rho - rho.adjoint()).norm() < 1e-14);
    CHECK((rho - reduced_density(psi, n, 1, Exec::parallel)).norm() < 1e-14);
  }

  TEST_CASE("norm is preserved over many rotations") {
    const std::size_t n = 7;
    VectorC psi = random_state(n, 2);
    const Mat2 r = rotation_matrix(Vec3::UnitY(), 0.123);
    for (int k = 0; k < 1000; ++k) apply_rotation_all(psi, n, r, Exec::serial);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-10);
  }

  TEST_CASE("column batches match single-state rotations") {
    const std::size_t n = 5;
    const Mat2 r = rotation_matrix(Vec3::UnitX(), 2.1);
    MatrixC batch(hilbert_dim(n), 3);
    for (int j = 0; j < 3; ++j) batch.col(j) = random_state(n, 20 + j);
    MatrixC ref = batch;
    apply_rotation_columns(batch, n, r, Exec::parallel);
    for (int j = 0; j < 3; ++j) {
      VectorC c = ref.col(j);
      apply_rotation_all(c, n, r, Exec::serial);
      CHECK((c - batch.col(j)).norm() < 1e-14);
    }
  }
}
