#include "xysim/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <Eigen/Eigenvalues>

#include "xysim/errors.hpp"

namespace xysim {

namespace {

// Relative tolerance for the "block is real after a phase change" test.
constexpr double kGaugeTolerance = 1e-13;

}  // namespace

Propagator::Propagator(const MatrixR& h) { build(h.cast<cplx>(), true); }

Propagator::Propagator(const MatrixC& h) { build(h, false); }

bool Propagator::all_real() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const Block& b) { return b.real; });
}

void Propagator::build(const MatrixC& h, bool known_real) {
  if (h.rows() != h.cols()) throw ShapeError("Hamiltonian must be square");
  dim_ = h.rows();
  blocks_.clear();
  if (dim_ == 0) return;
  const double scale = std::max(h.cwiseAbs().maxCoeff(), 1e-300);
  if (hermiticity_defect(h) > 1e-10 * scale) throw InvalidArgument("Hamiltonian is not Hermitian");

  std::vector<char> seen(static_cast<std::size_t>(dim_), 0);
  VectorC gauge = VectorC::Ones(dim_);
  for (Eigen::Index root = 0; root < dim_; ++root) {
    if (seen[root]) continue;
    Block b;
    std::deque<Eigen::Index> queue{root};
    seen[root] = 1;
    gauge[root] = 1.0;
    while (!queue.empty()) {
      const Eigen::Index s = queue.front();
      queue.pop_front();
      b.index.push_back(s);
      for (Eigen::Index t = 0; t < dim_; ++t) {
        const cplx v = h(t, s);
        if (t == s || v == cplx{}) continue;
        if (seen[t]) continue;
        seen[t] = 1;
        // Choose d_t so that conj(d_t) H_ts d_s is real and positive.
        gauge[t] = known_real ? cplx{1.0} : v * gauge[s] / std::abs(v);
        queue.push_back(t);
      }
    }
    std::sort(b.index.begin(), b.index.end());
    const auto n = static_cast<Eigen::Index>(b.index.size());

    MatrixC sub(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index c = 0; c < n; ++c) sub(a, c) = h(b.index[a], b.index[c]);

    b.phase.resize(n);
    for (Eigen::Index a = 0; a < n; ++a) b.phase[a] = gauge[b.index[a]];
    MatrixC rotated = b.phase.conjugate().asDiagonal() * sub * b.phase.asDiagonal();
    b.real = known_real || rotated.imag().cwiseAbs().maxCoeff() <= kGaugeTolerance * scale;

    if (b.real) {
      MatrixR r = rotated.real();
      r = 0.5 * (r + r.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<MatrixR> es(r);
      if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
      b.energies = es.eigenvalues();
      b.vr = es.eigenvectors();
    } else {
      b.phase = VectorC::Ones(n);
      Eigen::SelfAdjointEigenSolver<MatrixC> es(sub);
      if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
      b.energies = es.eigenvalues();
      b.vc = es.eigenvectors();
    }
    blocks_.push_back(std::move(b));
  }
}

void Propagator::apply_block(const Block& b, MatrixC& states,
                             const Eigen::VectorXd& times) const {
  const auto n = static_cast<Eigen::Index>(b.index.size());
  const Eigen::Index m = states.cols();
  MatrixC x(n, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index a = 0; a < n; ++a) x(a, j) = std::conj(b.phase[a]) * states(b.index[a], j);

  auto evolve_phases = [&](MatrixC& y) {
    for (Eigen::Index j = 0; j < m; ++j)
      for (Eigen::Index a = 0; a < n; ++a)
        y(a, j) *= std::polar(1.0, -b.energies[a] * times[j]);
  };

  if (n == 1) {
    evolve_phases(x);
  } else if (b.real) {
    // Real eigenvectors: act on real and imaginary parts with one real GEMM each way.
    MatrixR parts(n, 2 * m);
    parts.leftCols(m) = x.real();
    parts.rightCols(m) = x.imag();
    MatrixR coeff = b.vr.transpose() * parts;
    MatrixC y(n, m);
    y.real() = coeff.leftCols(m);
    y.imag() = coeff.rightCols(m);
    evolve_phases(y);
    parts.leftCols(m) = y.real();
    parts.rightCols(m) = y.imag();
    coeff.noalias() = b.vr * parts;
    x.real() = coeff.leftCols(m);
    x.imag() = coeff.rightCols(m);
  } else {
    MatrixC y = b.vc.adjoint() * x;
    evolve_phases(y);
    x.noalias() = b.vc * y;
  }

  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index a = 0; a < n; ++a) states(b.index[a], j) = b.phase[a] * x(a, j);
}

void Propagator::apply(MatrixC& states, const Eigen::VectorXd& times, Exec exec) const {
  if (states.rows() != dim_) throw ShapeError("state dimension does not match propagator");
  if (times.size() != states.cols()) throw ShapeError("one evolution time per column required");
  const auto nb = static_cast<std::int64_t>(blocks_.size());
  if (exec == Exec::serial) {
    for (std::int64_t k = 0; k < nb; ++k) apply_block(blocks_[k], states, times);
  } else {
    // Blocks touch disjoint rows, so the result is identical to the serial loop.
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < nb; ++k) apply_block(blocks_[k], states, times);
  }
}

void Propagator::apply(MatrixC& states, double t, Exec exec) const {
  apply(states, Eigen::VectorXd::Constant(states.cols(), t), exec);
}

void Propagator::apply(Eigen::Ref<VectorC> psi, double t, Exec exec) const {
  MatrixC col = psi;
  apply(col, t, exec);
  psi = col.col(0);
}

MatrixC Propagator::unitary(double t) const {
  MatrixC u = MatrixC::Identity(dim_, dim_);
  apply(u, t);
  return u;
}

MatrixC Propagator::reconstruct() const {
  MatrixC h = MatrixC::Zero(dim_, dim_);
  for (const Block& b : blocks_) {
    const auto n = static_cast<Eigen::Index>(b.index.size());
    MatrixC sub = b.real ? MatrixC((b.vr * b.energies.asDiagonal() * b.vr.transpose()).cast<cplx>())
                         : MatrixC(b.vc * b.energies.asDiagonal() * b.vc.adjoint());
    sub = b.phase.asDiagonal() * sub * b.phase.conjugate().asDiagonal();
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index c = 0; c < n; ++c) h(b.index[a], b.index[c]) = sub(a, c);
  }
  return h;
}

Eigen::VectorXd Propagator::eigenvalues() const {
  std::vector<double> all;
  for (const Block& b : blocks_) all.insert(all.end(), b.energies.begin(), b.energies.end());
  std::sort(all.begin(), all.end());
  return Eigen::Map<Eigen::VectorXd>(all.data(), static_cast<Eigen::Index>(all.size()));
}

}  // namespace xysim
