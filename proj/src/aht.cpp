#include "xysim/aht.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>

#include "xysim/errors.hpp"

namespace xysim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr int kMaxPeriodBlocks = 64;

bool proportional_to_identity(const Mat2& u) {
  return std::abs(u(0, 1)) < 1e-9 && std::abs(u(1, 0)) < 1e-9 && std::abs(u(0, 0) - u(1, 1)) < 1e-9;
}

struct Pulse {
  Vec3 axis;
  double angle;
};

// Base block as alternating (free time, pulse) items.
struct Block {
  std::vector<double> free_times;  // size = pulses.size() + 1
  std::vector<Pulse> pulses;
};

Block base_block(const SequenceSpec& spec) {
  return std::visit(
      overloaded{
          [](const Ramsey& s) { return Block{{s.tau}, {}}; },
          [](const SpinEcho& s) { return Block{{0.5 * s.tau, 0.5 * s.tau}, {{Vec3::UnitY(), pi}}}; },
          [](const EpsCpmg& s) {
            if (s.mode != PulseMode::ideal)
              throw InvalidArgument("toggling frames need ideal pulses");
            return Block{{0.5 * s.tau, 0.5 * s.tau}, {{Vec3::UnitY(), pi + s.epsilon}}};
          },
          [](const WahuhaEcho& s) {
            if (s.mode != PulseMode::ideal)
              throw InvalidArgument("toggling frames need ideal pulses");
            const double t = s.tau;
            return Block{{t, t, t, t, t, t},
                         {{Vec3::UnitX(), pi / 2},
                          {Vec3::UnitY(), pi / 2},
                          {Vec3::UnitY(), pi},
                          {-Vec3::UnitY(), pi / 2},
                          {Vec3::UnitX(), pi / 2}}};
          },
          [](const auto&) -> Block {
            throw InvalidArgument("toggling frames are defined for pulsed sequences only");
          },
      },
      spec);
}

int repetitions(const SequenceSpec& spec) {
  if (const auto* s = std::get_if<EpsCpmg>(&spec)) return s->k;
  if (const auto* s = std::get_if<WahuhaEcho>(&spec)) return s->k;
  return 1;
}

std::vector<FrameSegment> unroll(const Block& b, int reps) {
  std::vector<FrameSegment> out;
  Mat2 u = Mat2::Identity();
  for (int r = 0; r < reps; ++r) {
    for (std::size_t i = 0; i < b.free_times.size(); ++i) {
      out.push_back({b.free_times[i], u});
      if (i < b.pulses.size()) u = rotation_matrix(b.pulses[i].axis, b.pulses[i].angle) * u;
    }
  }
  return out;
}

Mat2 block_rotation(const Block& b) {
  Mat2 u = Mat2::Identity();
  for (const auto& p : b.pulses) u = rotation_matrix(p.axis, p.angle) * u;
  return u;
}

}  // namespace

Mat2 FrameSegment::frame_sz() const { return control.adjoint() * spin_matrix(Axis::z) * control; }

std::vector<FrameSegment> toggling_frames(const SequenceSpec& spec) {
  validate(spec);
  return unroll(base_block(spec), repetitions(spec));
}

int toggling_period(const SequenceSpec& spec) {
  const Mat2 step = block_rotation(base_block(spec));
  Mat2 u = Mat2::Identity();
  for (int n = 1; n <= kMaxPeriodBlocks; ++n) {
    u = step * u;
    if (proportional_to_identity(u)) return n;
  }
  throw InvalidArgument("sequence is not periodic in the toggling frame");
}

MatrixC conjugate_global(const MatrixC& h, std::size_t n_spins, const Mat2& u) {
  // (U^† H) then (U^† (U^† H)^†)^† = U^† H U, all via the single-spin kernel.
  const Mat2 ud = u.adjoint();
  MatrixC x = h;
  kernels::apply_rotation_columns(x, n_spins, ud, Exec::serial);
  MatrixC y = x.adjoint();
  kernels::apply_rotation_columns(y, n_spins, ud, Exec::serial);
  return y.adjoint();
}

AhtResult average_hamiltonian(const SequenceSpec& spec, const MatrixC& h, std::size_t n_spins,
                              int max_order) {
  validate(spec);
  if (static_cast<std::size_t>(h.rows()) != hilbert_dim(n_spins))
    throw ShapeError("Hamiltonian size does not match 2^N");
  AhtResult res;

  if (const auto* lock = std::get_if<SpinLock>(&spec)) {
    // The toggled H is a degree-2 trigonometric polynomial in the lock angle,
    // so an 8-point uniform average is exact.
    constexpr int kPoints = 8;
    res.H0 = MatrixC::Zero(h.rows(), h.cols());
    for (int m = 0; m < kPoints; ++m)
      res.H0 += conjugate_global(h, n_spins, rotation_matrix(Vec3::UnitY(), two_pi * m / kPoints));
    res.H0 /= static_cast<double>(kPoints);
    res.H0 += lock->omega_y * total_spin(n_spins, Axis::y);
    res.period = lock->omega_y != 0.0 ? two_pi / std::abs(lock->omega_y) : 0.0;
    res.blocks = 1;
    return res;
  }

  const Block block = base_block(spec);
  const int n = toggling_period(spec);
  const std::vector<FrameSegment> frames = unroll(block, n);
  double T = 0.0;
  for (const auto& f : frames) T += f.duration;
  if (!(T > 0.0)) throw InvalidArgument("sequence period must be positive");
  res.period = T;
  res.blocks = n;

  res.H0 = MatrixC::Zero(h.rows(), h.cols());
  MatrixC earlier = MatrixC::Zero(h.rows(), h.cols());  // sum_{l<k} t_l H_l
  MatrixC h1 = MatrixC::Zero(h.rows(), h.cols());
  for (const auto& f : frames) {
    if (f.duration == 0.0) continue;
    const MatrixC ht = conjugate_global(h, n_spins, f.control);
    res.H0 += f.duration * ht;
    if (max_order >= 1) {
      h1 += f.duration * (ht * earlier - earlier * ht);
      earlier += f.duration * ht;
    }
  }
  res.H0 /= T;
  if (max_order >= 1) res.H1 = cplx{0.0, -1.0 / (2.0 * T)} * h1;
  return res;
}

WeightMap decompose_weights(const MatrixC& H0, const CouplingMatrix& J,
                            const std::array<Eigen::VectorXd, 3>& fields) {
  const auto n = static_cast<std::size_t>(J.rows());
  if (static_cast<std::size_t>(H0.rows()) != hilbert_dim(n))
    throw ShapeError("H0 size does not match the coupling matrix");
  const Axis axes[3] = {Axis::x, Axis::y, Axis::z};

  std::vector<MatrixC> basis;
  std::vector<int> onsite_slot;
  for (Axis a : axes) basis.push_back(ising(J, a));
  for (int k = 0; k < 3; ++k) {
    if (fields[k].size() == 0 || fields[k].cwiseAbs().maxCoeff() == 0.0) continue;
    if (static_cast<std::size_t>(fields[k].size()) != n) throw ShapeError("field vector length");
    basis.push_back(onsite_field(fields[k], axes[k]));
    onsite_slot.push_back(k);
  }

  const auto m = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd gram(m, m);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) gram(i, j) = (basis[i].adjoint() * basis[j]).trace().real();
    rhs[i] = (basis[i].adjoint() * H0).trace().real();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(gram);
  qr.setThreshold(1e-10);
  if (qr.rank() < m) throw RankError("degenerate Hamiltonian family (check couplings/fields)");
  const Eigen::VectorXd w = qr.solve(rhs);

  MatrixC fit = MatrixC::Zero(H0.rows(), H0.cols());
  for (Eigen::Index i = 0; i < m; ++i) fit += w[i] * basis[i];

  WeightMap out;
  std::array<double, 3> is{w[0], w[1], w[2]};
  std::array<double, 3> sorted = is;
  std::sort(sorted.begin(), sorted.end());
  out.heis = sorted[1];
  for (int k = 0; k < 3; ++k) out.ising[k] = is[k] - out.heis;
  for (std::size_t s = 0; s < onsite_slot.size(); ++s) out.onsite[onsite_slot[s]] = w[3 + s];
  out.residual = (H0 - fit).norm();
  const double norm = H0.norm();
  out.relative_residual = norm > 0.0 ? out.residual / norm : out.residual;
  return out;
}

}  // namespace xysim
