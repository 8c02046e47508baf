#pragma once

#include <array>
#include <vector>

#include "xysim/hamiltonian.hpp"
#include "xysim/sequences.hpp"

namespace xysim {

// Free-evolution segment of an ideal-pulse sequence with the accumulated
// single-spin control unitary U (pulses applied so far, latest on the left).
struct FrameSegment {
  double duration = 0.0;
  Mat2 control = Mat2::Identity();

  /// U^† S_z U, the toggling-frame S_z of this segment.
  Mat2 frame_sz() const;
};

/// Segments over all k repetitions (one echo for SpinEcho).
/// Finite-mode, spin-lock and DTC sequences are rejected (InvalidArgument).
std::vector<FrameSegment> toggling_frames(const SequenceSpec& spec);

/// Smallest repetition count of the base block whose net rotation is a
/// multiple of the identity; throws InvalidArgument if none up to 64.
int toggling_period(const SequenceSpec& spec);

struct AhtResult {
  MatrixC H0;
  MatrixC H1;          // empty when not available (continuous drive)
  double period = 0.0;
  int blocks = 0;      // base blocks per toggling period
};

/// Zeroth and (max_order >= 1) first-order Magnus terms over one toggling period.
/// Spin-lock: H0 = Omega sum S_y + rotation average of H about y.
AhtResult average_hamiltonian(const SequenceSpec& spec, const MatrixC& h, std::size_t n_spins,
                              int max_order = 1);

/// U^† H U with U the tensor power of `u`.
MatrixC conjugate_global(const MatrixC& h, std::size_t n_spins, const Mat2& u);

struct WeightMap {
  double heis = 0.0;
  std::array<double, 3> ising{};   // x, y, z
  std::array<double, 3> onsite{};  // x, y, z, relative to the supplied field vectors
  double residual = 0.0;           // ||H0 - fit||_F
  double relative_residual = 0.0;  // residual / ||H0||_F
};

/// Frobenius least squares on {Ising^x,y,z, onsite^x,y,z}. The Heisenberg
/// weight is the median Ising weight, which is then removed from all three
/// (the minimal-L1 representation). Zero field vectors are skipped.
WeightMap decompose_weights(const MatrixC& H0, const CouplingMatrix& J,
                            const std::array<Eigen::VectorXd, 3>& fields);

}  // namespace xysim
