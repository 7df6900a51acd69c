#pragma once

// Remote implementation of U = sum_i c_i A_i where the blocks A_i are public
// (Alice knows them) and the unimodular phases c_i are private to Bob.
//
// Registers follow standard_registers(): [A, a, b] with dims [D, N, N], where
// N is the number of blocks. The resource on (a, b) is maximally entangled
// with Schmidt rank N.
//
//   1. Alice: P = sum_i P_i (x) X^i on (A, a), P_i projector onto the input
//      support of A_i.
//   2. Alice measures a -> l, sends l. Bob applies X^l on b.
//   3. Bob: C = sum_i c_i |i><i| on b.
//   4. Bob: Fourier F on b, measures b -> m, sends m.
//   5. Alice: R_m = sum_j e^{-2 pi i m j / N} sum_k |v_k^(j)><u_k^(j)| on A.

#include <random>
#include <vector>

#include "rio/locc.hpp"
#include "rio/protocol_run.hpp"
#include "rio/qcore.hpp"

namespace rio::wang {

/// Singular-vector data of one block: A = sum_k |v_k><u_k|.
struct BlockBasis {
  ComplexMatrix u;  // D x r, input-side vectors
  ComplexMatrix v;  // D x r, output-side vectors
  int rank() const { return static_cast<int>(u.cols()); }
};

/// The public structure {A_i}. Carries no phase information.
class PartitionedOperation {
 public:
  int dim() const { return dim_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const std::vector<ComplexMatrix>& blocks() const { return blocks_; }
  const std::vector<BlockBasis>& bases() const { return bases_; }
  std::vector<int> ranks() const;
  /// P_i = sum_k |u_k^(i)><u_k^(i)|
  ComplexMatrix projector(int i) const;

 private:
  friend PartitionedOperation validate_partition(std::vector<ComplexMatrix> blocks);
  int dim_ = 0;
  std::vector<ComplexMatrix> blocks_;
  std::vector<BlockBasis> bases_;
};

/// Checks A_i^dag A_j = 0 (i != j) and sum A_i^dag A_i = I, then extracts each
/// block's singular vectors. Throws DimensionMismatch, OverlappingBlocks,
/// IncompleteBlocks or EmptyBlock.
PartitionedOperation validate_partition(std::vector<ComplexMatrix> blocks);

/// Bob's private coefficients c_i, each of modulus one.
class PhaseVector {
 public:
  explicit PhaseVector(std::vector<Complex> phases);
  static PhaseVector ones(int n);

  int size() const { return static_cast<int>(phases_.size()); }
  const std::vector<Complex>& values() const { return phases_; }

 private:
  std::vector<Complex> phases_;
};

/// sum_i c_i A_i
ComplexMatrix target_unitary(const PartitionedOperation& p, const PhaseVector& c);

// Alice's operators: built from the partition alone.
ComplexMatrix controlled_shift(const PartitionedOperation& p);
ComplexMatrix recovery(const PartitionedOperation& p, int m);

// Bob's operator.
ComplexMatrix phase_gate(const PhaseVector& c);

struct WangStepSet {
  ComplexMatrix P;           // on (A, a)
  ComplexMatrix correction;  // X^l on b
  ComplexMatrix C;           // on b
  ComplexMatrix F;           // on b
  ComplexMatrix R;           // R_m on A
};

WangStepSet build_steps(const PartitionedOperation& p, const PhaseVector& c, int l, int m);

ResourceState resource(const PartitionedOperation& p);
StateVector initial_state(const PartitionedOperation& p, const StateVector& input);
Program program(const PartitionedOperation& p, const PhaseVector& c);

/// Runs all N^2 branches; each output is compared with (sum c_i A_i)|input>.
ProtocolRun run_wang(const PartitionedOperation& p, const PhaseVector& c, const StateVector& input,
                     RunOptions options = {});

/// Blocks |i><i| for i < n; the diagonal special case.
PartitionedOperation diagonal_partition(int n);

/// Random valid partition: two Haar bases split into `num_blocks` groups of
/// random nonempty sizes. Requires 1 <= num_blocks <= dim.
PartitionedOperation random_partition(int dim, int num_blocks, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Arbitrary unitaries: U = u d v with d diagonal and unimodular.

struct SvdRemotePlan {
  ComplexMatrix u;
  ComplexMatrix v;
  PhaseVector d;                    // diagonal entries of d, Bob's secret
  PartitionedOperation diagonal;    // diagonal partition of size D
};

/// Throws NonUnitary.
SvdRemotePlan svd_remote(const ComplexMatrix& target);
/// v on A, the diagonal program for d, then u on A.
Program svd_remote_program(const SvdRemotePlan& plan);
ProtocolRun run_svd_remote(const SvdRemotePlan& plan, const StateVector& input);

// ---------------------------------------------------------------------------
// Operator-valued trace of one branch, for diagrammatic rendering.

/// Each cell is an operator K on H_A such that the (a, b) component of the
/// joint state equals K|Psi>. Measurements rescale by sqrt(N) so that rows
/// read P_i|Psi> rather than P_i|Psi>/sqrt(N).
struct TraceStage {
  std::string title;
  std::vector<int> rows;  // values of a
  std::vector<int> cols;  // values of b
  std::vector<std::vector<ComplexMatrix>> cells;
};

std::vector<TraceStage> trace(const PartitionedOperation& p, const PhaseVector& c, int l, int m);

}  // namespace rio::wang
