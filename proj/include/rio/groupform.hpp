#pragma once

// Remote implementation of U = sum_f c(f) U(f) where {U(f)} is a projective
// representation of a finite group G with factor system mu:
//     U(f) U(g) = mu(f, g) U(fg).
//
// Registers [A, a, b] with dims [D, |G|, |G|]; ancilla basis states are
// labelled by group element indices.
//
//   1. Alice: P = sum_f U(f) (x) |f><f| on (A, a).
//   2. Alice: F on a, measures a -> g, sends g.
//   3. Bob: Z(g)|f> = <g|F|f>^{-1} / sqrt(|G|) |f> on b.
//   4. Bob: M = sum_f c(f) R(f), R(f) = sum_g mu(g, f) |g><gf|; measures b -> h,
//      sends h.
//   5. Alice: U(h^{-1}) on A.

#include <optional>
#include <string>
#include <vector>

#include "rio/locc.hpp"
#include "rio/protocol_run.hpp"
#include "rio/qcore.hpp"

namespace rio::groupform {

class FiniteGroup {
 public:
  /// Validates closure, associativity, a two-sided identity, inverses and the
  /// Latin-square property. Throws InvalidGroup.
  FiniteGroup(std::vector<std::vector<int>> cayley, std::vector<std::string> names = {});

  static FiniteGroup cyclic(int n);
  /// Z2 x Z2 with element (a, b) at index 2a + b, named "00", "01", "10", "11".
  static FiniteGroup klein_four();
  /// D3: r^k s^j at index k + 3j; (r^a s^b)(r^c s^d) = r^{a + (-1)^b c} s^{b+d}.
  static FiniteGroup dihedral3();

  int order() const { return static_cast<int>(table_.size()); }
  int multiply(int f, int g) const { return table_[f][g]; }
  int inverse(int f) const { return inverse_[f]; }
  int identity() const { return identity_; }
  const std::vector<std::vector<int>>& cayley() const { return table_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  std::vector<std::string> names_;
  int identity_ = 0;
};

using FactorSystem = ComplexMatrix;  // mu(f, g) at row f, column g

class ProjectiveRep {
 public:
  ProjectiveRep(FiniteGroup group, std::vector<ComplexMatrix> matrices, FactorSystem mu)
      : group_(std::move(group)), matrices_(std::move(matrices)), mu_(std::move(mu)) {}

  const FiniteGroup& group() const { return group_; }
  const std::vector<ComplexMatrix>& matrices() const { return matrices_; }
  const ComplexMatrix& matrix(int f) const { return matrices_.at(f); }
  const FactorSystem& mu() const { return mu_; }
  int dim() const { return matrices_.empty() ? 0 : static_cast<int>(matrices_.front().rows()); }

 private:
  FiniteGroup group_;
  std::vector<ComplexMatrix> matrices_;
  FactorSystem mu_;
};

/// Checks unitarity of each U(f), U(f)U(g) = mu(f,g)U(fg), |mu| = 1 and the
/// inverse identity mu(h^-1, f) mu(h, h^-1 f) = mu(h, h^-1) mu(e, f), which is
/// 1 for reps normalized so that U(h)U(h^-1) = I.
/// Throws NotARepresentation, NonUnimodularFactor or DimensionMismatch.
const ProjectiveRep& validate_rep(const ProjectiveRep& rep);

/// Reads mu(f, g) off the matrices: U(f)U(g) U(fg)^dag / dim.
FactorSystem infer_factor_system(const FiniteGroup& group, const std::vector<ComplexMatrix>& matrices);

/// U(k) = diag(e^{2 pi i k j / N})_j, mu = 1. Contains each character once.
ProjectiveRep cyclic_characters(int n);
/// U(00) = I, U(01) = X, U(10) = Z, U(11) = XZ with the factor system read off.
ProjectiveRep pauli_rep();
/// Trivial + sign + two-dimensional irrep of D3, a 4-dimensional ordinary rep.
ProjectiveRep dihedral3_regular_type();

/// sum_f c(f) U(f)
ComplexMatrix combine(const ProjectiveRep& rep, const std::vector<Complex>& c);

/// R(f) = sum_g mu(g, f) |g><gf|
ComplexMatrix right_translation(const ProjectiveRep& rep, int f);

struct GroupStepSet {
  ComplexMatrix P;         // on (A, a)
  ComplexMatrix F;         // on a
  ComplexMatrix Z;         // Z(g) on b
  ComplexMatrix M;         // on b
  ComplexMatrix recovery;  // U(h^-1) on A
};

/// Throws NonUnitaryTarget, NonUnitaryM or SingularTransform.
GroupStepSet build_group_steps(const ProjectiveRep& rep, const std::vector<Complex>& c, int g, int h);

/// Z(g) for an arbitrary ancilla transform; SingularTransform on zero entries.
ComplexMatrix z_correction(const ComplexMatrix& transform, int g);

Program program(const ProjectiveRep& rep, const std::vector<Complex>& c);
ProtocolRun run_group_protocol(const ProjectiveRep& rep, const std::vector<Complex>& c, const StateVector& input,
                               RunOptions options = {});

// ---------------------------------------------------------------------------
// Coefficients from a block-diagonal target

struct IrrepBlock {
  std::vector<ComplexMatrix> matrices;  // D^(lambda)(f) per group element
  int dim() const { return matrices.empty() ? 0 : static_cast<int>(matrices.front().rows()); }
};

struct BlockDecomposition {
  /// Columns form the basis in which U(f) = (+)_lambda D^(lambda)(f):
  /// basis^dag U(f) basis is block diagonal.
  ComplexMatrix basis;
  std::vector<IrrepBlock> irreps;

  std::vector<int> offsets() const;
};

/// Checks basis unitarity, that the blocks reproduce every U(f), that each
/// irrep appears once (sum d^2 = |G| and the orthogonality relations hold).
/// Throws MultiplicityNotOne, NotBlockDiagonal or DimensionMismatch.
void validate_decomposition(const ProjectiveRep& rep, const BlockDecomposition& decomp);

/// Standard-basis decomposition for the built-in reps.
BlockDecomposition standard_decomposition(const ProjectiveRep& rep);

/// c(f) = sum_lambda (d_lambda / |G|) sum_jk conj(D_jk^(lambda)(f)) R_jk^(lambda).
/// Throws NotBlockDiagonal or MultiplicityNotOne.
std::vector<Complex> coefficients_from_unitary(const ComplexMatrix& target, const ProjectiveRep& rep,
                                               const BlockDecomposition& decomp);

/// Haar-random unitary on each block, expressed in the standard basis.
ComplexMatrix random_block_unitary(const BlockDecomposition& decomp, std::mt19937_64& rng);

}  // namespace rio::groupform
