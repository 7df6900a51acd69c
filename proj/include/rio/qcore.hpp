#pragma once

// Dense state-vector primitives over small tensor-factored Hilbert spaces.
//
// Factor ordering convention: the first factor is the most significant digit
// of the flat amplitude index, so for factor_dims [dA, da, db] the amplitude
// of |x, y, z> sits at ((x * da) + y) * db + z.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rio/error.hpp"

namespace rio {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

namespace tol {
inline constexpr double kUnitary = 1e-9;
inline constexpr double kRank = 1e-9;
inline constexpr double kProbFloor = 1e-12;
}  // namespace tol

/// Largest elementwise modulus of M^dagger M - I.
double unitarity_defect(const ComplexMatrix& m);
bool is_unitary(const ComplexMatrix& m, double tolerance = tol::kUnitary);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix identity(int n);
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix matrix_power(const ComplexMatrix& m, int exponent);

/// F = sum_{m,j} e^{2 pi i m j / N} |m><j| / sqrt(N).
ComplexMatrix fourier_matrix(int n);
/// X|k> = |k - 1 mod N>.
ComplexMatrix shift_matrix(int n);
/// Z|k> = e^{2 pi i k / N} |k>.
ComplexMatrix clock_matrix(int n);

/// e^{2 pi i k / N}
Complex root_of_unity(std::int64_t k, int n);

class StateVector {
 public:
  /// Validates that the dims multiply to the amplitude count and that the
  /// vector is normalized within tol::kUnitary.
  StateVector(ComplexVector amplitudes, std::vector<int> factor_dims);

  /// Rescales to unit norm first; throws NotNormalized on a zero vector.
  static StateVector normalized(ComplexVector amplitudes, std::vector<int> factor_dims);
  static StateVector basis(std::vector<int> factor_dims, std::span<const int> digits);
  /// Single-factor computational basis state |k> of dimension n.
  static StateVector basis(int n, int k);

  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  const std::vector<int>& factor_dims() const noexcept { return factor_dims_; }
  int num_factors() const noexcept { return static_cast<int>(factor_dims_.size()); }
  Eigen::Index size() const noexcept { return amplitudes_.size(); }
  double norm() const { return amplitudes_.norm(); }

 private:
  ComplexVector amplitudes_;
  std::vector<int> factor_dims_;
};

StateVector tensor(const StateVector& a, const StateVector& b);

/// Applies `op` to the listed factors without any unitarity check. `targets`
/// are distinct factor indices; their order defines the row/column layout of
/// `op` (first target most significant).
ComplexVector apply_to_amplitudes(const ComplexMatrix& op, const ComplexVector& amplitudes,
                                  std::span<const int> factor_dims, std::span<const int> targets);

/// Throws NonUnitary or DimensionMismatch.
StateVector apply_local(const ComplexMatrix& op, const StateVector& s, std::span<const int> targets);

struct MeasurementBranch {
  int outcome;
  double probability;
  StateVector post_state;
};

/// Every outcome with probability above tol::kProbFloor, in increasing
/// outcome order. The measured factor is left in |outcome>.
std::vector<MeasurementBranch> measure_computational(const StateVector& s, int target);

/// Reorders tensor factors: factor i of the result is factor order[i] of `s`.
StateVector permute_factors(const StateVector& s, std::span<const int> order);

struct SchmidtForm {
  std::vector<double> coefficients;  // nonincreasing
  ComplexMatrix left;                // columns: orthonormal vectors on the left factors
  ComplexMatrix right;               // columns: orthonormal vectors on the right factors
  int rank = 0;
  std::vector<int> left_factors;
  std::vector<int> right_factors;

  /// sum_i h_i |l_i> (x) |r_i>, with factors ordered left_factors ++ right_factors.
  ComplexVector reconstruct() const;
};

/// Schmidt decomposition across the cut (left_factors | everything else).
SchmidtForm schmidt(const StateVector& s, std::span<const int> left_factors);

/// Pure state of one factor when `s` is a product across that factor,
/// returned with arbitrary global phase. Throws InvalidArgument if entangled.
StateVector extract_factor(const StateVector& s, int factor);

/// |<a|b>|; equals 1 exactly when the states agree up to global phase.
double fidelity(const ComplexVector& a, const ComplexVector& b);
double fidelity(const StateVector& a, const StateVector& b);

/// Haar-distributed unitary (QR of a complex Ginibre matrix, phase-fixed).
ComplexMatrix haar_unitary(int n, std::mt19937_64& rng);
ComplexVector random_state(int n, std::mt19937_64& rng);
/// Uniform phase e^{i theta}.
Complex random_phase(std::mt19937_64& rng);

}  // namespace rio
