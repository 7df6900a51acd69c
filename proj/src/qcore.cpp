#include "rio/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace rio {

namespace {

std::int64_t product(std::span<const int> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::int64_t{1}, std::multiplies<>());
}

std::vector<std::int64_t> strides_of(std::span<const int> dims) {
  std::vector<std::int64_t> strides(dims.size(), 1);
  for (int f = static_cast<int>(dims.size()) - 2; f >= 0; --f) strides[f] = strides[f + 1] * dims[f + 1];
  return strides;
}

void check_dims(std::span<const int> dims) {
  if (dims.empty()) throw Error(ErrorKind::DimensionMismatch, "state needs at least one factor");
  for (int d : dims)
    if (d < 1) throw Error(ErrorKind::DimensionMismatch, "factor dimension must be positive");
}

void check_targets(std::span<const int> dims, std::span<const int> targets) {
  std::vector<bool> seen(dims.size(), false);
  for (int t : targets) {
    if (t < 0 || t >= static_cast<int>(dims.size()))
      throw Error(ErrorKind::DimensionMismatch, "target factor " + std::to_string(t) + " out of range");
    if (seen[t]) throw Error(ErrorKind::DimensionMismatch, "duplicate target factor " + std::to_string(t));
    seen[t] = true;
  }
}

}  // namespace

double unitarity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) return std::numeric_limits<double>::infinity();
  ComplexMatrix g = m.adjoint() * m;
  g.diagonal().array() -= Complex(1.0, 0.0);
  return g.cwiseAbs().maxCoeff();
}

bool is_unitary(const ComplexMatrix& m, double tolerance) { return unitarity_defect(m) <= tolerance; }

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

ComplexMatrix identity(int n) { return ComplexMatrix::Identity(n, n); }

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix matrix_power(const ComplexMatrix& m, int exponent) {
  if (exponent < 0) return matrix_power(m.adjoint(), -exponent);
  ComplexMatrix out = ComplexMatrix::Identity(m.rows(), m.cols());
  for (int k = 0; k < exponent; ++k) out = out * m;
  return out;
}

Complex root_of_unity(std::int64_t k, int n) {
  const std::int64_t r = ((k % n) + n) % n;
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / n);
}

ComplexMatrix fourier_matrix(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "Fourier dimension must be >= 1");
  ComplexMatrix f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int m = 0; m < n; ++m)
    for (int j = 0; j < n; ++j) f(m, j) = scale * root_of_unity(static_cast<std::int64_t>(m) * j, n);
  return f;
}

ComplexMatrix shift_matrix(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "shift dimension must be >= 1");
  ComplexMatrix x = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) x((k - 1 + n) % n, k) = 1.0;
  return x;
}

ComplexMatrix clock_matrix(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "clock dimension must be >= 1");
  ComplexMatrix z = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) z(k, k) = root_of_unity(k, n);
  return z;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(ComplexVector amplitudes, std::vector<int> factor_dims)
    : amplitudes_(std::move(amplitudes)), factor_dims_(std::move(factor_dims)) {
  check_dims(factor_dims_);
  if (product(factor_dims_) != amplitudes_.size())
    throw Error(ErrorKind::DimensionMismatch, "factor dims do not multiply to the amplitude count");
  if (std::abs(amplitudes_.norm() - 1.0) > tol::kUnitary)
    throw Error(ErrorKind::NotNormalized, "state norm is " + std::to_string(amplitudes_.norm()));
}

StateVector StateVector::normalized(ComplexVector amplitudes, std::vector<int> factor_dims) {
  const double n = amplitudes.norm();
  if (n <= tol::kProbFloor) throw Error(ErrorKind::NotNormalized, "cannot normalize a zero vector");
  amplitudes /= n;
  return StateVector(std::move(amplitudes), std::move(factor_dims));
}

StateVector StateVector::basis(std::vector<int> factor_dims, std::span<const int> digits) {
  check_dims(factor_dims);
  if (digits.size() != factor_dims.size())
    throw Error(ErrorKind::DimensionMismatch, "one digit per factor required");
  std::int64_t index = 0;
  for (std::size_t f = 0; f < digits.size(); ++f) {
    if (digits[f] < 0 || digits[f] >= factor_dims[f])
      throw Error(ErrorKind::DimensionMismatch, "basis digit out of range");
    index = index * factor_dims[f] + digits[f];
  }
  ComplexVector amps = ComplexVector::Zero(product(factor_dims));
  amps(index) = 1.0;
  return StateVector(std::move(amps), std::move(factor_dims));
}

StateVector StateVector::basis(int n, int k) {
  const int digit[] = {k};
  return basis(std::vector<int>{n}, digit);
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  ComplexVector amps(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) amps.segment(i * b.size(), b.size()) = a.amplitudes()(i) * b.amplitudes();
  std::vector<int> dims = a.factor_dims();
  dims.insert(dims.end(), b.factor_dims().begin(), b.factor_dims().end());
  return StateVector(std::move(amps), std::move(dims));
}

// ---------------------------------------------------------------------------
// Local application and measurement

ComplexVector apply_to_amplitudes(const ComplexMatrix& op, const ComplexVector& amplitudes,
                                  std::span<const int> factor_dims, std::span<const int> targets) {
  check_targets(factor_dims, targets);
  if (targets.empty()) throw Error(ErrorKind::DimensionMismatch, "no target factors");
  std::int64_t target_dim = 1;
  for (int t : targets) target_dim *= factor_dims[t];
  if (op.rows() != target_dim || op.cols() != target_dim)
    throw Error(ErrorKind::DimensionMismatch, "operator is " + std::to_string(op.rows()) + "x" +
                                                  std::to_string(op.cols()) + ", targets span " +
                                                  std::to_string(target_dim));
  if (product(factor_dims) != amplitudes.size())
    throw Error(ErrorKind::DimensionMismatch, "amplitude count does not match factor dims");

  const auto strides = strides_of(factor_dims);

  // Flat offsets of every target sub-index, first target most significant.
  std::vector<std::int64_t> offsets(target_dim, 0);
  for (std::int64_t t = 0; t < target_dim; ++t) {
    std::int64_t rem = t;
    for (int k = static_cast<int>(targets.size()) - 1; k >= 0; --k) {
      const int d = factor_dims[targets[k]];
      offsets[t] += (rem % d) * strides[targets[k]];
      rem /= d;
    }
  }

  std::vector<bool> is_target(factor_dims.size(), false);
  for (int t : targets) is_target[t] = true;

  ComplexVector out = ComplexVector::Zero(amplitudes.size());
  ComplexVector gathered(target_dim);
  for (std::int64_t base = 0; base < amplitudes.size(); ++base) {
    bool on_zero_target = true;
    for (std::size_t f = 0; f < factor_dims.size() && on_zero_target; ++f)
      if (is_target[f] && (base / strides[f]) % factor_dims[f] != 0) on_zero_target = false;
    if (!on_zero_target) continue;
    for (std::int64_t t = 0; t < target_dim; ++t) gathered(t) = amplitudes(base + offsets[t]);
    const ComplexVector mapped = op * gathered;
    for (std::int64_t t = 0; t < target_dim; ++t) out(base + offsets[t]) = mapped(t);
  }
  return out;
}

StateVector apply_local(const ComplexMatrix& op, const StateVector& s, std::span<const int> targets) {
  if (op.rows() != op.cols()) throw Error(ErrorKind::DimensionMismatch, "operator must be square");
  const double defect = unitarity_defect(op);
  if (defect > tol::kUnitary)
    throw Error(ErrorKind::NonUnitary, "operator unitarity defect " + std::to_string(defect));
  ComplexVector out = apply_to_amplitudes(op, s.amplitudes(), s.factor_dims(), targets);
  return StateVector::normalized(std::move(out), s.factor_dims());
}

std::vector<MeasurementBranch> measure_computational(const StateVector& s, int target) {
  const int span_target[] = {target};
  check_targets(s.factor_dims(), span_target);
  const auto strides = strides_of(s.factor_dims());
  const int d = s.factor_dims()[target];

  std::vector<MeasurementBranch> branches;
  for (int k = 0; k < d; ++k) {
    ComplexVector projected = ComplexVector::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if ((i / strides[target]) % d == k) projected(i) = s.amplitudes()(i);
    const double p = projected.squaredNorm();
    if (p <= tol::kProbFloor) continue;
    branches.push_back({k, p, StateVector::normalized(std::move(projected), s.factor_dims())});
  }
  return branches;
}

StateVector permute_factors(const StateVector& s, std::span<const int> order) {
  const auto& dims = s.factor_dims();
  if (order.size() != dims.size()) throw Error(ErrorKind::DimensionMismatch, "permutation must list every factor");
  std::vector<int> sorted(order.begin(), order.end());
  std::sort(sorted.begin(), sorted.end());
  for (int f = 0; f < static_cast<int>(sorted.size()); ++f)
    if (sorted[f] != f) throw Error(ErrorKind::DimensionMismatch, "not a permutation of the factors");

  std::vector<int> new_dims(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) new_dims[i] = dims[order[i]];
  const auto old_strides = strides_of(dims);
  const auto new_strides = strides_of(new_dims);

  ComplexVector out(s.size());
  for (Eigen::Index j = 0; j < s.size(); ++j) {
    std::int64_t old_index = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
      old_index += ((j / new_strides[i]) % new_dims[i]) * old_strides[order[i]];
    out(j) = s.amplitudes()(old_index);
  }
  return StateVector(std::move(out), std::move(new_dims));
}

// ---------------------------------------------------------------------------
// Schmidt decomposition

ComplexVector SchmidtForm::reconstruct() const {
  ComplexVector out = ComplexVector::Zero(left.rows() * right.rows());
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const ComplexVector l = left.col(static_cast<Eigen::Index>(i));
    const ComplexVector r = right.col(static_cast<Eigen::Index>(i));
    for (Eigen::Index x = 0; x < l.size(); ++x) out.segment(x * r.size(), r.size()) += coefficients[i] * l(x) * r;
  }
  return out;
}

SchmidtForm schmidt(const StateVector& s, std::span<const int> left_factors) {
  const int nf = s.num_factors();
  check_targets(s.factor_dims(), left_factors);

  SchmidtForm form;
  form.left_factors.assign(left_factors.begin(), left_factors.end());
  std::sort(form.left_factors.begin(), form.left_factors.end());
  for (int f = 0; f < nf; ++f)
    if (!std::binary_search(form.left_factors.begin(), form.left_factors.end(), f)) form.right_factors.push_back(f);

  std::vector<int> order = form.left_factors;
  order.insert(order.end(), form.right_factors.begin(), form.right_factors.end());
  const StateVector permuted = permute_factors(s, order);

  std::int64_t dim_left = 1;
  for (int f : form.left_factors) dim_left *= s.factor_dims()[f];
  const std::int64_t dim_right = s.size() / dim_left;

  // Row-major reshape: M(x, y) = psi[x * dim_right + y].
  ComplexMatrix m(dim_left, dim_right);
  for (std::int64_t x = 0; x < dim_left; ++x)
    for (std::int64_t y = 0; y < dim_right; ++y) m(x, y) = permuted.amplitudes()(x * dim_right + y);

  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  form.coefficients.assign(sv.data(), sv.data() + sv.size());
  form.left = svd.matrixU();
  // psi = sum_i s_i u_i (x) conj(v_i)
  form.right = svd.matrixV().conjugate();
  form.rank = static_cast<int>(
      std::count_if(form.coefficients.begin(), form.coefficients.end(), [](double h) { return h > tol::kRank; }));
  return form;
}

StateVector extract_factor(const StateVector& s, int factor) {
  const int left[] = {factor};
  const SchmidtForm form = schmidt(s, left);
  if (form.rank != 1)
    throw Error(ErrorKind::InvalidArgument,
                "factor " + std::to_string(factor) + " is entangled (Schmidt rank " + std::to_string(form.rank) + ")");
  return StateVector::normalized(form.left.col(0), {s.factor_dims()[factor]});
}

double fidelity(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "fidelity of vectors with different sizes");
  return std::abs(a.dot(b));
}

double fidelity(const StateVector& a, const StateVector& b) { return fidelity(a.amplitudes(), b.amplitudes()); }

// ---------------------------------------------------------------------------
// Random instances

ComplexMatrix haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = Complex(normal(rng), normal(rng)) / std::sqrt(2.0);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

ComplexVector random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(normal(rng), normal(rng));
  return v / v.norm();
}

Complex random_phase(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  return std::polar(1.0, angle(rng));
}

}  // namespace rio
