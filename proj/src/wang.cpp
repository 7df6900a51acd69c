#include "rio/wang.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

namespace rio::wang {

namespace {

// Singular values of a valid block are 1 on its support; accumulated
// rounding in the two structural checks stays far below this.
constexpr double kIsometryTol = 1e-7;

}  // namespace

std::vector<int> PartitionedOperation::ranks() const {
  std::vector<int> r;
  r.reserve(bases_.size());
  for (const auto& b : bases_) r.push_back(b.rank());
  return r;
}

ComplexMatrix PartitionedOperation::projector(int i) const {
  const auto& u = bases_.at(i).u;
  return u * u.adjoint();
}

PartitionedOperation validate_partition(std::vector<ComplexMatrix> blocks) {
  if (blocks.empty()) throw Error(ErrorKind::IncompleteBlocks, "partition has no blocks");
  const Eigen::Index dim = blocks.front().rows();
  for (const auto& a : blocks)
    if (a.rows() != dim || a.cols() != dim || dim == 0)
      throw Error(ErrorKind::DimensionMismatch, "blocks must be square and share one dimension");

  const int n = static_cast<int>(blocks.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double overlap = (blocks[i].adjoint() * blocks[j]).cwiseAbs().maxCoeff();
      if (overlap > tol::kUnitary)
        throw Error(ErrorKind::OverlappingBlocks, "A_" + std::to_string(i) + "^dag A_" + std::to_string(j) +
                                                      " has max entry " + std::to_string(overlap));
    }

  ComplexMatrix gram = ComplexMatrix::Zero(dim, dim);
  for (const auto& a : blocks) gram += a.adjoint() * a;
  const double incompleteness = max_abs_diff(gram, ComplexMatrix::Identity(dim, dim));
  if (incompleteness > tol::kUnitary)
    throw Error(ErrorKind::IncompleteBlocks, "sum A_i^dag A_i deviates from I by " + std::to_string(incompleteness));

  PartitionedOperation p;
  p.dim_ = static_cast<int>(dim);
  for (int i = 0; i < n; ++i) {
    Eigen::JacobiSVD<ComplexMatrix> svd(blocks[i], Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    int r = 0;
    while (r < s.size() && s(r) > tol::kRank) ++r;
    if (r == 0) throw Error(ErrorKind::EmptyBlock, "block " + std::to_string(i) + " is zero");
    for (int k = 0; k < r; ++k)
      if (std::abs(s(k) - 1.0) > kIsometryTol)
        throw Error(ErrorKind::IncompleteBlocks, "block " + std::to_string(i) + " is not a partial isometry");
    BlockBasis basis{svd.matrixV().leftCols(r), svd.matrixU().leftCols(r)};

    // Any SVD basis is acceptable; confirm it rebuilds the block.
    if (max_abs_diff(basis.v * basis.u.adjoint(), blocks[i]) > tol::kUnitary)
      throw Error(ErrorKind::IncompleteBlocks, "block " + std::to_string(i) + " SVD does not rebuild the block");
    p.bases_.push_back(std::move(basis));
  }

  ComplexMatrix all_u(dim, dim), all_v(dim, dim);
  Eigen::Index col = 0;
  for (const auto& b : p.bases_) {
    if (col + b.rank() > dim) throw Error(ErrorKind::OverlappingBlocks, "block ranks exceed the dimension");
    all_u.middleCols(col, b.rank()) = b.u;
    all_v.middleCols(col, b.rank()) = b.v;
    col += b.rank();
  }
  if (col != dim) throw Error(ErrorKind::IncompleteBlocks, "block ranks sum to " + std::to_string(col));
  if (!is_unitary(all_u) || !is_unitary(all_v))
    throw Error(ErrorKind::OverlappingBlocks, "block singular vectors are not jointly orthonormal");

  p.blocks_ = std::move(blocks);
  return p;
}

PhaseVector::PhaseVector(std::vector<Complex> phases) : phases_(std::move(phases)) {
  if (phases_.empty()) throw Error(ErrorKind::InvalidArgument, "phase vector is empty");
  for (std::size_t i = 0; i < phases_.size(); ++i)
    if (std::abs(std::abs(phases_[i]) - 1.0) > tol::kUnitary)
      throw Error(ErrorKind::InvalidArgument, "phase c_" + std::to_string(i) + " is not unimodular");
}

PhaseVector PhaseVector::ones(int n) { return PhaseVector(std::vector<Complex>(n, Complex(1.0, 0.0))); }

namespace {

void check_sizes(const PartitionedOperation& p, const PhaseVector& c) {
  if (p.num_blocks() != c.size())
    throw Error(ErrorKind::DimensionMismatch, std::to_string(c.size()) + " phases for " +
                                                  std::to_string(p.num_blocks()) + " blocks");
}

}  // namespace

ComplexMatrix target_unitary(const PartitionedOperation& p, const PhaseVector& c) {
  check_sizes(p, c);
  ComplexMatrix u = ComplexMatrix::Zero(p.dim(), p.dim());
  for (int i = 0; i < p.num_blocks(); ++i) u += c.values()[i] * p.blocks()[i];
  return u;
}

ComplexMatrix controlled_shift(const PartitionedOperation& p) {
  const int n = p.num_blocks();
  const ComplexMatrix x = shift_matrix(n);
  ComplexMatrix out = ComplexMatrix::Zero(p.dim() * n, p.dim() * n);
  ComplexMatrix x_power = identity(n);
  for (int i = 0; i < n; ++i) {
    out += tensor(p.projector(i), x_power);
    x_power = x_power * x;
  }
  return out;
}

ComplexMatrix recovery(const PartitionedOperation& p, int m) {
  const int n = p.num_blocks();
  ComplexMatrix r = ComplexMatrix::Zero(p.dim(), p.dim());
  for (int j = 0; j < n; ++j) {
    const auto& b = p.bases()[j];
    r += root_of_unity(-static_cast<std::int64_t>(m) * j, n) * (b.v * b.u.adjoint());
  }
  return r;
}

ComplexMatrix phase_gate(const PhaseVector& c) {
  ComplexMatrix gate = ComplexMatrix::Zero(c.size(), c.size());
  for (int i = 0; i < c.size(); ++i) gate(i, i) = c.values()[i];
  return gate;
}

WangStepSet build_steps(const PartitionedOperation& p, const PhaseVector& c, int l, int m) {
  check_sizes(p, c);
  const int n = p.num_blocks();
  if (l < 0 || l >= n || m < 0 || m >= n)
    throw Error(ErrorKind::InvalidArgument, "outcomes must lie in [0, " + std::to_string(n) + ")");
  return WangStepSet{controlled_shift(p), matrix_power(shift_matrix(n), l), phase_gate(c), fourier_matrix(n),
                     recovery(p, m)};
}

ResourceState resource(const PartitionedOperation& p) { return maximally_entangled(p.num_blocks()); }

StateVector initial_state(const PartitionedOperation& p, const StateVector& input) {
  if (input.num_factors() != 1 || input.factor_dims()[0] != p.dim())
    throw Error(ErrorKind::DimensionMismatch, "input must be a single register of dimension " + std::to_string(p.dim()));
  return tensor(input, resource(p).state());
}

Program program(const PartitionedOperation& p, const PhaseVector& c) {
  check_sizes(p, c);
  const int n = p.num_blocks();
  Program prog{standard_registers(), {}};
  auto& s = prog.steps;
  s.emplace_back(fixed_op(Party::Alice, "P", {0, 1}, controlled_shift(p)));
  s.emplace_back(MeasureStep{Party::Alice, 1, "l"});
  s.emplace_back(SendStep{Party::Alice, "l"});
  s.emplace_back(LocalStep{Party::Bob, "X^l", {2}, {"l"}, [x = shift_matrix(n)](const Outcomes& o) {
                             return matrix_power(x, o.at("l"));
                           }});
  s.emplace_back(fixed_op(Party::Bob, "C", {2}, phase_gate(c)));
  s.emplace_back(fixed_op(Party::Bob, "F", {2}, fourier_matrix(n)));
  s.emplace_back(MeasureStep{Party::Bob, 2, "m"});
  s.emplace_back(SendStep{Party::Bob, "m"});
  std::vector<ComplexMatrix> recoveries;
  for (int m = 0; m < n; ++m) recoveries.push_back(recovery(p, m));
  s.emplace_back(LocalStep{Party::Alice, "R_m", {0}, {"m"}, [r = std::move(recoveries)](const Outcomes& o) {
                             return r.at(o.at("m"));
                           }});
  return prog;
}

ProtocolRun run_wang(const PartitionedOperation& p, const PhaseVector& c, const StateVector& input,
                     RunOptions options) {
  const ComplexMatrix u = target_unitary(p, c);
  const StateVector init = initial_state(p, input);
  StateVector expected = StateVector::normalized(u * input.amplitudes(), {p.dim()});
  return evaluate_branches(run_protocol(program(p, c), init, options), 0, std::move(expected));
}

PartitionedOperation diagonal_partition(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 1");
  std::vector<ComplexMatrix> blocks;
  for (int i = 0; i < n; ++i) {
    ComplexMatrix a = ComplexMatrix::Zero(n, n);
    a(i, i) = 1.0;
    blocks.push_back(std::move(a));
  }
  return validate_partition(std::move(blocks));
}

PartitionedOperation random_partition(int dim, int num_blocks, std::mt19937_64& rng) {
  if (num_blocks < 1 || num_blocks > dim)
    throw Error(ErrorKind::InvalidArgument, "need 1 <= blocks <= dim");
  // Random composition of dim into num_blocks positive parts.
  std::vector<int> cuts(dim - 1);
  std::iota(cuts.begin(), cuts.end(), 1);
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(num_blocks - 1);
  std::sort(cuts.begin(), cuts.end());
  cuts.insert(cuts.begin(), 0);
  cuts.push_back(dim);

  const ComplexMatrix in_basis = haar_unitary(dim, rng);
  const ComplexMatrix out_basis = haar_unitary(dim, rng);
  std::vector<ComplexMatrix> blocks;
  for (int i = 0; i < num_blocks; ++i) {
    const int width = cuts[i + 1] - cuts[i];
    blocks.push_back(out_basis.middleCols(cuts[i], width) * in_basis.middleCols(cuts[i], width).adjoint());
  }
  return validate_partition(std::move(blocks));
}

// ---------------------------------------------------------------------------
// SVD extension

SvdRemotePlan svd_remote(const ComplexMatrix& target) {
  const double defect = unitarity_defect(target);
  if (defect > tol::kUnitary) throw Error(ErrorKind::NonUnitary, "target unitarity defect " + std::to_string(defect));
  const int dim = static_cast<int>(target.rows());

  // A unitary is normal, so its Schur form is diagonal: U = Q T Q^dag is a
  // singular value decomposition with every phase carried by T.
  Eigen::ComplexSchur<ComplexMatrix> schur(target);
  const ComplexMatrix q = schur.matrixU();
  std::vector<Complex> d(dim);
  for (int i = 0; i < dim; ++i) d[i] = schur.matrixT()(i, i) / std::abs(schur.matrixT()(i, i));

  SvdRemotePlan plan{q, q.adjoint(), PhaseVector(std::move(d)), diagonal_partition(dim)};
  const ComplexMatrix rebuilt = plan.u * phase_gate(plan.d) * plan.v;
  if (max_abs_diff(rebuilt, target) > tol::kUnitary)
    throw Error(ErrorKind::NonUnitary, "u d v does not rebuild the target");
  return plan;
}

Program svd_remote_program(const SvdRemotePlan& plan) {
  Program prog = program(plan.diagonal, plan.d);
  prog.steps.insert(prog.steps.begin(), fixed_op(Party::Alice, "v", {0}, plan.v));
  prog.steps.push_back(fixed_op(Party::Alice, "u", {0}, plan.u));
  return prog;
}

ProtocolRun run_svd_remote(const SvdRemotePlan& plan, const StateVector& input) {
  const ComplexMatrix u = plan.u * phase_gate(plan.d) * plan.v;
  StateVector expected = StateVector::normalized(u * input.amplitudes(), {plan.diagonal.dim()});
  return evaluate_branches(run_protocol(svd_remote_program(plan), initial_state(plan.diagonal, input)), 0,
                           std::move(expected));
}

// ---------------------------------------------------------------------------
// Operator-valued trace

namespace {

struct OperatorState {
  // Column j is the joint state obtained from input |j>_A; factor order [A, a, b].
  ComplexMatrix columns;
  std::vector<int> dims;

  void apply(const ComplexMatrix& op, std::vector<int> targets) {
    for (Eigen::Index j = 0; j < columns.cols(); ++j) {
      const ComplexVector col = columns.col(j);
      columns.col(j) = apply_to_amplitudes(op, col, dims, targets);
    }
  }

  void project(int factor, int outcome, double rescale) {
    const int stride = factor == 1 ? dims[2] : 1;
    for (Eigen::Index i = 0; i < columns.rows(); ++i)
      if ((i / stride) % dims[factor] != outcome) columns.row(i).setZero();
    columns *= rescale;
  }

  ComplexMatrix cell(int a, int b) const {
    const int d = dims[0], na = dims[1], nb = dims[2];
    ComplexMatrix k(d, columns.cols());
    for (int x = 0; x < d; ++x) k.row(x) = columns.row((static_cast<Eigen::Index>(x) * na + a) * nb + b);
    return k;
  }

  TraceStage stage(std::string title, std::vector<int> rows, std::vector<int> cols) const {
    TraceStage t{std::move(title), std::move(rows), std::move(cols), {}};
    for (int a : t.rows) {
      t.cells.emplace_back();
      for (int b : t.cols) t.cells.back().push_back(cell(a, b));
    }
    return t;
  }
};

}  // namespace

std::vector<TraceStage> trace(const PartitionedOperation& p, const PhaseVector& c, int l, int m) {
  const WangStepSet steps = build_steps(p, c, l, m);
  const int n = p.num_blocks();
  const int d = p.dim();
  const double root_n = std::sqrt(static_cast<double>(n));

  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);

  OperatorState s{ComplexMatrix::Zero(static_cast<Eigen::Index>(d) * n * n, d), {d, n, n}};
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < n; ++k) s.columns((static_cast<Eigen::Index>(j) * n + k) * n + k, j) = 1.0 / root_n;

  std::vector<TraceStage> out;
  out.push_back(s.stage("initial", all, all));
  s.apply(steps.P, {0, 1});
  out.push_back(s.stage("step 1: Alice applies P", all, all));
  s.project(1, l, root_n);
  out.push_back(s.stage("step 2: Alice measures a = " + std::to_string(l), {l}, all));
  s.apply(steps.correction, {2});
  out.push_back(s.stage("step 2: Bob applies X^" + std::to_string(l), {l}, all));
  s.apply(steps.C, {2});
  out.push_back(s.stage("step 3: Bob applies C", {l}, all));
  s.apply(steps.F, {2});
  out.push_back(s.stage("step 4: Bob applies F", {l}, all));
  s.project(2, m, root_n);
  out.push_back(s.stage("step 4: Bob measures b = " + std::to_string(m), {l}, {m}));
  s.apply(steps.R, {0});
  out.push_back(s.stage("step 5: Alice applies R_" + std::to_string(m), {l}, {m}));
  return out;
}

}  // namespace rio::wang
