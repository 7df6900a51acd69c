#include "rio/groupform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace rio::groupform {

// ---------------------------------------------------------------------------
// FiniteGroup

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> cayley, std::vector<std::string> names)
    : table_(std::move(cayley)), names_(std::move(names)) {
  const int n = order();
  if (n == 0) throw Error(ErrorKind::InvalidGroup, "group has no elements");
  for (const auto& row : table_) {
    if (static_cast<int>(row.size()) != n) throw Error(ErrorKind::InvalidGroup, "Cayley table is not square");
    for (int x : row)
      if (x < 0 || x >= n) throw Error(ErrorKind::InvalidGroup, "Cayley table entry out of range");
  }
  // Each row and column is a permutation.
  for (int i = 0; i < n; ++i) {
    std::vector<bool> row_seen(n, false), col_seen(n, false);
    for (int j = 0; j < n; ++j) {
      if (row_seen[table_[i][j]] || col_seen[table_[j][i]])
        throw Error(ErrorKind::InvalidGroup, "Cayley table row/column " + std::to_string(i) + " is not a permutation");
      row_seen[table_[i][j]] = col_seen[table_[j][i]] = true;
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
          throw Error(ErrorKind::InvalidGroup, "multiplication is not associative");

  identity_ = -1;
  for (int e = 0; e < n && identity_ < 0; ++e) {
    bool ok = true;
    for (int f = 0; f < n && ok; ++f) ok = table_[e][f] == f && table_[f][e] == f;
    if (ok) identity_ = e;
  }
  if (identity_ < 0) throw Error(ErrorKind::InvalidGroup, "no identity element");

  inverse_.assign(n, -1);
  for (int f = 0; f < n; ++f)
    for (int g = 0; g < n; ++g)
      if (table_[f][g] == identity_) inverse_[f] = g;

  if (names_.empty())
    for (int f = 0; f < n; ++f) names_.push_back(std::to_string(f));
  if (static_cast<int>(names_.size()) != n) throw Error(ErrorKind::InvalidGroup, "one name per element required");
}

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidGroup, "cyclic group order must be >= 1");
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return FiniteGroup(std::move(t));
}

FiniteGroup FiniteGroup::klein_four() {
  std::vector<std::vector<int>> t(4, std::vector<int>(4));
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) t[x][y] = x ^ y;
  return FiniteGroup(std::move(t), {"00", "01", "10", "11"});
}

FiniteGroup FiniteGroup::dihedral3() {
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 6; ++y) {
      const int a = x % 3, b = x / 3, c = y % 3, d = y / 3;
      const int k = ((b ? a - c : a + c) % 3 + 3) % 3;
      t[x][y] = k + 3 * ((b + d) % 2);
    }
  return FiniteGroup(std::move(t), {"e", "r", "r2", "s", "rs", "r2s"});
}

// ---------------------------------------------------------------------------
// Representations

FactorSystem infer_factor_system(const FiniteGroup& group, const std::vector<ComplexMatrix>& matrices) {
  const int n = group.order();
  FactorSystem mu(n, n);
  for (int f = 0; f < n; ++f)
    for (int g = 0; g < n; ++g) {
      const ComplexMatrix& fg = matrices.at(group.multiply(f, g));
      mu(f, g) = (matrices.at(f) * matrices.at(g) * fg.adjoint()).trace() / static_cast<double>(fg.rows());
    }
  return mu;
}

const ProjectiveRep& validate_rep(const ProjectiveRep& rep) {
  const FiniteGroup& g = rep.group();
  const int n = g.order();
  if (static_cast<int>(rep.matrices().size()) != n)
    throw Error(ErrorKind::DimensionMismatch, "need one matrix per group element");
  const int dim = rep.dim();
  for (const auto& u : rep.matrices())
    if (u.rows() != dim || u.cols() != dim || dim == 0)
      throw Error(ErrorKind::DimensionMismatch, "representation matrices must be square with one dimension");
  if (rep.mu().rows() != n || rep.mu().cols() != n)
    throw Error(ErrorKind::DimensionMismatch, "factor system must be |G| x |G|");

  for (int f = 0; f < n; ++f)
    if (!is_unitary(rep.matrix(f)))
      throw Error(ErrorKind::NotARepresentation, "U(" + g.names()[f] + ") is not unitary");
  for (int f = 0; f < n; ++f)
    for (int h = 0; h < n; ++h)
      if (std::abs(std::abs(rep.mu()(f, h)) - 1.0) > tol::kUnitary)
        throw Error(ErrorKind::NonUnimodularFactor,
                    "|mu(" + g.names()[f] + "," + g.names()[h] + ")| = " + std::to_string(std::abs(rep.mu()(f, h))));

  for (int f = 0; f < n; ++f)
    for (int h = 0; h < n; ++h) {
      const ComplexMatrix lhs = rep.matrix(f) * rep.matrix(h);
      const ComplexMatrix rhs = rep.mu()(f, h) * rep.matrix(g.multiply(f, h));
      if (max_abs_diff(lhs, rhs) > tol::kUnitary)
        throw Error(ErrorKind::NotARepresentation,
                    "U(" + g.names()[f] + ")U(" + g.names()[h] + ") != mu * U(" + g.names()[g.multiply(f, h)] + ")");
    }

  const int e = g.identity();
  for (int h = 0; h < n; ++h) {
    const int hinv = g.inverse(h);
    for (int f = 0; f < n; ++f) {
      const Complex lhs = rep.mu()(hinv, f) * rep.mu()(h, g.multiply(hinv, f));
      const Complex rhs = rep.mu()(h, hinv) * rep.mu()(e, f);
      if (std::abs(lhs - rhs) > tol::kUnitary)
        throw Error(ErrorKind::NotARepresentation, "factor system violates the inverse identity at h=" +
                                                       g.names()[h] + ", f=" + g.names()[f]);
    }
  }
  return rep;
}

ProjectiveRep cyclic_characters(int n) {
  std::vector<ComplexMatrix> mats;
  for (int k = 0; k < n; ++k) {
    ComplexMatrix u = ComplexMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) u(j, j) = root_of_unity(static_cast<std::int64_t>(k) * j, n);
    mats.push_back(std::move(u));
  }
  return ProjectiveRep(FiniteGroup::cyclic(n), std::move(mats), FactorSystem::Ones(n, n));
}

ProjectiveRep pauli_rep() {
  const ComplexMatrix x = shift_matrix(2);
  const ComplexMatrix z = clock_matrix(2);
  std::vector<ComplexMatrix> mats = {identity(2), x, z, x * z};
  FiniteGroup g = FiniteGroup::klein_four();
  FactorSystem mu = infer_factor_system(g, mats);
  return ProjectiveRep(std::move(g), std::move(mats), std::move(mu));
}

ProjectiveRep dihedral3_regular_type() {
  const double c = std::cos(2.0 * std::numbers::pi / 3.0), s = std::sin(2.0 * std::numbers::pi / 3.0);
  ComplexMatrix rot(2, 2), refl(2, 2);
  rot << c, -s, s, c;
  refl << 1, 0, 0, -1;
  std::vector<ComplexMatrix> mats;
  for (int x = 0; x < 6; ++x) {
    const int k = x % 3, j = x / 3;
    ComplexMatrix u = ComplexMatrix::Zero(4, 4);
    u(0, 0) = 1.0;
    u(1, 1) = j ? -1.0 : 1.0;
    u.block(2, 2, 2, 2) = matrix_power(rot, k) * matrix_power(refl, j);
    mats.push_back(std::move(u));
  }
  return ProjectiveRep(FiniteGroup::dihedral3(), std::move(mats), FactorSystem::Ones(6, 6));
}

ComplexMatrix combine(const ProjectiveRep& rep, const std::vector<Complex>& c) {
  if (static_cast<int>(c.size()) != rep.group().order())
    throw Error(ErrorKind::DimensionMismatch, "need one coefficient per group element");
  ComplexMatrix u = ComplexMatrix::Zero(rep.dim(), rep.dim());
  for (std::size_t f = 0; f < c.size(); ++f) u += c[f] * rep.matrix(static_cast<int>(f));
  return u;
}

ComplexMatrix right_translation(const ProjectiveRep& rep, int f) {
  const FiniteGroup& g = rep.group();
  ComplexMatrix r = ComplexMatrix::Zero(g.order(), g.order());
  for (int x = 0; x < g.order(); ++x) r(x, g.multiply(x, f)) = rep.mu()(x, f);
  return r;
}

ComplexMatrix z_correction(const ComplexMatrix& transform, int g) {
  const Eigen::Index n = transform.cols();
  ComplexMatrix z = ComplexMatrix::Zero(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index f = 0; f < n; ++f) {
    const Complex entry = transform(g, f);
    if (std::abs(entry) <= tol::kRank)
      throw Error(ErrorKind::SingularTransform, "<g|F|f> vanishes at g=" + std::to_string(g) + ", f=" + std::to_string(f));
    z(f, f) = scale / entry;
  }
  return z;
}

namespace {

ComplexMatrix bob_mixer(const ProjectiveRep& rep, const std::vector<Complex>& c) {
  ComplexMatrix m = ComplexMatrix::Zero(rep.group().order(), rep.group().order());
  for (int f = 0; f < rep.group().order(); ++f) m += c[f] * right_translation(rep, f);
  return m;
}

void check_target_and_mixer(const ProjectiveRep& rep, const std::vector<Complex>& c, const ComplexMatrix& m) {
  const double target_defect = unitarity_defect(combine(rep, c));
  if (target_defect > tol::kUnitary)
    throw Error(ErrorKind::NonUnitaryTarget, "sum c(f)U(f) unitarity defect " + std::to_string(target_defect));
  const double m_defect = unitarity_defect(m);
  if (m_defect > tol::kUnitary)
    throw Error(ErrorKind::NonUnitaryM, "M = sum c(f)R(f) unitarity defect " + std::to_string(m_defect));
}

ComplexMatrix controlled_rep(const ProjectiveRep& rep) {
  const int n = rep.group().order();
  ComplexMatrix p = ComplexMatrix::Zero(rep.dim() * n, rep.dim() * n);
  for (int f = 0; f < n; ++f) {
    ComplexMatrix sel = ComplexMatrix::Zero(n, n);
    sel(f, f) = 1.0;
    p += tensor(rep.matrix(f), sel);
  }
  return p;
}

}  // namespace

GroupStepSet build_group_steps(const ProjectiveRep& rep, const std::vector<Complex>& c, int g, int h) {
  const int n = rep.group().order();
  if (g < 0 || g >= n || h < 0 || h >= n) throw Error(ErrorKind::InvalidArgument, "outcome outside the group");
  const ComplexMatrix m = bob_mixer(rep, c);
  check_target_and_mixer(rep, c, m);
  const ComplexMatrix f = fourier_matrix(n);
  return GroupStepSet{controlled_rep(rep), f, z_correction(f, g), m, rep.matrix(rep.group().inverse(h))};
}

Program program(const ProjectiveRep& rep, const std::vector<Complex>& c) {
  const int n = rep.group().order();
  const ComplexMatrix m = bob_mixer(rep, c);
  check_target_and_mixer(rep, c, m);
  const ComplexMatrix f = fourier_matrix(n);

  std::vector<ComplexMatrix> z_family, recoveries;
  for (int x = 0; x < n; ++x) {
    z_family.push_back(z_correction(f, x));
    recoveries.push_back(rep.matrix(rep.group().inverse(x)));
  }

  Program prog{standard_registers(), {}};
  auto& s = prog.steps;
  s.emplace_back(fixed_op(Party::Alice, "P", {0, 1}, controlled_rep(rep)));
  s.emplace_back(fixed_op(Party::Alice, "F", {1}, f));
  s.emplace_back(MeasureStep{Party::Alice, 1, "g"});
  s.emplace_back(SendStep{Party::Alice, "g"});
  s.emplace_back(LocalStep{Party::Bob, "Z(g)", {2}, {"g"}, [zs = std::move(z_family)](const Outcomes& o) {
                             return zs.at(o.at("g"));
                           }});
  s.emplace_back(fixed_op(Party::Bob, "M", {2}, m));
  s.emplace_back(MeasureStep{Party::Bob, 2, "h"});
  s.emplace_back(SendStep{Party::Bob, "h"});
  s.emplace_back(LocalStep{Party::Alice, "U(h^-1)", {0}, {"h"}, [rs = std::move(recoveries)](const Outcomes& o) {
                             return rs.at(o.at("h"));
                           }});
  return prog;
}

ProtocolRun run_group_protocol(const ProjectiveRep& rep, const std::vector<Complex>& c, const StateVector& input,
                               RunOptions options) {
  validate_rep(rep);
  if (input.num_factors() != 1 || input.factor_dims()[0] != rep.dim())
    throw Error(ErrorKind::DimensionMismatch, "input must be a single register of dimension " + std::to_string(rep.dim()));
  const Program prog = program(rep, c);
  const StateVector init = tensor(input, maximally_entangled(rep.group().order()).state());
  StateVector expected = StateVector::normalized(combine(rep, c) * input.amplitudes(), {rep.dim()});
  return evaluate_branches(run_protocol(prog, init, options), 0, std::move(expected));
}

// ---------------------------------------------------------------------------
// Block decompositions

std::vector<int> BlockDecomposition::offsets() const {
  std::vector<int> out;
  int offset = 0;
  for (const auto& irrep : irreps) {
    out.push_back(offset);
    offset += irrep.dim();
  }
  return out;
}

namespace {

int total_dim(const BlockDecomposition& decomp) {
  int d = 0;
  for (const auto& irrep : decomp.irreps) d += irrep.dim();
  return d;
}

double off_block_max(const ComplexMatrix& t, const BlockDecomposition& decomp) {
  const auto offsets = decomp.offsets();
  std::vector<int> owner(t.rows(), -1);
  for (std::size_t l = 0; l < decomp.irreps.size(); ++l)
    for (int k = 0; k < decomp.irreps[l].dim(); ++k) owner[offsets[l] + k] = static_cast<int>(l);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    for (Eigen::Index j = 0; j < t.cols(); ++j)
      if (owner[i] != owner[j]) worst = std::max(worst, std::abs(t(i, j)));
  return worst;
}

}  // namespace

void validate_decomposition(const ProjectiveRep& rep, const BlockDecomposition& decomp) {
  const int n = rep.group().order();
  const int dim = rep.dim();
  if (decomp.basis.rows() != dim || decomp.basis.cols() != dim)
    throw Error(ErrorKind::DimensionMismatch, "decomposition basis must be D x D");
  if (!is_unitary(decomp.basis)) throw Error(ErrorKind::DimensionMismatch, "decomposition basis is not unitary");
  if (total_dim(decomp) != dim) throw Error(ErrorKind::DimensionMismatch, "irrep dimensions do not sum to D");
  for (const auto& irrep : decomp.irreps)
    if (static_cast<int>(irrep.matrices.size()) != n || irrep.dim() == 0)
      throw Error(ErrorKind::DimensionMismatch, "each irrep needs one matrix per group element");

  int sum_sq = 0;
  for (const auto& irrep : decomp.irreps) sum_sq += irrep.dim() * irrep.dim();
  if (sum_sq != n)
    throw Error(ErrorKind::MultiplicityNotOne,
                "sum of squared irrep dimensions is " + std::to_string(sum_sq) + ", group order " + std::to_string(n));

  const auto offsets = decomp.offsets();
  for (int f = 0; f < n; ++f) {
    const ComplexMatrix t = decomp.basis.adjoint() * rep.matrix(f) * decomp.basis;
    if (off_block_max(t, decomp) > tol::kUnitary)
      throw Error(ErrorKind::NotBlockDiagonal, "U(" + rep.group().names()[f] + ") is not block diagonal in the basis");
    for (std::size_t l = 0; l < decomp.irreps.size(); ++l) {
      const int d = decomp.irreps[l].dim();
      if (max_abs_diff(t.block(offsets[l], offsets[l], d, d), decomp.irreps[l].matrices[f]) > tol::kUnitary)
        throw Error(ErrorKind::NotBlockDiagonal, "block " + std::to_string(l) + " does not match D(" +
                                                     rep.group().names()[f] + ")");
    }
  }

  // Orthogonality: sum_f conj(D^l_jk(f)) D^l'_j'k'(f) = (|G| / d_l) delta.
  for (std::size_t l1 = 0; l1 < decomp.irreps.size(); ++l1)
    for (std::size_t l2 = l1; l2 < decomp.irreps.size(); ++l2) {
      const auto& a = decomp.irreps[l1];
      const auto& b = decomp.irreps[l2];
      for (int j = 0; j < a.dim(); ++j)
        for (int k = 0; k < a.dim(); ++k)
          for (int j2 = 0; j2 < b.dim(); ++j2)
            for (int k2 = 0; k2 < b.dim(); ++k2) {
              Complex sum = 0.0;
              for (int f = 0; f < n; ++f) sum += std::conj(a.matrices[f](j, k)) * b.matrices[f](j2, k2);
              const bool same = l1 == l2 && j == j2 && k == k2;
              const double expected = same ? static_cast<double>(n) / a.dim() : 0.0;
              if (std::abs(sum - expected) > 1e-8)
                throw Error(ErrorKind::MultiplicityNotOne,
                            "irrep blocks " + std::to_string(l1) + " and " + std::to_string(l2) +
                                " violate the orthogonality relations (reducible or repeated irrep)");
            }
    }
}

BlockDecomposition standard_decomposition(const ProjectiveRep& rep) {
  const int dim = rep.dim();
  // Union-find over the joint sparsity pattern of all U(f).
  std::vector<int> parent(dim);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& u : rep.matrices())
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        if (std::abs(u(i, j)) > tol::kUnitary) parent[find(i)] = find(j);

  BlockDecomposition decomp{identity(dim), {}};
  int start = 0;
  while (start < dim) {
    int end = start + 1;
    while (end < dim && find(end) == find(start)) ++end;
    for (int k = end; k < dim; ++k)
      if (find(k) == find(start))
        throw Error(ErrorKind::NotBlockDiagonal, "representation blocks are not contiguous in the standard basis");
    IrrepBlock block;
    for (const auto& u : rep.matrices()) block.matrices.push_back(u.block(start, start, end - start, end - start));
    decomp.irreps.push_back(std::move(block));
    start = end;
  }
  return decomp;
}

std::vector<Complex> coefficients_from_unitary(const ComplexMatrix& target, const ProjectiveRep& rep,
                                               const BlockDecomposition& decomp) {
  validate_decomposition(rep, decomp);
  if (target.rows() != rep.dim() || target.cols() != rep.dim())
    throw Error(ErrorKind::DimensionMismatch, "target dimension differs from the representation");
  const ComplexMatrix t = decomp.basis.adjoint() * target * decomp.basis;
  const double leak = off_block_max(t, decomp);
  if (leak > tol::kUnitary)
    throw Error(ErrorKind::NotBlockDiagonal, "target has off-block entry of size " + std::to_string(leak));

  const int n = rep.group().order();
  const auto offsets = decomp.offsets();
  std::vector<Complex> c(n, 0.0);
  for (std::size_t l = 0; l < decomp.irreps.size(); ++l) {
    const auto& irrep = decomp.irreps[l];
    const int d = irrep.dim();
    const ComplexMatrix block = t.block(offsets[l], offsets[l], d, d);
    for (int f = 0; f < n; ++f) {
      Complex sum = 0.0;
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) sum += std::conj(irrep.matrices[f](j, k)) * block(j, k);
      c[f] += static_cast<double>(d) / n * sum;
    }
  }
  return c;
}

ComplexMatrix random_block_unitary(const BlockDecomposition& decomp, std::mt19937_64& rng) {
  const int dim = total_dim(decomp);
  ComplexMatrix r = ComplexMatrix::Zero(dim, dim);
  const auto offsets = decomp.offsets();
  for (std::size_t l = 0; l < decomp.irreps.size(); ++l) {
    const int d = decomp.irreps[l].dim();
    r.block(offsets[l], offsets[l], d, d) = haar_unitary(d, rng);
  }
  return decomp.basis * r * decomp.basis.adjoint();
}

}  // namespace rio::groupform
