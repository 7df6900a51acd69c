#include "rio/problem.hpp"

#include <fstream>

namespace rio::problem {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

groupform::ProjectiveRep builtin_rep(const std::string& name) {
  if (name == "pauli") return groupform::pauli_rep();
  if (name == "dihedral3") return groupform::dihedral3_regular_type();
  if (name.rfind("cyclic:", 0) == 0) {
    const int n = std::stoi(name.substr(7));
    if (n < 1 || n > 64) fail("cyclic order out of range");
    return groupform::cyclic_characters(n);
  }
  fail("unknown builtin representation '" + name + "'");
}

groupform::BlockDecomposition parse_blocks(const json& j, const groupform::ProjectiveRep& rep) {
  groupform::BlockDecomposition decomp;
  decomp.basis = j.contains("basis") ? parse_matrix(j.at("basis")) : identity(rep.dim());
  for (const auto& irrep : require(j, "irreps")) {
    groupform::IrrepBlock block;
    for (const auto& m : irrep) block.matrices.push_back(parse_matrix(m));
    decomp.irreps.push_back(std::move(block));
  }
  return decomp;
}

GroupProblem parse_group(const json& j) {
  std::optional<groupform::ProjectiveRep> rep;
  if (j.contains("builtin")) {
    rep = builtin_rep(j.at("builtin").get<std::string>());
  } else {
    const int order = require(j, "order").get<int>();
    auto table = require(j, "cayley").get<std::vector<std::vector<int>>>();
    if (static_cast<int>(table.size()) != order) fail("'order' disagrees with the Cayley table");
    std::vector<std::string> names;
    if (j.contains("names")) names = j.at("names").get<std::vector<std::string>>();
    groupform::FiniteGroup group(std::move(table), std::move(names));
    std::vector<ComplexMatrix> matrices;
    for (const auto& m : require(j, "matrices")) matrices.push_back(parse_matrix(m));
    const ComplexMatrix mu = parse_matrix(require(j, "mu"));
    rep.emplace(std::move(group), std::move(matrices), mu);
  }
  groupform::validate_rep(*rep);

  std::vector<Complex> coefficients;
  if (j.contains("coefficients")) {
    for (const auto& c : j.at("coefficients")) coefficients.push_back(parse_complex(c));
  } else if (j.contains("target")) {
    const auto decomp =
        j.contains("blocks") ? parse_blocks(j.at("blocks"), *rep) : groupform::standard_decomposition(*rep);
    coefficients = groupform::coefficients_from_unitary(parse_matrix(j.at("target")), *rep, decomp);
  } else {
    fail("group problem needs 'coefficients' or 'target'");
  }
  // Validates the target and Bob's mixer up front.
  groupform::build_group_steps(*rep, coefficients, 0, 0);
  return GroupProblem{std::move(*rep), std::move(coefficients)};
}

}  // namespace

Complex parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail("complex numbers must be [re, im] or a number, got " + j.dump());
}

ComplexVector parse_vector(const json& j) {
  if (!j.is_array() || j.empty()) fail("vector must be a nonempty array");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_complex(j[i]);
  return v;
}

ComplexMatrix parse_matrix(const json& j) {
  if (!j.is_array() || j.empty()) fail("matrix must be a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) fail("matrix rows must be nonempty arrays");
  ComplexMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) fail("matrix rows have different lengths");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_complex(j[r][c]);
  }
  return m;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json vector_json(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

json matrix_json(const ComplexMatrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

int ProblemFile::dim() const {
  return std::visit(
      [](const auto& p) -> int {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, WangProblem>) return p.partition.dim();
        else if constexpr (std::is_same_v<T, GroupProblem>) return p.rep.dim();
        else return static_cast<int>(p.unitary.rows());
      },
      payload);
}

StateVector ProblemFile::input_state() const {
  if (input) {
    if (input->size() != dim())
      throw Error(ErrorKind::DimensionMismatch, "input has " + std::to_string(input->size()) +
                                                    " amplitudes, operation acts on dimension " +
                                                    std::to_string(dim()));
    return StateVector::normalized(*input, {dim()});
  }
  return StateVector::basis(dim(), 0);
}

ProblemFile parse_problem(const json& j) {
  try {
    if (!j.is_object()) fail("problem file must be a JSON object");
    const std::string kind = require(j, "kind").get<std::string>();
    std::optional<ComplexVector> input;
    if (j.contains("input")) input = parse_vector(j.at("input"));

    if (kind == "wang") {
      std::vector<ComplexMatrix> blocks;
      for (const auto& b : require(j, "blocks")) blocks.push_back(parse_matrix(b));
      if (j.contains("dim") && !blocks.empty() && j.at("dim").get<int>() != blocks.front().rows())
        fail("'dim' disagrees with the block size");
      auto partition = wang::validate_partition(std::move(blocks));
      std::vector<Complex> phases;
      if (j.contains("phases"))
        for (const auto& c : j.at("phases")) phases.push_back(parse_complex(c));
      else
        phases.assign(partition.num_blocks(), Complex(1.0, 0.0));
      wang::PhaseVector c(std::move(phases));
      if (c.size() != partition.num_blocks()) fail("need one phase per block");
      return ProblemFile{Kind::Wang, WangProblem{std::move(partition), std::move(c)}, std::move(input)};
    }
    if (kind == "group") return ProblemFile{Kind::Group, parse_group(j), std::move(input)};
    if (kind == "bqst") {
      ComplexMatrix u = parse_matrix(require(j, "unitary"));
      const double defect = unitarity_defect(u);
      if (defect > tol::kUnitary) throw Error(ErrorKind::NonUnitary, "unitary defect " + std::to_string(defect));
      return ProblemFile{Kind::Bqst, BqstProblem{std::move(u)}, std::move(input)};
    }
    fail("unknown kind '" + kind + "'");
  } catch (const json::exception& e) {
    fail(e.what());
  }
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  return parse_problem(j);
}

json wang_problem_json(const wang::PartitionedOperation& p, const wang::PhaseVector& c) {
  json blocks = json::array();
  for (const auto& b : p.blocks()) blocks.push_back(matrix_json(b));
  json phases = json::array();
  for (const auto& z : c.values()) phases.push_back(complex_json(z));
  return json{{"kind", "wang"}, {"dim", p.dim()}, {"blocks", std::move(blocks)}, {"phases", std::move(phases)}};
}

}  // namespace rio::problem
