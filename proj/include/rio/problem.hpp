#pragma once

// JSON problem files for the command-line tool.
//
// Complex numbers are [re, im] pairs (a bare number is read as real).
// Matrices are arrays of rows, vectors are arrays of complex numbers.
//
//   {"kind": "wang", "dim": D, "blocks": [M, ...], "phases": [c, ...]?, "input": v?}
//   {"kind": "group", "order": n, "cayley": [[...]], "names": [...]?,
//    "matrices": [M, ...], "mu": [[c, ...], ...],
//    "coefficients": [c, ...] | "target": M, "blocks": {"basis": M?, "irreps": [[M, ...], ...]}?,
//    "input": v?}
//   {"kind": "group", "builtin": "pauli" | "cyclic:N" | "dihedral3", ...}
//   {"kind": "bqst", "unitary": M, "input": v?}

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rio/groupform.hpp"
#include "rio/qcore.hpp"
#include "rio/wang.hpp"

namespace rio::problem {

using nlohmann::json;

Complex parse_complex(const json& j);
ComplexVector parse_vector(const json& j);
ComplexMatrix parse_matrix(const json& j);

json complex_json(Complex z);
json vector_json(const ComplexVector& v);
json matrix_json(const ComplexMatrix& m);

struct WangProblem {
  wang::PartitionedOperation partition;
  wang::PhaseVector phases;
};

struct GroupProblem {
  groupform::ProjectiveRep rep;
  std::vector<Complex> coefficients;
};

struct BqstProblem {
  ComplexMatrix unitary;
};

enum class Kind { Wang, Group, Bqst };

struct ProblemFile {
  Kind kind;
  std::variant<WangProblem, GroupProblem, BqstProblem> payload;
  std::optional<ComplexVector> input;

  /// Dimension of the register the operation acts on.
  int dim() const;
  /// The explicit input, or |0>.
  StateVector input_state() const;
};

/// Validates the payload under the owning module's rules. Throws rio::Error
/// (ParseError for schema problems, the module's kind otherwise).
ProblemFile parse_problem(const json& j);
ProblemFile load_problem(const std::string& path);

json wang_problem_json(const wang::PartitionedOperation& p, const wang::PhaseVector& c);

}  // namespace rio::problem
