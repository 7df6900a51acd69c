#include <doctest.h>

#include "rio/problem.hpp"

using namespace rio;
using namespace rio::problem;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected rio::Error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("complex and matrix parsing") {
  CHECK(parse_complex(json(2.5)) == Complex(2.5, 0.0));
  CHECK(parse_complex(json::parse("[1, -2]")) == Complex(1.0, -2.0));
  CHECK(kind_of([] { parse_complex(json::parse("[1, 2, 3]")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_complex(json("x")); }) == ErrorKind::ParseError);

  const ComplexMatrix m = parse_matrix(json::parse("[[1, [0, 1]], [0, 2]]"));
  CHECK(m.rows() == 2);
  CHECK(m(0, 1) == Complex(0.0, 1.0));
  CHECK(kind_of([] { parse_matrix(json::parse("[[1, 2], [3]]")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_matrix(json::parse("[]")); }) == ErrorKind::ParseError);
}

TEST_CASE("round trip through json") {
  const auto p = wang::diagonal_partition(3);
  const wang::PhaseVector c({1.0, Complex(0.0, 1.0), -1.0});
  json j = wang_problem_json(p, c);
  const auto file = parse_problem(j);
  CHECK(file.kind == Kind::Wang);
  CHECK(file.dim() == 3);
  const auto& w = std::get<WangProblem>(file.payload);
  CHECK(max_abs_diff(wang::target_unitary(w.partition, w.phases), wang::target_unitary(p, c)) == 0.0);
  CHECK(max_abs_diff(file.input_state().amplitudes(), StateVector::basis(3, 0).amplitudes()) == 0.0);
}

TEST_CASE("wang problem errors keep the module's kind") {
  CHECK(kind_of([] {
          parse_problem(json::parse(R"({"kind": "wang", "blocks": [[[1, 0], [0, 0]], [[1, 0], [0, 0]]]})"));
        }) == ErrorKind::OverlappingBlocks);
  CHECK(kind_of([] {
          parse_problem(json::parse(R"({"kind": "wang", "blocks": [[[1, 0], [0, 0]]]})"));
        }) == ErrorKind::IncompleteBlocks);
  CHECK(kind_of([] {
          parse_problem(json::parse(
              R"({"kind": "wang", "blocks": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]], "phases": [1, 0.5]})"));
        }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] {
          parse_problem(json::parse(R"({"kind": "wang", "dim": 3, "blocks": [[[1, 0], [0, 1]]]})"));
        }) == ErrorKind::ParseError);
}

TEST_CASE("schema errors") {
  CHECK(kind_of([] { parse_problem(json::parse("[]")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_problem(json::parse(R"({"blocks": []})")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_problem(json::parse(R"({"kind": "nope"})")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_problem(json::parse(R"({"kind": 3})")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { load_problem("/nonexistent/problem.json"); }) == ErrorKind::ParseError);
}

TEST_CASE("group problems") {
  const auto file = parse_problem(json::parse(
      R"({"kind": "group", "builtin": "pauli", "target": [[0.7071067811865476, 0.7071067811865476],
                                                          [0.7071067811865476, -0.7071067811865476]]})"));
  CHECK(file.kind == Kind::Group);
  CHECK(file.dim() == 2);
  const auto& g = std::get<GroupProblem>(file.payload);
  CHECK(std::abs(g.coefficients[1] - Complex(1.0 / std::sqrt(2.0))) < 1e-12);

  CHECK(kind_of([] {
          parse_problem(json::parse(R"({"kind": "group", "order": 2, "cayley": [[0, 1], [1, 0]],
                                       "matrices": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]],
                                       "mu": [[1, 1], [1, 1]], "coefficients": [1, 1]})"));
        }) == ErrorKind::NonUnitaryTarget);
  CHECK(kind_of([] { parse_problem(json::parse(R"({"kind": "group", "builtin": "cyclic:3"})")); }) ==
        ErrorKind::ParseError);
  CHECK(kind_of([] { parse_problem(json::parse(R"({"kind": "group", "builtin": "e8", "coefficients": [1]})")); }) ==
        ErrorKind::ParseError);
}

TEST_CASE("bqst problems and inputs") {
  const auto file =
      parse_problem(json::parse(R"({"kind": "bqst", "unitary": [[0, 1], [1, 0]], "input": [3, [0, 4]]})"));
  CHECK(file.kind == Kind::Bqst);
  const StateVector in = file.input_state();
  CHECK(std::abs(in.amplitudes()(0) - Complex(0.6)) < 1e-12);
  CHECK(std::abs(in.amplitudes()(1) - Complex(0.0, 0.8)) < 1e-12);

  CHECK(kind_of([] { parse_problem(json::parse(R"({"kind": "bqst", "unitary": [[1, 1], [0, 1]]})")); }) ==
        ErrorKind::NonUnitary);
  const auto wrong_len = parse_problem(json::parse(R"({"kind": "bqst", "unitary": [[0, 1], [1, 0]], "input": [1]})"));
  CHECK(kind_of([&] { wrong_len.input_state(); }) == ErrorKind::DimensionMismatch);
}
