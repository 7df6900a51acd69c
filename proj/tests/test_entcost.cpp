#include <cmath>
#include <random>

#include <doctest.h>

#include "rio/entcost.hpp"
#include "support.hpp"

using namespace rio;
using namespace rio::entcost;

namespace {

ComplexMatrix ketbra(int n, int i, int j) {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("operator rank") {
  CHECK(operator_rank({ketbra(3, 0, 0), ketbra(3, 1, 1), ketbra(3, 2, 2)}) == 3);
  CHECK(operator_rank({ketbra(2, 0, 0), 2.0 * ketbra(2, 0, 0)}) == 1);
  CHECK(operator_rank({ketbra(2, 0, 1), ketbra(2, 1, 0), ketbra(2, 0, 1) + ketbra(2, 1, 0)}) == 2);
  CHECK(operator_rank({ComplexMatrix::Zero(2, 2)}) == 0);
  // Pauli matrices are linearly independent.
  ComplexMatrix x = ketbra(2, 0, 1) + ketbra(2, 1, 0);
  ComplexMatrix z = ketbra(2, 0, 0) - ketbra(2, 1, 1);
  CHECK(operator_rank({identity(2), x, z, x * z}) == 4);
}

TEST_CASE("feasibility is monotone in the resource rank") {
  std::mt19937_64 rng(41);
  const auto p = wang::random_partition(6, 4, rng);
  const int r = operator_rank(p.blocks());
  CHECK(r == 4);
  bool seen_feasible = false;
  for (int d = 1; d <= 8; ++d) {
    const auto v = feasibility_test({p.blocks(), d, std::nullopt});
    CHECK(v.operator_rank == r);
    CHECK(v.feasible == (d >= r));
    if (seen_feasible) CHECK(v.feasible);
    seen_feasible = seen_feasible || v.feasible;
    CHECK(v.maximal_entanglement_required == "unknown");
    CHECK_FALSE(v.certificate.empty());
  }
}

TEST_CASE("Schmidt coefficients override the declared rank") {
  const std::vector<ComplexMatrix> blocks = {ketbra(3, 0, 0), ketbra(3, 1, 1), ketbra(3, 2, 2)};
  const auto weak = feasibility_test({blocks, 3, std::vector<double>{0.9, 0.1, 0.0}});
  CHECK(weak.resource_rank == 2);
  CHECK_FALSE(weak.feasible);
  CHECK(weak.certificate.find("infeasible") != std::string::npos);
  const auto strong = feasibility_test({blocks, 1, std::vector<double>{0.8, 0.5, 0.1}});
  CHECK(strong.resource_rank == 3);
  CHECK(strong.feasible);
  CHECK_THROWS_AS(feasibility_test({{}, 1, std::nullopt}), Error);
}

TEST_CASE("BQST accounting") {
  const auto r = bqst_report(3);
  CHECK(r.schmidt_rank == 9);
  CHECK(r.ebits == doctest::Approx(2.0 * std::log2(3.0)));
  CHECK(r.classical_bits_alice_to_bob == doctest::Approx(2.0 * std::log2(3.0)));
  CHECK(r.classical_bits_bob_to_alice == doctest::Approx(2.0 * std::log2(3.0)));
}

TEST_CASE("cost comparisons") {
  SUBCASE("four-element group on a qubit costs the same as BQST") {
    const auto cmp = compare_group_costs(4, 2);
    CHECK(cmp.rows[0].ebits == doctest::Approx(2.0));
    CHECK(cmp.rows[1].ebits == doctest::Approx(2.0));
    CHECK_FALSE(cmp.saves_entanglement);
    CHECK(cmp.ratio == doctest::Approx(1.0));
  }
  SUBCASE("diagonal partitions halve the entanglement") {
    for (int d = 2; d <= 8; ++d) {
      const auto cmp = compare_costs(wang::diagonal_partition(d), d);
      CHECK(cmp.rows[0].schmidt_rank == d);
      CHECK(cmp.rows[0].feasible);
      CHECK(cmp.saves_entanglement);
      CHECK(cmp.ratio == doctest::Approx(0.5));
    }
  }
  SUBCASE("dimension must match") {
    CHECK_THROWS_AS(compare_costs(wang::diagonal_partition(3), 4), Error);
  }
  SUBCASE("table and json") {
    const auto cmp = compare_costs(wang::diagonal_partition(2), 2);
    const std::string table = format_table(cmp.rows);
    CHECK(table.find("wang") != std::string::npos);
    CHECK(table.find("bqst") != std::string::npos);
    nlohmann::json j = cmp.rows[1];
    CHECK(j.at("schmidt_rank").get<int>() == 4);
  }
}

TEST_CASE("BQST teleportation enumerates D^4 branches") {
  std::mt19937_64 rng(42);
  for (int d = 2; d <= 3; ++d) {
    const ComplexMatrix u = haar_unitary(d, rng);
    const auto result = bqst_teleport(u, StateVector(random_state(d, rng), {d}));
    CHECK(static_cast<int>(result.run.branches.size()) == d * d * d * d);
    CHECK(result.run.min_fidelity() >= 1.0 - 1e-9);
    CHECK(result.run.total_probability() == doctest::Approx(1.0).epsilon(1e-10));
    for (const auto& b : result.run.branches) CHECK(check_causality(b.branch.transcript));
  }
  ComplexMatrix bad = identity(2);
  bad(1, 0) = 0.3;
  CHECK_THROWS_AS(bqst_teleport(bad, StateVector::basis(2, 0)), Error);
}
