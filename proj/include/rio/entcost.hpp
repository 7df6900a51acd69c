#pragma once

// Entanglement accounting for remote implementation protocols.
//
// The lower bound: any protocol in which Alice's action factors as
//     A_i = sqrt(d) R_m sum_j h_j q_ji P_lj
// through a resource of Schmidt rank d can express at most d linearly
// independent blocks A_i. So a resource whose Schmidt rank is below the
// operator rank of {A_i} cannot implement the family.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rio/protocol_run.hpp"
#include "rio/qcore.hpp"
#include "rio/wang.hpp"

namespace rio::entcost {

/// Numerical rank (at tol::kRank) of the matrix whose rows are vec(A_i).
int operator_rank(const std::vector<ComplexMatrix>& blocks);

struct FeasibilityInstance {
  std::vector<ComplexMatrix> blocks;
  int resource_rank = 1;
  /// Schmidt coefficients of a candidate resource. When present only their
  /// count above tol::kRank matters, and it overrides resource_rank.
  std::optional<std::vector<double>> schmidt_coefficients;
};

struct FeasibilityVerdict {
  bool feasible = false;
  int operator_rank = 0;
  int resource_rank = 0;
  std::string certificate;
  /// Whether a partially entangled resource of sufficient rank suffices is
  /// not settled; always "unknown".
  std::string maximal_entanglement_required = "unknown";
};

FeasibilityVerdict feasibility_test(const FeasibilityInstance& instance);

struct CostReport {
  std::string protocol;
  int schmidt_rank = 1;
  int controlled_parameters = 0;
  double ebits = 0.0;
  double classical_bits_alice_to_bob = 0.0;
  double classical_bits_bob_to_alice = 0.0;
  bool feasible = true;
};

void to_json(nlohmann::json& j, const CostReport& report);

struct CostComparison {
  std::vector<CostReport> rows;  // Wang (or group form) first, then BQST
  bool saves_entanglement = false;
  /// ebits(first row) / ebits(BQST)
  double ratio = 0.0;
};

/// Wang row uses the Schmidt rank measured on the resource run_wang consumes.
CostComparison compare_costs(const wang::PartitionedOperation& p, int dim);
/// Group-form protocol with |G| controlled parameters on a D-dimensional register.
CostComparison compare_group_costs(int group_order, int dim);

CostReport bqst_report(int dim);

/// Aligned-column text table.
std::string format_table(const std::vector<CostReport>& rows);

/// Registers [A, a1, b1, b2, a2] with dims D each: Alice holds A, a1, a2 and
/// Bob holds b1, b2; the pairs (a1, b1) and (b2, a2) are maximally entangled.
/// The state travels A -> b1, Bob applies U, then b1 -> a2.
struct BqstRun {
  ProtocolRun run;
  CostReport report;
};

/// Throws NonUnitary.
BqstRun bqst_teleport(const ComplexMatrix& target, const StateVector& input);

}  // namespace rio::entcost
