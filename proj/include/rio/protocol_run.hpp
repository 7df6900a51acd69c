#pragma once

#include <vector>

#include "rio/locc.hpp"
#include "rio/qcore.hpp"

namespace rio {

struct BranchResult {
  Branch branch;
  /// Dominant Schmidt vector of the output register.
  StateVector output;
  /// sqrt(<expected| rho_out |expected>); |<expected|output>| when pure.
  double fidelity = 0.0;
  /// The output register is in a pure state (unentangled from the rest).
  bool output_pure = false;
};

struct ProtocolRun {
  std::vector<BranchResult> branches;
  StateVector expected;

  double min_fidelity() const;
  double total_probability() const;
};

/// Compares register `output_factor` of every branch's final state with
/// `expected`.
ProtocolRun evaluate_branches(std::vector<Branch> branches, int output_factor, StateVector expected);

}  // namespace rio
