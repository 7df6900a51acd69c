#pragma once

// Two-party protocol programs executed over the full measurement-branch tree.
//
// A Program is a fixed sequence of steps. Each step is performed by one party
// and may only touch registers that party owns. Measurement outcomes are
// keyed by a round tag ("l", "m", ...); an outcome is known to the measuring
// party immediately and to the other party only after a SendStep for that
// round. Steps whose operator depends on an outcome must list the round in
// `consumes`, and the acting party must know it by then.

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rio/qcore.hpp"

namespace rio {

enum class Party { Alice, Bob };

std::string_view to_string(Party party);
Party other(Party party);

using Outcomes = std::map<std::string, int>;

struct LocalOpEvent {
  Party party;
  std::string label;
  std::vector<int> targets;
  std::vector<std::pair<std::string, int>> consumed;
};

struct MeasurementEvent {
  Party party;
  int target;
  std::string round;
  int outcome;
};

struct ClassicalMessageEvent {
  Party from;
  Party to;
  std::string round;
  int payload;
};

using TranscriptEvent = std::variant<LocalOpEvent, MeasurementEvent, ClassicalMessageEvent>;

struct ProtocolTranscript {
  std::vector<TranscriptEvent> events;

  /// One event per line: EVENT|party|label|data
  std::string to_text() const;
  int message_count() const;
};

// ---------------------------------------------------------------------------
// Programs

using OperatorFn = std::function<ComplexMatrix(const Outcomes&)>;

struct LocalStep {
  Party party;
  std::string label;
  std::vector<int> targets;
  std::vector<std::string> consumes;
  OperatorFn op;
};

struct MeasureStep {
  Party party;
  int target;
  std::string round;
};

struct SendStep {
  Party from;
  std::string round;
};

using Step = std::variant<LocalStep, MeasureStep, SendStep>;

/// Outcome-independent local operation.
LocalStep fixed_op(Party party, std::string label, std::vector<int> targets, ComplexMatrix op);

struct Registers {
  std::vector<std::string> names;
  std::vector<Party> owners;

  int size() const { return static_cast<int>(owners.size()); }
  bool owns(Party party, int factor) const;
};

/// Factors [A, a, b]: Alice owns the data register A and ancilla a, Bob owns b.
Registers standard_registers();

struct Program {
  Registers registers;
  std::vector<Step> steps;
};

/// Static check of locality and classical dependencies.
/// Throws LocalityViolation or MissingClassicalDependency.
void validate_program(const Program& program);

struct Snapshot {
  std::string label;
  StateVector state;
};

struct Branch {
  ProtocolTranscript transcript;
  StateVector state;
  double probability = 1.0;
  Outcomes outcomes;
  std::vector<Snapshot> snapshots;
};

struct RunOptions {
  bool record_snapshots = false;
};

/// Runs every step on every measurement branch. Returns one Branch per leaf,
/// ordered lexicographically by outcomes in program order.
std::vector<Branch> run_protocol(const Program& program, const StateVector& initial, RunOptions options = {});

/// Transcript-level causality: every outcome consumed by a LocalOp is either
/// the actor's own measurement or was delivered to the actor earlier.
bool check_causality(const ProtocolTranscript& transcript, std::string* reason = nullptr);

/// Transcript-level locality against the register ownership map.
bool check_locality(const ProtocolTranscript& transcript, const Registers& registers);

// ---------------------------------------------------------------------------
// Entanglement resources

struct ResourceState {
  int dim_a = 1;
  int dim_b = 1;
  std::vector<double> coefficients;  // h_i on |i>_a |i>_b, sum h_i^2 = 1

  int rank() const;
  StateVector state() const;
};

/// (1/sqrt(N)) sum_k |k>|k>
ResourceState maximally_entangled(int n);
/// sum_i h_i |i>|i> on N x N with N = h.size(); h is renormalized.
ResourceState partially_entangled(std::vector<double> coefficients);

}  // namespace rio
