#include "rio/locc.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace rio {

std::string_view to_string(Party party) { return party == Party::Alice ? "Alice" : "Bob"; }

Party other(Party party) { return party == Party::Alice ? Party::Bob : Party::Alice; }

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

std::string join(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

}  // namespace

std::string ProtocolTranscript::to_text() const {
  std::ostringstream os;
  for (const auto& event : events) {
    std::visit(overloaded{
                   [&](const LocalOpEvent& e) {
                     os << "LOCAL|" << to_string(e.party) << '|' << e.label << "|targets=" << join(e.targets);
                     for (const auto& [round, value] : e.consumed) os << ';' << round << '=' << value;
                   },
                   [&](const MeasurementEvent& e) {
                     os << "MEASURE|" << to_string(e.party) << '|' << e.round << "|target=" << e.target
                        << ";outcome=" << e.outcome;
                   },
                   [&](const ClassicalMessageEvent& e) {
                     os << "MESSAGE|" << to_string(e.from) << '|' << e.round << "|to=" << to_string(e.to)
                        << ";payload=" << e.payload;
                   },
               },
               event);
    os << '\n';
  }
  return os.str();
}

int ProtocolTranscript::message_count() const {
  return static_cast<int>(std::count_if(events.begin(), events.end(), [](const TranscriptEvent& e) {
    return std::holds_alternative<ClassicalMessageEvent>(e);
  }));
}

LocalStep fixed_op(Party party, std::string label, std::vector<int> targets, ComplexMatrix op) {
  return LocalStep{party, std::move(label), std::move(targets), {},
                   [m = std::move(op)](const Outcomes&) { return m; }};
}

bool Registers::owns(Party party, int factor) const {
  return factor >= 0 && factor < size() && owners[factor] == party;
}

Registers standard_registers() { return Registers{{"A", "a", "b"}, {Party::Alice, Party::Alice, Party::Bob}}; }

// ---------------------------------------------------------------------------
// Static validation

namespace {

struct Knowledge {
  std::set<std::string> alice;
  std::set<std::string> bob;
  std::set<std::string>& of(Party p) { return p == Party::Alice ? alice : bob; }
};

void require_owned(const Registers& registers, Party party, int factor, std::string_view what) {
  if (!registers.owns(party, factor))
    throw Error(ErrorKind::LocalityViolation, std::string(to_string(party)) + " cannot act on factor " +
                                                   std::to_string(factor) + " in " + std::string(what));
}

}  // namespace

void validate_program(const Program& program) {
  const Registers& regs = program.registers;
  if (regs.names.size() != regs.owners.size())
    throw Error(ErrorKind::InvalidArgument, "register names and owners differ in length");
  Knowledge known;
  std::set<std::string> measured;
  for (const auto& step : program.steps) {
    std::visit(overloaded{
                   [&](const LocalStep& s) {
                     if (s.targets.empty()) throw Error(ErrorKind::InvalidArgument, "step '" + s.label + "' has no targets");
                     for (int t : s.targets) require_owned(regs, s.party, t, "step '" + s.label + "'");
                     for (const auto& round : s.consumes)
                       if (!known.of(s.party).contains(round))
                         throw Error(ErrorKind::MissingClassicalDependency,
                                     std::string(to_string(s.party)) + " step '" + s.label + "' consumes outcome '" +
                                         round + "' it has not received");
                     if (!s.op) throw Error(ErrorKind::InvalidArgument, "step '" + s.label + "' has no operator");
                   },
                   [&](const MeasureStep& s) {
                     require_owned(regs, s.party, s.target, "measurement '" + s.round + "'");
                     if (!measured.insert(s.round).second)
                       throw Error(ErrorKind::InvalidArgument, "round tag '" + s.round + "' measured twice");
                     known.of(s.party).insert(s.round);
                   },
                   [&](const SendStep& s) {
                     if (!known.of(s.from).contains(s.round))
                       throw Error(ErrorKind::MissingClassicalDependency,
                                   std::string(to_string(s.from)) + " cannot send unknown outcome '" + s.round + "'");
                     known.of(other(s.from)).insert(s.round);
                   },
               },
               step);
  }
}

// ---------------------------------------------------------------------------
// Execution

std::vector<Branch> run_protocol(const Program& program, const StateVector& initial, RunOptions options) {
  validate_program(program);
  if (initial.num_factors() != program.registers.size())
    throw Error(ErrorKind::DimensionMismatch, "initial state has " + std::to_string(initial.num_factors()) +
                                                  " factors, program declares " +
                                                  std::to_string(program.registers.size()));

  std::vector<Branch> live;
  live.push_back(Branch{{}, initial, 1.0, {}, {}});
  if (options.record_snapshots) live.front().snapshots.push_back({"initial", initial});

  for (const auto& step : program.steps) {
    std::vector<Branch> next;
    next.reserve(live.size());
    for (auto& branch : live) {
      std::visit(overloaded{
                     [&](const LocalStep& s) {
                       const ComplexMatrix op = s.op(branch.outcomes);
                       branch.state = apply_local(op, branch.state, s.targets);
                       LocalOpEvent event{s.party, s.label, s.targets, {}};
                       for (const auto& round : s.consumes) event.consumed.emplace_back(round, branch.outcomes.at(round));
                       branch.transcript.events.emplace_back(std::move(event));
                       if (options.record_snapshots) branch.snapshots.push_back({s.label, branch.state});
                       next.push_back(std::move(branch));
                     },
                     [&](const MeasureStep& s) {
                       for (auto& outcome : measure_computational(branch.state, s.target)) {
                         Branch child = branch;
                         child.state = std::move(outcome.post_state);
                         child.probability *= outcome.probability;
                         child.outcomes[s.round] = outcome.outcome;
                         child.transcript.events.emplace_back(MeasurementEvent{s.party, s.target, s.round, outcome.outcome});
                         if (options.record_snapshots) child.snapshots.push_back({"measure " + s.round, child.state});
                         next.push_back(std::move(child));
                       }
                     },
                     [&](const SendStep& s) {
                       branch.transcript.events.emplace_back(
                           ClassicalMessageEvent{s.from, other(s.from), s.round, branch.outcomes.at(s.round)});
                       next.push_back(std::move(branch));
                     },
                 },
                 step);
    }
    live = std::move(next);
  }
  return live;
}

bool check_causality(const ProtocolTranscript& transcript, std::string* reason) {
  std::map<std::string, int> alice, bob;
  auto known = [&](Party p) -> std::map<std::string, int>& { return p == Party::Alice ? alice : bob; };
  for (std::size_t i = 0; i < transcript.events.size(); ++i) {
    const auto& event = transcript.events[i];
    if (const auto* m = std::get_if<MeasurementEvent>(&event)) {
      known(m->party)[m->round] = m->outcome;
    } else if (const auto* msg = std::get_if<ClassicalMessageEvent>(&event)) {
      auto& sender = known(msg->from);
      auto it = sender.find(msg->round);
      if (it == sender.end() || it->second != msg->payload) {
        if (reason) *reason = "event " + std::to_string(i) + ": message carries an outcome the sender does not hold";
        return false;
      }
      known(msg->to)[msg->round] = msg->payload;
    } else {
      const auto& op = std::get<LocalOpEvent>(event);
      for (const auto& [round, value] : op.consumed) {
        auto& k = known(op.party);
        auto it = k.find(round);
        if (it == k.end() || it->second != value) {
          if (reason)
            *reason = "event " + std::to_string(i) + ": " + std::string(to_string(op.party)) + " uses outcome '" +
                      round + "' before receiving it";
          return false;
        }
      }
    }
  }
  return true;
}

bool check_locality(const ProtocolTranscript& transcript, const Registers& registers) {
  for (const auto& event : transcript.events) {
    if (const auto* op = std::get_if<LocalOpEvent>(&event)) {
      for (int t : op->targets)
        if (!registers.owns(op->party, t)) return false;
    } else if (const auto* m = std::get_if<MeasurementEvent>(&event)) {
      if (!registers.owns(m->party, m->target)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Resources

int ResourceState::rank() const {
  return static_cast<int>(
      std::count_if(coefficients.begin(), coefficients.end(), [](double h) { return h > tol::kRank; }));
}

StateVector ResourceState::state() const {
  ComplexVector amps = ComplexVector::Zero(static_cast<Eigen::Index>(dim_a) * dim_b);
  for (std::size_t i = 0; i < coefficients.size(); ++i)
    amps(static_cast<Eigen::Index>(i) * dim_b + static_cast<Eigen::Index>(i)) = coefficients[i];
  return StateVector(std::move(amps), {dim_a, dim_b});
}

ResourceState maximally_entangled(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "resource dimension must be >= 1");
  return ResourceState{n, n, std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n)))};
}

ResourceState partially_entangled(std::vector<double> coefficients) {
  if (coefficients.empty()) throw Error(ErrorKind::InvalidArgument, "resource needs at least one coefficient");
  double norm2 = 0.0;
  for (double h : coefficients) {
    if (h < 0.0) throw Error(ErrorKind::InvalidArgument, "Schmidt coefficients must be nonnegative");
    norm2 += h * h;
  }
  if (norm2 <= 0.0) throw Error(ErrorKind::NotNormalized, "all Schmidt coefficients are zero");
  for (double& h : coefficients) h /= std::sqrt(norm2);
  std::sort(coefficients.begin(), coefficients.end(), std::greater<>());
  const int n = static_cast<int>(coefficients.size());
  return ResourceState{n, n, std::move(coefficients)};
}

}  // namespace rio
