#include "rio/entcost.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "rio/locc.hpp"

namespace rio::entcost {

int operator_rank(const std::vector<ComplexMatrix>& blocks) {
  if (blocks.empty()) return 0;
  const Eigen::Index rows = blocks.front().rows(), cols = blocks.front().cols();
  ComplexMatrix stacked(static_cast<Eigen::Index>(blocks.size()), rows * cols);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].rows() != rows || blocks[i].cols() != cols)
      throw Error(ErrorKind::DimensionMismatch, "blocks must share one shape");
    for (Eigen::Index r = 0; r < rows; ++r)
      stacked.row(static_cast<Eigen::Index>(i)).segment(r * cols, cols) = blocks[i].row(r);
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(stacked);
  const auto& s = svd.singularValues();
  return static_cast<int>((s.array() > tol::kRank).count());
}

FeasibilityVerdict feasibility_test(const FeasibilityInstance& instance) {
  if (instance.blocks.empty()) throw Error(ErrorKind::InvalidArgument, "feasibility needs at least one block");
  FeasibilityVerdict v;
  v.operator_rank = operator_rank(instance.blocks);
  if (instance.schmidt_coefficients) {
    const auto& h = *instance.schmidt_coefficients;
    v.resource_rank = static_cast<int>(std::count_if(h.begin(), h.end(), [](double x) { return x > tol::kRank; }));
  } else {
    if (instance.resource_rank < 1) throw Error(ErrorKind::InvalidArgument, "resource rank must be >= 1");
    v.resource_rank = instance.resource_rank;
  }

  std::ostringstream cert;
  if (v.resource_rank < v.operator_rank) {
    v.feasible = false;
    cert << "infeasible: operator_rank(blocks) = " << v.operator_rank << " > d = " << v.resource_rank
         << ". Scope: protocols whose first two rounds are Alice's controlled operation and ancilla measurement, "
            "so that each A_i = sqrt(d) R_m sum_j h_j q_ji P_lj lies in the span of at most d operators P_lj.";
  } else {
    v.feasible = true;
    cert << "feasible: d = " << v.resource_rank << " >= operator_rank(blocks) = " << v.operator_rank
         << "; witnessed by the controlled-shift protocol on a maximally entangled resource of rank "
         << v.operator_rank << ".";
  }
  v.certificate = cert.str();
  return v;
}

void to_json(nlohmann::json& j, const CostReport& r) {
  j = nlohmann::json{{"protocol", r.protocol},
                     {"schmidt_rank", r.schmidt_rank},
                     {"controlled_parameters", r.controlled_parameters},
                     {"ebits", r.ebits},
                     {"classical_bits_alice_to_bob", r.classical_bits_alice_to_bob},
                     {"classical_bits_bob_to_alice", r.classical_bits_bob_to_alice},
                     {"feasible", r.feasible}};
}

CostReport bqst_report(int dim) {
  const double per_pair = std::log2(static_cast<double>(dim));
  return CostReport{"bqst", dim * dim, dim * dim, 2.0 * per_pair, 2.0 * per_pair, 2.0 * per_pair, true};
}

namespace {

double ratio_of(double num, double den) {
  if (den == 0.0) return num == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

}  // namespace

CostComparison compare_costs(const wang::PartitionedOperation& p, int dim) {
  if (dim != p.dim()) throw Error(ErrorKind::DimensionMismatch, "partition acts on dimension " + std::to_string(p.dim()));
  const int n = p.num_blocks();
  const int left[] = {0};
  const int measured_rank = schmidt(wang::resource(p).state(), left).rank;
  const double bits = std::log2(static_cast<double>(n));

  FeasibilityInstance inst{p.blocks(), measured_rank, std::nullopt};
  CostReport wang_row{"wang", measured_rank, n, std::log2(static_cast<double>(measured_rank)), bits, bits,
                      feasibility_test(inst).feasible};
  CostReport bqst = bqst_report(dim);
  CostComparison out;
  out.saves_entanglement = wang_row.ebits < bqst.ebits - 1e-12;
  out.ratio = ratio_of(wang_row.ebits, bqst.ebits);
  out.rows = {wang_row, bqst};
  return out;
}

CostComparison compare_group_costs(int group_order, int dim) {
  const double bits = std::log2(static_cast<double>(group_order));
  CostReport group_row{"group", group_order, group_order, bits, bits, bits, true};
  CostReport bqst = bqst_report(dim);
  CostComparison out;
  out.saves_entanglement = group_row.ebits < bqst.ebits - 1e-12;
  out.ratio = ratio_of(group_row.ebits, bqst.ebits);
  out.rows = {group_row, bqst};
  return out;
}

std::string format_table(const std::vector<CostReport>& rows) {
  const std::vector<std::string> headers = {"protocol", "schmidt_rank", "params", "ebits", "bits_A->B", "bits_B->A",
                                            "feasible"};
  std::vector<std::vector<std::string>> cells;
  auto num = [](double x) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << x;
    return os.str();
  };
  for (const auto& r : rows)
    cells.push_back({r.protocol, std::to_string(r.schmidt_rank), std::to_string(r.controlled_parameters), num(r.ebits),
                     num(r.classical_bits_alice_to_bob), num(r.classical_bits_bob_to_alice),
                     r.feasible ? "yes" : "no"});
  std::vector<std::size_t> width(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) {
    width[c] = headers[c].size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << "  ";
      if (c == 0)
        os << std::left << std::setw(static_cast<int>(width[c])) << row[c];
      else
        os << std::right << std::setw(static_cast<int>(width[c])) << row[c];
    }
    os << '\n';
  };
  line(headers);
  for (const auto& row : cells) line(row);
  return os.str();
}

// ---------------------------------------------------------------------------
// Teleport, apply, teleport back

namespace {

// |j>|k> -> |j>|k - j>
ComplexMatrix inverse_sum(int d) {
  ComplexMatrix m = ComplexMatrix::Zero(d * d, d * d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) m(j * d + ((k - j) % d + d) % d, j * d + k) = 1.0;
  return m;
}

void append_teleport(Program& prog, Party sender, int data, int sender_half, int receiver_half, const std::string& tag,
                     int d) {
  auto& s = prog.steps;
  const Party receiver = other(sender);
  const std::string round_z = "s" + tag, round_x = "t" + tag;
  s.emplace_back(fixed_op(sender, "SUM^dag", {data, sender_half}, inverse_sum(d)));
  s.emplace_back(fixed_op(sender, "F", {data}, fourier_matrix(d)));
  s.emplace_back(MeasureStep{sender, data, round_z});
  s.emplace_back(MeasureStep{sender, sender_half, round_x});
  s.emplace_back(SendStep{sender, round_z});
  s.emplace_back(SendStep{sender, round_x});
  s.emplace_back(LocalStep{receiver, "X^" + round_x, {receiver_half}, {round_x},
                           [x = shift_matrix(d), round_x](const Outcomes& o) { return matrix_power(x, o.at(round_x)); }});
  s.emplace_back(LocalStep{receiver, "Z^-" + round_z, {receiver_half}, {round_z},
                           [z = clock_matrix(d), round_z](const Outcomes& o) { return matrix_power(z, -o.at(round_z)); }});
}

}  // namespace

BqstRun bqst_teleport(const ComplexMatrix& target, const StateVector& input) {
  const double defect = unitarity_defect(target);
  if (defect > tol::kUnitary) throw Error(ErrorKind::NonUnitary, "target unitarity defect " + std::to_string(defect));
  const int d = static_cast<int>(target.rows());
  if (input.num_factors() != 1 || input.factor_dims()[0] != d)
    throw Error(ErrorKind::DimensionMismatch, "input must be a single register of dimension " + std::to_string(d));

  Program prog{Registers{{"A", "a1", "b1", "b2", "a2"}, {Party::Alice, Party::Alice, Party::Bob, Party::Bob, Party::Alice}},
               {}};
  append_teleport(prog, Party::Alice, 0, 1, 2, "1", d);
  prog.steps.emplace_back(fixed_op(Party::Bob, "U", {2}, target));
  append_teleport(prog, Party::Bob, 2, 3, 4, "2", d);

  const StateVector pair = maximally_entangled(d).state();
  const StateVector init = tensor(tensor(input, pair), pair);
  StateVector expected = StateVector::normalized(target * input.amplitudes(), {d});
  return BqstRun{evaluate_branches(run_protocol(prog, init), 4, std::move(expected)), bqst_report(d)};
}

}  // namespace rio::entcost
