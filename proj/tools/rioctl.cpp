// rioctl: run, trace and cost remote-implementation problems.
//
// Exit codes: 0 success, 1 fidelity below threshold, 2 input or validation
// failure.

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rio/entcost.hpp"
#include "rio/groupform.hpp"
#include "rio/problem.hpp"
#include "rio/wang.hpp"

using nlohmann::json;
using namespace rio;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFidelity = 1;
constexpr int kExitInput = 2;

struct CommonOptions {
  std::string file;
  bool json_out = false;
  std::string input;
  double tol = 1e-9;
};

problem::ProblemFile load(const CommonOptions& opts) {
  problem::ProblemFile pf = problem::load_problem(opts.file);
  if (!opts.input.empty()) {
    json j;
    try {
      j = json::parse(opts.input);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::ParseError, std::string("--input: ") + e.what());
    }
    pf.input = problem::parse_vector(j);
  }
  return pf;
}

std::string fixed(double x, int digits = 12) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

std::string outcome_label(const Outcomes& outcomes) {
  std::string s;
  for (const auto& [round, value] : outcomes) {
    if (!s.empty()) s += ' ';
    s += round + '=' + std::to_string(value);
  }
  return s.empty() ? "-" : s;
}

std::string_view kind_name(problem::Kind k) {
  switch (k) {
    case problem::Kind::Wang: return "wang";
    case problem::Kind::Group: return "group";
    case problem::Kind::Bqst: return "bqst";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// run

int cmd_run(const CommonOptions& opts) {
  const problem::ProblemFile pf = load(opts);
  const StateVector input = pf.input_state();

  ProtocolRun run = std::visit(
      [&](const auto& p) -> ProtocolRun {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, problem::WangProblem>) return wang::run_wang(p.partition, p.phases, input);
        else if constexpr (std::is_same_v<T, problem::GroupProblem>)
          return groupform::run_group_protocol(p.rep, p.coefficients, input);
        else return entcost::bqst_teleport(p.unitary, input).run;
      },
      pf.payload);

  const double min_fid = run.min_fidelity();
  const bool pass = min_fid >= 1.0 - opts.tol;

  if (opts.json_out) {
    json out{{"kind", kind_name(pf.kind)}, {"dim", pf.dim()}, {"branches", json::array()}};
    for (const auto& b : run.branches)
      out["branches"].push_back({{"outcomes", b.branch.outcomes},
                                 {"probability", b.branch.probability},
                                 {"fidelity", b.fidelity},
                                 {"messages", b.branch.transcript.message_count()}});
    out["min_fidelity"] = min_fid;
    out["total_probability"] = run.total_probability();
    out["pass"] = pass;
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "problem: " << kind_name(pf.kind) << "  dim=" << pf.dim() << "  branches=" << run.branches.size()
              << '\n';
    for (const auto& b : run.branches)
      std::cout << "branch " << outcome_label(b.branch.outcomes) << "  p=" << fixed(b.branch.probability)
                << "  fidelity=" << fixed(b.fidelity) << "  messages=" << b.branch.transcript.message_count() << '\n';
    std::cout << "min_fidelity=" << fixed(min_fid) << '\n';
    std::cout << "total_probability=" << fixed(run.total_probability()) << '\n';
    if (!run.branches.empty()) {
      std::cout << "transcript (" << outcome_label(run.branches.front().branch.outcomes) << "):\n"
                << run.branches.front().branch.transcript.to_text();
    }
    std::cout << "result: " << (pass ? "PASS" : "FAIL") << '\n';
  }
  return pass ? kExitOk : kExitFidelity;
}

// ---------------------------------------------------------------------------
// trace

struct CellRenderer {
  const wang::PartitionedOperation& p;
  const wang::PhaseVector& c;
  ComplexMatrix target;
  int n;

  static bool near(Complex a, Complex b) { return std::abs(a - b) <= 1e-9; }

  std::string coefficient(Complex alpha, int i, bool phases_applied, std::optional<std::int64_t> preferred) const {
    const double scales[] = {1.0, 1.0 / std::sqrt(static_cast<double>(n))};
    const int first_e = phases_applied ? 1 : 0;
    std::vector<std::int64_t> exponents;
    if (preferred) exponents.push_back(*preferred);
    for (int k = 0; k < n; ++k) exponents.push_back(k);
    for (int pass = 0; pass < 2; ++pass) {
      const int e = pass == 0 ? first_e : 1 - first_e;
      for (double s : scales)
        for (std::int64_t k : exponents) {
          const Complex guess = s * (e ? c.values()[i] : Complex(1.0)) * root_of_unity(k, n);
          if (!near(alpha, guess)) continue;
          std::string out;
          if (s != 1.0) out += "(1/√" + std::to_string(n) + ")";
          if (k % n != 0) out += "e^(2πi·" + std::to_string(k) + "/" + std::to_string(n) + ")";
          if (e) out += "c" + std::to_string(i);
          return out;
        }
    }
    std::ostringstream os;
    os << std::setprecision(6) << "(" << alpha.real() << (alpha.imag() < 0 ? "-" : "+") << std::abs(alpha.imag())
       << "i)";
    return os.str();
  }

  std::optional<std::string> as_target(const ComplexMatrix& k) const {
    const Complex ratio = (target.adjoint() * k).trace() / static_cast<double>(k.rows());
    if (max_abs_diff(ratio * target, k) > 1e-9) return std::nullopt;
    return (near(ratio, 1.0) ? "" : coefficient(ratio, 0, false, std::nullopt)) + "U|Ψ⟩";
  }

  /// Symbolic form of K|Psi>, or nullopt when no exact form is found.
  std::optional<std::string> symbolic(const ComplexMatrix& k, bool phases_applied, std::optional<int> column,
                                      bool prefer_target) const {
    if (k.cwiseAbs().maxCoeff() <= 1e-12) return "0";
    if (prefer_target)
      if (auto t = as_target(k)) return t;
    const Complex scalar = k.trace() / static_cast<double>(k.rows());
    if (max_abs_diff(scalar * identity(static_cast<int>(k.rows())), k) <= 1e-9)
      return coefficient(scalar, 0, false, std::nullopt) + "|Ψ⟩";
    ComplexMatrix rebuilt = ComplexMatrix::Zero(k.rows(), k.cols());
    std::vector<Complex> alphas(n);
    for (int i = 0; i < n; ++i) {
      const ComplexMatrix proj = p.projector(i);
      alphas[i] = (proj * k).trace() / proj.trace();
      rebuilt += alphas[i] * proj;
    }
    if (max_abs_diff(rebuilt, k) <= 1e-9) {
      std::string out;
      for (int i = 0; i < n; ++i) {
        if (std::abs(alphas[i]) <= 1e-12) continue;
        std::optional<std::int64_t> preferred;
        if (column) preferred = static_cast<std::int64_t>(*column) * i;
        if (!out.empty()) out += " + ";
        out += coefficient(alphas[i], i, phases_applied, preferred) + "P" + std::to_string(i) + "|Ψ⟩";
      }
      return out;
    }
    return as_target(k);
  }
};

// Code points, not bytes; the tables use a few non-ASCII symbols.
std::size_t display_width(const std::string& s) {
  std::size_t w = 0;
  for (unsigned char ch : s)
    if ((ch & 0xC0) != 0x80) ++w;
  return w;
}

std::string pad(const std::string& s, std::size_t width) {
  const std::size_t w = display_width(s);
  return w >= width ? s : s + std::string(width - w, ' ');
}

std::pair<int, int> parse_branch(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw Error(ErrorKind::ParseError, "--branch expects l,m");
  try {
    return {std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, "--branch expects two integers l,m");
  }
}

int cmd_trace(const CommonOptions& opts, const std::string& branch_text) {
  const problem::ProblemFile pf = load(opts);
  const auto* wp = std::get_if<problem::WangProblem>(&pf.payload);
  if (!wp) throw Error(ErrorKind::InvalidArgument, "trace supports wang problems only");
  const int n = wp->partition.num_blocks();
  if (n > 6) throw Error(ErrorKind::InvalidArgument, "trace supports at most 6 blocks");
  const auto [l, m] = branch_text.empty() ? std::pair{0, 0} : parse_branch(branch_text);
  const StateVector input = pf.input_state();
  const auto stages = wang::trace(wp->partition, wp->phases, l, m);

  CellRenderer renderer{wp->partition, wp->phases, wang::target_unitary(wp->partition, wp->phases), n};

  if (opts.json_out) {
    json out{{"branch", {{"l", l}, {"m", m}}}, {"stages", json::array()}};
    for (const auto& st : stages) {
      json cells = json::array();
      for (std::size_t r = 0; r < st.rows.size(); ++r)
        for (std::size_t col = 0; col < st.cols.size(); ++col) {
          const ComplexVector v = st.cells[r][col] * input.amplitudes();
          cells.push_back({{"a", st.rows[r]}, {"b", st.cols[col]}, {"amplitudes", problem::vector_json(v)}});
        }
      out["stages"].push_back({{"title", st.title}, {"cells", std::move(cells)}});
    }
    std::cout << out.dump(2) << '\n';
    return kExitOk;
  }

  std::cout << "branch l=" << l << " m=" << m << "  N=" << n << "  D=" << wp->partition.dim() << '\n';
  for (std::size_t s = 0; s < stages.size(); ++s) {
    const auto& st = stages[s];
    // Stages from Bob's phase gate onward carry c_i; the Fourier stages carry
    // e^{2 pi i b j / N} on P_j.
    const bool phases_applied = s >= 4;
    const bool fourier_columns = s == 5 || s == 6;
    std::vector<std::vector<std::string>> text(st.rows.size(), std::vector<std::string>(st.cols.size()));
    std::vector<std::string> numeric_notes;
    for (std::size_t r = 0; r < st.rows.size(); ++r)
      for (std::size_t col = 0; col < st.cols.size(); ++col) {
        const auto sym = renderer.symbolic(st.cells[r][col], phases_applied,
                                           fourier_columns ? std::optional<int>(st.cols[col]) : std::nullopt,
                                           s + 1 == stages.size());
        if (sym) {
          text[r][col] = *sym;
        } else {
          const std::string name = "v" + std::to_string(numeric_notes.size());
          text[r][col] = name;
          std::ostringstream os;
          os << "  " << name << " = " << problem::vector_json(st.cells[r][col] * input.amplitudes()).dump();
          numeric_notes.push_back(os.str());
        }
      }

    std::vector<std::size_t> width(st.cols.size() + 1, 3);
    for (std::size_t col = 0; col < st.cols.size(); ++col) {
      width[col + 1] = std::to_string(st.cols[col]).size();
      for (std::size_t r = 0; r < st.rows.size(); ++r)
        width[col + 1] = std::max(width[col + 1], display_width(text[r][col]));
    }
    std::cout << '\n' << st.title << '\n' << pad("a\\b", width[0]);
    for (std::size_t col = 0; col < st.cols.size(); ++col)
      std::cout << " | " << pad(std::to_string(st.cols[col]), width[col + 1]);
    std::cout << " |\n";
    for (std::size_t r = 0; r < st.rows.size(); ++r) {
      std::cout << pad(std::to_string(st.rows[r]), width[0]);
      for (std::size_t col = 0; col < st.cols.size(); ++col) std::cout << " | " << pad(text[r][col], width[col + 1]);
      std::cout << " |\n";
    }
    for (const auto& note : numeric_notes) std::cout << note << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// cost

int cmd_cost(const CommonOptions& opts) {
  const problem::ProblemFile pf = load(opts);
  entcost::CostComparison cmp;
  std::vector<ComplexMatrix> blocks;
  if (const auto* wp = std::get_if<problem::WangProblem>(&pf.payload)) {
    cmp = entcost::compare_costs(wp->partition, pf.dim());
    blocks = wp->partition.blocks();
  } else if (const auto* gp = std::get_if<problem::GroupProblem>(&pf.payload)) {
    cmp = entcost::compare_group_costs(gp->rep.group().order(), pf.dim());
    blocks = gp->rep.matrices();
  } else {
    cmp.rows = {entcost::bqst_report(pf.dim())};
    cmp.ratio = 1.0;
  }

  std::vector<entcost::FeasibilityVerdict> verdicts;
  const int n = blocks.empty() ? 0 : entcost::operator_rank(blocks);
  for (int d = 1; d <= n; ++d) verdicts.push_back(entcost::feasibility_test({blocks, d, std::nullopt}));

  if (opts.json_out) {
    json out{{"rows", cmp.rows}, {"saves_entanglement", cmp.saves_entanglement}, {"ratio", cmp.ratio}};
    out["feasibility"] = json::array();
    for (const auto& v : verdicts)
      out["feasibility"].push_back({{"d", v.resource_rank},
                                    {"operator_rank", v.operator_rank},
                                    {"feasible", v.feasible},
                                    {"maximal_entanglement_required", v.maximal_entanglement_required},
                                    {"certificate", v.certificate}});
    std::cout << out.dump(2) << '\n';
    return kExitOk;
  }

  std::cout << entcost::format_table(cmp.rows);
  if (cmp.rows.size() > 1)
    std::cout << "ebit ratio " << cmp.rows.front().protocol << "/bqst = " << fixed(cmp.ratio, 6)
              << (cmp.saves_entanglement ? "  (saves entanglement)" : "  (no saving)") << '\n';
  if (!verdicts.empty()) {
    std::cout << "\nfeasibility by resource Schmidt rank d (controlled parameters n = " << n << "):\n";
    for (const auto& v : verdicts)
      std::cout << "d=" << v.resource_rank << "  " << (v.feasible ? "feasible  " : "infeasible") << "  "
                << v.certificate << '\n';
    std::cout << "maximal entanglement required: unknown\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// gen

int cmd_gen(std::uint64_t seed, int dim, int blocks) {
  std::mt19937_64 rng(seed);
  const auto p = wang::random_partition(dim, blocks, rng);
  std::vector<Complex> phases;
  for (int i = 0; i < blocks; ++i) phases.push_back(random_phase(rng));
  json out = problem::wang_problem_json(p, wang::PhaseVector(std::move(phases)));
  out["input"] = problem::vector_json(random_state(dim, rng));
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate and verify remote implementation of partially unknown operations"};
  app.require_subcommand(1);

  CommonOptions opts;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", opts.file, "problem file (JSON)")->required();
    sub->add_flag("--json", opts.json_out, "machine-readable output");
    sub->add_option("--input", opts.input, "input amplitudes as a JSON array, e.g. [[0.6,0],[0,0.8]]");
  };

  auto* run = app.add_subcommand("run", "run every measurement branch and report fidelities");
  add_common(run);
  run->add_option("--tol", opts.tol, "fidelity tolerance; pass iff min fidelity >= 1 - tol");

  std::string branch;
  auto* trace = app.add_subcommand("trace", "print the per-step state tables for one branch (wang only)");
  add_common(trace);
  trace->add_option("--branch", branch, "measurement outcomes l,m");

  auto* cost = app.add_subcommand("cost", "entanglement cost table and feasibility verdicts");
  add_common(cost);

  std::uint64_t seed = 0;
  int dim = 2, blocks = 2;
  auto* gen = app.add_subcommand("gen", "emit a random wang problem");
  gen->add_option("--seed", seed, "random seed");
  gen->add_option("--dim", dim, "register dimension")->check(CLI::Range(1, 64));
  gen->add_option("--blocks", blocks, "number of blocks")->check(CLI::Range(1, 64));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (run->parsed()) return cmd_run(opts);
    if (trace->parsed()) return cmd_trace(opts, branch);
    if (cost->parsed()) return cmd_cost(opts);
    if (gen->parsed()) return cmd_gen(seed, dim, blocks);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
