#include "rio/protocol_run.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rio {

double ProtocolRun::min_fidelity() const {
  double f = std::numeric_limits<double>::infinity();
  for (const auto& b : branches) f = std::min(f, b.fidelity);
  return branches.empty() ? 0.0 : f;
}

double ProtocolRun::total_probability() const {
  double p = 0.0;
  for (const auto& b : branches) p += b.branch.probability;
  return p;
}

ProtocolRun evaluate_branches(std::vector<Branch> branches, int output_factor, StateVector expected) {
  ProtocolRun run{{}, std::move(expected)};
  run.branches.reserve(branches.size());
  const int left[] = {output_factor};
  for (auto& branch : branches) {
    const SchmidtForm form = schmidt(branch.state, left);
    if (form.left.rows() != run.expected.size())
      throw Error(ErrorKind::DimensionMismatch, "output register does not match the expected state");
    double weight = 0.0;
    for (std::size_t i = 0; i < form.coefficients.size(); ++i) {
      const double overlap = std::abs(run.expected.amplitudes().dot(form.left.col(static_cast<Eigen::Index>(i))));
      weight += form.coefficients[i] * form.coefficients[i] * overlap * overlap;
    }
    StateVector output = StateVector::normalized(form.left.col(0), {branch.state.factor_dims()[output_factor]});
    const double fid = std::sqrt(std::max(weight, 0.0));
    const bool pure = form.rank == 1;
    run.branches.push_back({std::move(branch), std::move(output), fid, pure});
  }
  return run;
}

}  // namespace rio
