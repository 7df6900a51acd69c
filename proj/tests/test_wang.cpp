#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "rio/wang.hpp"
#include "support.hpp"

using namespace rio;
using namespace rio::wang;
using rio::testing::embed;
using rio::testing::ket;
using rio::testing::kron;

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

Complex omega(int k, int n) { return std::polar(1.0, 2.0 * std::numbers::pi * k / n); }

PhaseVector random_phases(int n, std::mt19937_64& rng) {
  std::vector<Complex> c;
  for (int i = 0; i < n; ++i) c.push_back(random_phase(rng));
  return PhaseVector(std::move(c));
}

ComplexMatrix ketbra(int n, int i, int j) {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

// Projector onto the input support, computed without any SVD.
ComplexMatrix support_projector(const ComplexMatrix& a) { return a.adjoint() * a; }

// Full-Kronecker walk through one branch of the protocol, with every operator
// rebuilt from scratch. Returns the unnormalized final joint amplitude.
ComplexVector oracle_branch(const PartitionedOperation& p, const PhaseVector& c, const ComplexVector& psi, int l,
                            int m) {
  const int d = p.dim();
  const int n = p.num_blocks();
  const std::vector<int> dims = {d, n, n};

  ComplexVector phi = ComplexVector::Zero(n * n);
  for (int k = 0; k < n; ++k) phi(k * n + k) = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexVector s = kron(psi, phi);

  ComplexMatrix x = ComplexMatrix::Zero(n, n);  // X|k> = |k-1>
  for (int k = 0; k < n; ++k) x((k + n - 1) % n, k) = 1.0;
  ComplexMatrix P = ComplexMatrix::Zero(d * n, d * n);
  ComplexMatrix xi = identity(n);
  for (int i = 0; i < n; ++i) {
    P += tensor(support_projector(p.blocks()[i]), xi);
    xi = x * xi;
  }
  s = embed(P, dims, 0, 2) * s;
  s = embed(ketbra(n, l, l), dims, 1, 1) * s;
  ComplexMatrix xl = identity(n);
  for (int k = 0; k < l; ++k) xl = x * xl;
  s = embed(xl, dims, 2, 1) * s;
  ComplexMatrix C = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) C(i, i) = c.values()[i];
  s = embed(C, dims, 2, 1) * s;
  ComplexMatrix F(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) F(a, b) = omega(a * b, n) / std::sqrt(static_cast<double>(n));
  s = embed(F, dims, 2, 1) * s;
  s = embed(ketbra(n, m, m), dims, 2, 1) * s;
  return s;
}

}  // namespace

TEST_CASE("partition validation") {
  SUBCASE("diagonal partition is valid") {
    const auto p = diagonal_partition(4);
    CHECK(p.num_blocks() == 4);
    CHECK(p.ranks() == std::vector<int>{1, 1, 1, 1});
  }
  SUBCASE("overlapping blocks") {
    CHECK(kind_of([] { validate_partition({ketbra(2, 0, 0), ketbra(2, 0, 0)}); }) == ErrorKind::OverlappingBlocks);
  }
  SUBCASE("incomplete blocks") {
    CHECK(kind_of([] { validate_partition({ketbra(3, 0, 0), ketbra(3, 1, 1)}); }) == ErrorKind::IncompleteBlocks);
    CHECK(kind_of([] { validate_partition({}); }) == ErrorKind::IncompleteBlocks);
  }
  SUBCASE("zero block") {
    CHECK(kind_of([] {
            validate_partition({ketbra(2, 0, 0), ketbra(2, 1, 1), ComplexMatrix::Zero(2, 2)});
          }) == ErrorKind::EmptyBlock);
  }
  SUBCASE("mismatched dimensions") {
    CHECK(kind_of([] { validate_partition({ketbra(2, 0, 0), ketbra(3, 1, 1)}); }) == ErrorKind::DimensionMismatch);
  }
  SUBCASE("non-diagonal blocks: swap split into two rank-one pieces") {
    const auto p = validate_partition({ketbra(2, 1, 0), ketbra(2, 0, 1)});
    CHECK(p.num_blocks() == 2);
    for (int i = 0; i < 2; ++i)
      CHECK(max_abs_diff(p.projector(i), support_projector(p.blocks()[i])) < 1e-12);
  }
}

TEST_CASE("phase vectors must be unimodular") {
  CHECK(kind_of([] { PhaseVector({Complex(0.5, 0.0)}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { PhaseVector({}); }) == ErrorKind::InvalidArgument);
  CHECK_NOTHROW(PhaseVector({std::polar(1.0, 0.3)}));
  CHECK(kind_of([] { target_unitary(diagonal_partition(3), PhaseVector::ones(2)); }) ==
        ErrorKind::DimensionMismatch);
}

TEST_CASE("controlled shift for three diagonal blocks is the circulant layout") {
  const ComplexMatrix P = controlled_shift(diagonal_partition(3));
  REQUIRE(P.rows() == 9);
  // P |i>|k> = |i>|k - i>
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      const ComplexVector out = P * kron(ket(3, i), ket(3, k));
      CHECK(max_abs_diff(out, kron(ket(3, i), ket(3, (k - i + 3) % 3))) == 0.0);
    }
  CHECK(is_unitary(P));
}

TEST_CASE("Alice's operators do not depend on Bob's phases") {
  std::mt19937_64 rng(21);
  const auto p = random_partition(5, 3, rng);
  const auto c1 = random_phases(3, rng);
  const auto c2 = random_phases(3, rng);
  for (int l = 0; l < 3; ++l)
    for (int m = 0; m < 3; ++m) {
      const auto s1 = build_steps(p, c1, l, m);
      const auto s2 = build_steps(p, c2, l, m);
      CHECK(max_abs_diff(s1.P, s2.P) == 0.0);
      CHECK(max_abs_diff(s1.R, s2.R) == 0.0);
      CHECK(max_abs_diff(s1.correction, s2.correction) == 0.0);
      CHECK(max_abs_diff(s1.F, s2.F) == 0.0);
    }
}

TEST_CASE("recovery undoes the Fourier phases block by block") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 6; ++trial) {
    const int d = 2 + trial;
    const int n = 1 + trial % d;
    const auto p = random_partition(d, n, rng);
    for (int m = 0; m < n; ++m) {
      const ComplexMatrix r = recovery(p, m);
      CHECK(is_unitary(r));
      for (int i = 0; i < n; ++i)
        CHECK(max_abs_diff(r * support_projector(p.blocks()[i]), omega(-m * i, n) * p.blocks()[i]) < 1e-10);
    }
  }
}

TEST_CASE("operator identity: sqrt(N) R_m sum_k M_mk P_lk = U") {
  // After P and measuring a = l, the (A, b) operator is sum_i P_i (x) |l+i>/sqrt(N).
  // M = F C X^l acts on b; projecting onto m and rescaling by N gives R_m^dag U.
  std::mt19937_64 rng(23);
  const auto p = random_partition(4, 3, rng);
  const auto c = random_phases(3, rng);
  const int n = 3;
  const ComplexMatrix u = target_unitary(p, c);
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m) {
      const auto steps = build_steps(p, c, l, m);
      const ComplexMatrix M = steps.F * steps.C * steps.correction;
      ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
      for (int k = 0; k < n; ++k) {
        // P_{lk}: operator on A attached to b = k after measuring a = l.
        const int i = ((k - l) % n + n) % n;
        sum += M(m, k) * support_projector(p.blocks()[i]);
      }
      CHECK(max_abs_diff(std::sqrt(static_cast<double>(n)) * steps.R * sum, u) < 1e-10);
    }
}

TEST_CASE("run_wang: nine branches for three blocks, each exact") {
  std::mt19937_64 rng(24);
  const auto p = diagonal_partition(3);
  const auto c = random_phases(3, rng);
  const StateVector psi(random_state(3, rng), {3});
  const auto run = run_wang(p, c, psi);
  REQUIRE(run.branches.size() == 9);
  for (const auto& b : run.branches) {
    CHECK(b.branch.probability == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
    CHECK(b.fidelity >= 1.0 - 1e-9);
    CHECK(b.output_pure);
  }
  CHECK(run.total_probability() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("run_wang agrees with the Kronecker oracle and ancillas end in product states") {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 4; ++trial) {
    const int d = 3 + trial;
    const int n = 2 + trial % 2;
    const auto p = random_partition(d, n, rng);
    const auto c = random_phases(n, rng);
    const ComplexVector psi = random_state(d, rng);
    const auto run = run_wang(p, c, StateVector(psi, {d}));
    REQUIRE(static_cast<int>(run.branches.size()) == n * n);
    const ComplexVector upsi = target_unitary(p, c) * psi;
    for (const auto& b : run.branches) {
      const int l = b.branch.outcomes.at("l");
      const int m = b.branch.outcomes.at("m");
      ComplexVector oracle = oracle_branch(p, c, psi, l, m);
      CHECK(oracle.squaredNorm() == doctest::Approx(1.0 / (n * n)).epsilon(1e-10));
      // Before R_m the A register holds R_m^dag U|psi>.
      oracle = embed(recovery(p, m), {d, n, n}, 0, 1) * oracle;
      oracle.normalize();
      const ComplexVector product = kron(kron(upsi, ket(n, l)), ket(n, m));
      CHECK(fidelity(oracle, product) >= 1.0 - 1e-10);
      CHECK(fidelity(b.branch.state.amplitudes(), product) >= 1.0 - 1e-10);
    }
  }
}

TEST_CASE("single block degenerates to a local unitary") {
  std::mt19937_64 rng(26);
  const ComplexMatrix w = haar_unitary(3, rng);
  const auto p = validate_partition({w});
  const auto run = run_wang(p, PhaseVector({std::polar(1.0, 1.1)}), StateVector(random_state(3, rng), {3}));
  CHECK(run.branches.size() == 1);
  CHECK(run.min_fidelity() >= 1.0 - 1e-9);
}

TEST_CASE("transcripts respect locality and causality") {
  std::mt19937_64 rng(27);
  const auto p = random_partition(4, 2, rng);
  const auto run = run_wang(p, random_phases(2, rng), StateVector(random_state(4, rng), {4}));
  for (const auto& b : run.branches) {
    CHECK(check_causality(b.branch.transcript));
    CHECK(check_locality(b.branch.transcript, standard_registers()));
    CHECK(b.branch.transcript.message_count() == 2);
  }
}

TEST_CASE("arbitrary unitary through the spectral split") {
  std::mt19937_64 rng(28);
  for (int d = 1; d <= 5; ++d) {
    const ComplexMatrix target = haar_unitary(d, rng);
    const auto plan = svd_remote(target);
    ComplexMatrix diag = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) diag(i, i) = plan.d.values()[i];
    CHECK(max_abs_diff(plan.u * diag * plan.v, target) < 1e-9);
    const auto run = run_svd_remote(plan, StateVector(random_state(d, rng), {d}));
    CHECK(static_cast<int>(run.branches.size()) == d * d);
    CHECK(run.min_fidelity() >= 1.0 - 1e-9);
  }
  ComplexMatrix bad = identity(2);
  bad(0, 1) = 0.5;
  CHECK(kind_of([&] { svd_remote(bad); }) == ErrorKind::NonUnitary);
}

TEST_CASE("trace stages") {
  const auto p = diagonal_partition(3);
  const PhaseVector c({1.0, omega(1, 6), omega(1, 14)});
  const auto stages = trace(p, c, 1, 2);
  REQUIRE(stages.size() == 8);
  // Final stage: the surviving cell is U itself.
  const auto& last = stages.back();
  const ComplexMatrix u = target_unitary(p, c);
  bool found = false;
  for (const auto& row : last.cells)
    for (const auto& cell : row)
      if (max_abs_diff(cell, u) < 1e-10) found = true;
  CHECK(found);
}

TEST_CASE("random partitions are valid and reproducible") {
  std::mt19937_64 a(99), b(99);
  const auto p = random_partition(6, 4, a);
  const auto q = random_partition(6, 4, b);
  CHECK(p.num_blocks() == 4);
  for (int i = 0; i < 4; ++i) CHECK(max_abs_diff(p.blocks()[i], q.blocks()[i]) == 0.0);
  int sum = 0;
  for (int r : p.ranks()) sum += r;
  CHECK(sum == 6);
  CHECK(kind_of([&] { random_partition(3, 4, a); }) == ErrorKind::InvalidArgument);
}
