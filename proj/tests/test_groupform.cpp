#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "rio/groupform.hpp"
#include "rio/wang.hpp"
#include "support.hpp"

using namespace rio;
using namespace rio::groupform;

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

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// One-dimensional rep of Z3 carrying a single character.
ProjectiveRep single_character_z3() {
  std::vector<ComplexMatrix> mats;
  for (int f = 0; f < 3; ++f) mats.push_back(ComplexMatrix::Constant(1, 1, omega(f, 3)));
  return ProjectiveRep(FiniteGroup::cyclic(3), std::move(mats), ComplexMatrix::Ones(3, 3));
}

}  // namespace

TEST_CASE("finite group validation") {
  CHECK(FiniteGroup::cyclic(5).order() == 5);
  CHECK(FiniteGroup::cyclic(5).inverse(2) == 3);
  const auto d3 = FiniteGroup::dihedral3();
  CHECK(d3.order() == 6);
  // s r = r^2 s: index of s is 3, r is 1, r^2 s is 5.
  CHECK(d3.multiply(3, 1) == 5);
  CHECK(d3.multiply(1, 3) == 4);

  CHECK(kind_of([] { FiniteGroup({{0, 0}, {0, 0}}); }) == ErrorKind::InvalidGroup);
  CHECK(kind_of([] { FiniteGroup({{0, 1}, {1}}); }) == ErrorKind::InvalidGroup);
  CHECK(kind_of([] { FiniteGroup({{0, 1, 2}, {1, 0, 2}, {2, 1, 0}}); }) == ErrorKind::InvalidGroup);
}

TEST_CASE("Pauli projective representation") {
  const auto rep = pauli_rep();
  CHECK_NOTHROW(validate_rep(rep));
  const auto& g = rep.group();
  CHECK(g.names()[1] == "01");
  CHECK(g.names()[2] == "10");
  // Z X = -X Z
  CHECK(std::abs(rep.mu()(2, 1) - Complex(-1.0)) < 1e-12);
  CHECK(std::abs(rep.mu()(1, 2) - Complex(1.0)) < 1e-12);
  // Closure checked independently.
  for (int f = 0; f < 4; ++f)
    for (int h = 0; h < 4; ++h)
      CHECK(max_abs_diff(rep.matrix(f) * rep.matrix(h), rep.mu()(f, h) * rep.matrix(g.multiply(f, h))) < 1e-12);
}

TEST_CASE("representation errors") {
  const auto pauli = pauli_rep();
  SUBCASE("trivial factor system for the Pauli matrices") {
    ProjectiveRep bad(pauli.group(), pauli.matrices(), ComplexMatrix::Ones(4, 4));
    CHECK(kind_of([&] { validate_rep(bad); }) == ErrorKind::NotARepresentation);
  }
  SUBCASE("non-unimodular factor") {
    ComplexMatrix mu = pauli.mu();
    mu(0, 0) = 2.0;
    ProjectiveRep bad(pauli.group(), pauli.matrices(), mu);
    CHECK(kind_of([&] { validate_rep(bad); }) == ErrorKind::NonUnimodularFactor);
  }
  SUBCASE("non-unitary matrix") {
    auto mats = pauli.matrices();
    mats[1] *= 2.0;
    ProjectiveRep bad(pauli.group(), mats, pauli.mu());
    CHECK(kind_of([&] { validate_rep(bad); }) == ErrorKind::NotARepresentation);
  }
  SUBCASE("wrong matrix count") {
    auto mats = pauli.matrices();
    mats.pop_back();
    ProjectiveRep bad(pauli.group(), mats, pauli.mu());
    CHECK_THROWS_AS(validate_rep(bad), Error);
  }
}

TEST_CASE("right translation for Z3 makes M circulant") {
  const auto rep = cyclic_characters(3);
  std::mt19937_64 rng(31);
  std::vector<Complex> c = {Complex(0.3, 0.1), Complex(-0.2, 0.5), Complex(0.7, -0.4)};
  ComplexMatrix M = ComplexMatrix::Zero(3, 3);
  for (int f = 0; f < 3; ++f) M += c[f] * right_translation(rep, f);
  for (int g = 0; g < 3; ++g)
    for (int f = 0; f < 3; ++f) CHECK(std::abs(M(g, (g + f) % 3) - c[f]) < 1e-15);
}

TEST_CASE("Hadamard expands over the Pauli group") {
  const auto rep = pauli_rep();
  const ComplexMatrix h = mat2(1, 1, 1, -1) / std::sqrt(2.0);
  const auto c = coefficients_from_unitary(h, rep, standard_decomposition(rep));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(c[0]) < 1e-12);
  CHECK(std::abs(c[1] - r) < 1e-12);
  CHECK(std::abs(c[2] - r) < 1e-12);
  CHECK(std::abs(c[3]) < 1e-12);
  CHECK(max_abs_diff(combine(rep, c), h) < 1e-12);

  std::mt19937_64 rng(32);
  const auto run = run_group_protocol(rep, c, StateVector(random_state(2, rng), {2}));
  CHECK(run.min_fidelity() >= 1.0 - 1e-9);
  CHECK(run.total_probability() == doctest::Approx(1.0).epsilon(1e-10));
  for (const auto& b : run.branches) {
    CHECK(check_causality(b.branch.transcript));
    CHECK(check_locality(b.branch.transcript, standard_registers()));
  }
}

TEST_CASE("coefficients of a group element are a delta") {
  for (const auto& rep : {pauli_rep(), cyclic_characters(4), dihedral3_regular_type()}) {
    const auto decomp = standard_decomposition(rep);
    for (int f0 = 0; f0 < rep.group().order(); ++f0) {
      const auto c = coefficients_from_unitary(rep.matrix(f0), rep, decomp);
      for (int f = 0; f < rep.group().order(); ++f)
        CHECK(std::abs(c[f] - (f == f0 ? Complex(1.0) : Complex(0.0))) < 1e-10);
    }
  }
}

TEST_CASE("cyclic coefficients are the inverse DFT of the diagonal") {
  std::mt19937_64 rng(33);
  for (int n = 1; n <= 6; ++n) {
    const auto rep = cyclic_characters(n);
    std::vector<Complex> u;
    ComplexMatrix target = ComplexMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      u.push_back(random_phase(rng));
      target(j, j) = u.back();
    }
    const auto c = coefficients_from_unitary(target, rep, standard_decomposition(rep));
    for (int f = 0; f < n; ++f) {
      Complex expected = 0.0;
      for (int j = 0; j < n; ++j) expected += u[j] * omega(-f * j, n);
      expected /= static_cast<double>(n);
      CHECK(std::abs(c[f] - expected) < 1e-10);
    }
  }
}

TEST_CASE("group form agrees with the phase-partition protocol for cyclic groups") {
  std::mt19937_64 rng(34);
  const int n = 4;
  std::vector<Complex> u;
  for (int j = 0; j < n; ++j) u.push_back(random_phase(rng));
  const wang::PhaseVector phases(u);
  const auto partition = wang::diagonal_partition(n);
  const ComplexMatrix target = wang::target_unitary(partition, phases);

  const auto rep = cyclic_characters(n);
  const auto c = coefficients_from_unitary(target, rep, standard_decomposition(rep));
  CHECK(max_abs_diff(combine(rep, c), target) < 1e-10);

  const StateVector psi(random_state(n, rng), {n});
  const auto group_run = run_group_protocol(rep, c, psi);
  const auto wang_run = wang::run_wang(partition, phases, psi);
  CHECK(group_run.min_fidelity() >= 1.0 - 1e-9);
  CHECK(wang_run.min_fidelity() >= 1.0 - 1e-9);
  CHECK(fidelity(group_run.expected, wang_run.expected) >= 1.0 - 1e-10);
}

TEST_CASE("dihedral group with a random block unitary") {
  std::mt19937_64 rng(35);
  const auto rep = dihedral3_regular_type();
  CHECK_NOTHROW(validate_rep(rep));
  const auto decomp = standard_decomposition(rep);
  CHECK_NOTHROW(validate_decomposition(rep, decomp));
  for (int trial = 0; trial < 3; ++trial) {
    const ComplexMatrix target = random_block_unitary(decomp, rng);
    const auto c = coefficients_from_unitary(target, rep, decomp);
    CHECK(max_abs_diff(combine(rep, c), target) < 1e-10);
    const auto run = run_group_protocol(rep, c, StateVector(random_state(4, rng), {4}));
    CHECK(run.min_fidelity() >= 1.0 - 1e-9);
    CHECK(run.total_probability() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("protocol preconditions") {
  const auto pauli = pauli_rep();
  CHECK(kind_of([&] { build_group_steps(pauli, {1.0, 1.0, 0.0, 0.0}, 0, 0); }) == ErrorKind::NonUnitaryTarget);
  // 1 + w is unimodular but Bob's mixer is not unitary without the other characters.
  CHECK(kind_of([] { build_group_steps(single_character_z3(), {1.0, 1.0, 0.0}, 0, 0); }) ==
        ErrorKind::NonUnitaryM);
  CHECK(kind_of([] { z_correction(identity(2), 0); }) == ErrorKind::SingularTransform);
  const ComplexMatrix z = z_correction(fourier_matrix(3), 1);
  for (int f = 0; f < 3; ++f) CHECK(std::abs(z(f, f) - omega(-f, 3)) < 1e-12);
}

TEST_CASE("repeated irreps are rejected") {
  // Z2 acting trivially on two dimensions: the trivial character twice.
  std::vector<ComplexMatrix> mats = {identity(2), identity(2)};
  ProjectiveRep rep(FiniteGroup::cyclic(2), mats, ComplexMatrix::Ones(2, 2));
  CHECK_NOTHROW(validate_rep(rep));
  CHECK(kind_of([&] {
          const auto decomp = standard_decomposition(rep);
          coefficients_from_unitary(identity(2), rep, decomp);
        }) == ErrorKind::MultiplicityNotOne);
}

TEST_CASE("target outside the block structure") {
  const auto rep = cyclic_characters(2);
  const ComplexMatrix swap = mat2(0, 1, 1, 0);
  CHECK(kind_of([&] { coefficients_from_unitary(swap, rep, standard_decomposition(rep)); }) ==
        ErrorKind::NotBlockDiagonal);
}
