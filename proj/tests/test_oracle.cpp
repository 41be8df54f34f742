#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mmb/oracle.hpp"
#include "mmb/realization.hpp"
#include "mmb/solver.hpp"
#include "mmb/validate.hpp"

using namespace mmb;

namespace {

const double kSqrt2m1 = std::sqrt(2.0) - 1.0;

Assemblage rotate(const Assemblage& a, const Eigen::MatrixXcd& U) {
  Assemblage out = a;
  for (auto& s : out)
    for (auto& E : s) E = U * E * U.adjoint();
  return out;
}

}  // namespace

TEST_CASE("ir_device_zero_for_repeated_measurement") {
  Assemblage xz = pauli_xz_assemblage();
  Assemblage same = {xz[0], xz[0]};
  OracleResult r = ir_device(same, 2);
  REQUIRE(r.solution.status == SolveStatus::optimal);
  CHECK(std::abs(r.value) < 1e-7);
}

TEST_CASE("ir_device_xz_pair_in_expected_range") {
  OracleResult r = ir_device(pauli_xz_assemblage(), 2);
  REQUIRE(r.solution.status == SolveStatus::optimal);
  CHECK(r.value > 1e-4);
  CHECK(r.value <= kSqrt2m1 + 1e-7);
}

TEST_CASE("ir_device_trine_positive") {
  OracleResult r = ir_device(trine_assemblage(), 2);
  REQUIRE(r.solution.status == SolveStatus::optimal);
  CHECK(r.value > 1e-4);
}

TEST_CASE("ir_device_unitary_invariance") {
  // fixed unitary: exp(i pi/5 Y)-like rotation
  Eigen::MatrixXcd U(2, 2);
  const double c = std::cos(0.3), s = std::sin(0.3);
  U << c, -s, s, c;
  OracleResult a = ir_device(pauli_xz_assemblage(), 2);
  OracleResult b = ir_device(rotate(pauli_xz_assemblage(), U), 2);
  CHECK(std::abs(a.value - b.value) < 1e-7);
}

TEST_CASE("irr_xz_matches_busch_criterion") {
  OracleResult r = variant_device(Quantifier::irr, pauli_xz_assemblage(), 2);
  REQUIRE(r.solution.status == SolveStatus::optimal);
  CHECK(std::abs(r.value - kSqrt2m1) < 1e-6);
}

TEST_CASE("iw_zero_for_jointly_measurable_and_bounded_by_one") {
  Assemblage noisy = depolarize(pauli_xz_assemblage(), 0.5, 2);  // eta < 1/sqrt2: compatible
  OracleResult r0 = variant_device(Quantifier::iw, noisy, 2);
  REQUIRE(r0.solution.status == SolveStatus::optimal);
  CHECK(std::abs(r0.value) < 1e-6);
  OracleResult r1 = variant_device(Quantifier::iw, pauli_xz_assemblage(), 2);
  CHECK(r1.value <= 1.0 + 1e-9);
  CHECK(r1.value > 0);
}

TEST_CASE("variant_ordering_on_mub_pair") {
  Assemblage xz = pauli_xz_assemblage();
  const double ir = ir_device(xz, 2).value;
  const double irj = variant_device(Quantifier::irj, xz, 2).value;
  const double irp = variant_device(Quantifier::irp, xz, 2).value;
  const double irr = variant_device(Quantifier::irr, xz, 2).value;
  const double iw = variant_device(Quantifier::iw, xz, 2).value;
  // restricting the admissible noise can only increase the robustness
  CHECK(ir <= irj + 1e-6);
  CHECK(ir <= irp + 1e-6);
  CHECK(irp <= irr + 1e-6);
  // weight-type measures dominate robustness-type ones; sharp pairs have
  // weight exactly 1 (no nonzero operator sits below both projectors)
  CHECK(ir <= iw + 1e-6);
  CHECK(std::abs(iw - 1.0) < 1e-7);
  // analytic values for the qubit MUB pair
  CHECK(std::abs(ir - (3 - 2 * std::sqrt(2.0))) < 1e-6);
}

TEST_CASE("gmir_zero_when_a_compatible_pair_exists") {
  Assemblage xz = pauli_xz_assemblage();
  Assemblage triple = {xz[0], xz[0], xz[1]};  // settings 0 and 1 identical
  OracleResult r = gmir_device(triple, 2);
  REQUIRE(r.solution.status == SolveStatus::optimal);
  CHECK(std::abs(r.value) < 1e-7);
}

TEST_CASE("gmir_zero_in_hollow_triangle_region") {
  // eta = 0.7 < 1/sqrt2: every pair compatible, so one pair suffices
  Assemblage noisy = depolarize(pauli_xyz_assemblage(), 0.7, 2);
  OracleResult r = gmir_device(noisy, 2);
  REQUIRE(r.solution.status == SolveStatus::optimal);
  CHECK(std::abs(r.value) < 1e-6);
}

TEST_CASE("gmir_pauli_triple_positive_and_below_ir") {
  Assemblage xyz = pauli_xyz_assemblage();
  OracleResult g = gmir_device(xyz, 2);
  OracleResult i = ir_device(xyz, 2);
  REQUIRE(g.solution.status == SolveStatus::optimal);
  REQUIRE(i.solution.status == SolveStatus::optimal);
  CHECK(g.value > 1e-4);
  CHECK(g.value <= i.value + 1e-6);
}

TEST_CASE("device_solutions_pass_residual_validation") {
  SdpProblem p = build_ir_device_problem(pauli_xz_assemblage(), 2);
  Solution s = solve(p);
  REQUIRE(s.status == SolveStatus::optimal);
  ResidualReport rep = validate(p, s, 1e-7);
  CHECK(rep.ok);
  CHECK(std::abs(rep.recomputed_gap - s.duality_gap) < 1e-6);
}

TEST_CASE("strategy_enumeration_sizes") {
  CHECK(deterministic_strategies({2, 2}).size() == 4);
  CHECK(deterministic_strategies({2, 2, 2}).size() == 8);
  CHECK(deterministic_strategies({3, 2}).size() == 6);
}
