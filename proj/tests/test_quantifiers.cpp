#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mmb/quantifiers.hpp"
#include "mmb/realization.hpp"
#include "mmb/solver.hpp"

using namespace mmb;

namespace {

ProbTable deterministic_local_P(const Scenario& sc) {
  ProbTable P = ProbTable::zeros(sc);
  for (int x = 0; x < sc.settings[0]; ++x)
    for (int y = 0; y < sc.settings[1]; ++y) P.at(0, 0, x, y) = 1.0;
  return P;
}

double solved(const SdpProblem& p) {
  Solution s = solve(p);
  INFO(p.origin << ": " << to_string(s.status) << " " << s.message);
  REQUIRE((s.status == SolveStatus::optimal || s.status == SolveStatus::near_optimal));
  return s.objective;
}

}  // namespace

TEST_CASE("ir_di_chsh_level2_block_structure") {
  ProbTable P = deterministic_local_P(Scenario::chsh());
  SdpProblem p = assemble_ir_di_given_P(P, HierarchyLevel::of(2));
  int chi_blocks = 0;
  for (const auto& b : p.blocks)
    if (b.name.rfind("chi", 0) == 0) {
      ++chi_blocks;
      CHECK(b.size == 41);
    }
  // chi[1], four chi[E_{a|x}], four chi[G_lambda]
  CHECK(chi_blocks == 9);
}

TEST_CASE("ir_di_zero_on_deterministic_local_point") {
  ProbTable P = deterministic_local_P(Scenario::chsh());
  double v = solved(assemble_ir_di_given_P(P, HierarchyLevel::of(1)));
  CHECK(std::abs(v) < 1e-6);
}

TEST_CASE("ir_di_saturates_device_ir_at_max_chsh") {
  TiltedChsh tc = tilted_chsh_realization(0.0);
  ProbTable P = born_rule(tc.realization);
  double di = solved(assemble_ir_di_given_P(P, HierarchyLevel::of(2)));
  double dev = ir_device(tc.realization.assemblages[1], 2).value;
  CHECK(std::abs(di - dev) < 1e-3);
  CHECK(di <= dev + 1e-6);  // always a lower bound
}

TEST_CASE("maxviolation_endpoints") {
  BellFunctional f = tilted_chsh_functional(0.0);
  double at0 = solved(assemble_maxviolation_given_ir(f, 0.0, HierarchyLevel::of(2)));
  CHECK(std::abs(at0 - 2.0) < 1e-4);
  double at1 = solved(assemble_maxviolation_given_ir(f, 1.0, HierarchyLevel::of(2)));
  CHECK(std::abs(at1 - 2 * std::sqrt(2.0)) < 1e-3);
  // cross-check against the plain NPA bound
  double npa = npa_quantum_bound(f, HierarchyLevel::of(2));
  CHECK(std::abs(npa - 2 * std::sqrt(2.0)) < 1e-6);
  CHECK(at1 <= npa + 1e-4);
}

TEST_CASE("maxviolation_tilted_alpha1_reaches_sqrt10") {
  BellFunctional f = tilted_chsh_functional(1.0);
  double v = solved(assemble_maxviolation_given_ir(f, 1.0, HierarchyLevel::of(2)));
  CHECK(std::abs(v - std::sqrt(10.0)) < 1e-3);
}

TEST_CASE("min_ir_given_violation_chsh") {
  BellFunctional f = tilted_chsh_functional(0.0);
  BisectionSettings bs;
  bs.tol = 1e-3;
  QuantifierResult r0 = min_ir_given_violation(f, 2.0, HierarchyLevel::of(2), bs);
  CHECK(std::abs(r0.bound) < 1e-4);
  QuantifierResult r1 = min_ir_given_violation(f, 2.4, HierarchyLevel::of(2), bs);
  QuantifierResult r2 = min_ir_given_violation(f, 2.7, HierarchyLevel::of(2), bs);
  CHECK(r1.bound <= r2.bound + 1e-9);  // monotone in the target violation
  CHECK(r1.bound > 0);
  // a target above the relaxation's quantum bound is rejected
  CHECK_THROWS_AS(min_ir_given_violation(f, 3.5, HierarchyLevel::of(2), bs), std::runtime_error);
}

TEST_CASE("variants_vanish_on_local_point") {
  ProbTable P = deterministic_local_P(Scenario::chsh());
  for (Quantifier v : {Quantifier::irj, Quantifier::irp, Quantifier::irr, Quantifier::iw}) {
    double val = solved(assemble_variant(v, P, HierarchyLevel::of(1)));
    INFO(to_string(v));
    CHECK(std::abs(val) < 1e-6);
  }
  CHECK_THROWS_AS(assemble_variant(static_cast<Quantifier>(99), P, HierarchyLevel::of(1)),
                  std::invalid_argument);
}

TEST_CASE("variant_di_bounds_below_device_values_at_max_chsh") {
  TiltedChsh tc = tilted_chsh_realization(0.0);
  ProbTable Pbob = born_rule(tc.realization).transposed();  // quantify Bob's pair
  const Assemblage& bob = tc.realization.assemblages[1];
  for (Quantifier v : {Quantifier::irj, Quantifier::irp, Quantifier::irr, Quantifier::iw}) {
    double di = solved(assemble_variant(v, Pbob, HierarchyLevel::of(1)));
    double dev = variant_device(v, bob, 2).value;
    INFO(to_string(v));
    CHECK(di <= dev + 1e-6);
  }
}

TEST_CASE("gmir_di_zero_for_repeated_measurement_P") {
  // Alice measures the same observable three times; Bob measures X,Z.
  Assemblage xz = pauli_xz_assemblage();
  Realization r;
  r.dim = 2;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(0) = psi(3) = 1 / std::sqrt(2.0);
  r.state = psi * psi.adjoint();
  r.assemblages.push_back({xz[1], xz[1], xz[1]});
  r.assemblages.push_back({xz[0], xz[1], xz[0]});
  ProbTable P = born_rule(r);
  double v = solved(assemble_gmir_di_given_P(P, HierarchyLevel::of(1)));
  CHECK(std::abs(v) < 1e-6);
}

TEST_CASE("gmir_di_zero_for_pairwise_compatible_triple") {
  // eta = 0.7 noisy Paulis: every pair compatible (hollow-triangle regime)
  Realization r;
  r.dim = 2;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(0) = psi(3) = 1 / std::sqrt(2.0);
  r.state = psi * psi.adjoint();
  r.assemblages.push_back(depolarize(pauli_xyz_assemblage(), 0.7, 2));
  r.assemblages.push_back(pauli_xyz_assemblage());
  ProbTable P = born_rule(r);
  double v = solved(assemble_gmir_di_given_P(P, HierarchyLevel::of(1)));
  CHECK(std::abs(v) < 1e-6);
  // and the device value agrees
  CHECK(std::abs(gmir_device(r.assemblages[0], 2).value) < 1e-6);
}

TEST_CASE("gmir_needs_three_settings") {
  ProbTable P = deterministic_local_P(Scenario::chsh());
  CHECK_THROWS_AS(assemble_gmir_di_given_P(P, HierarchyLevel::of(1)), std::invalid_argument);
}

TEST_CASE("gmir_maxviolation_monotone_in_ir0") {
  BellRegistry reg = BellRegistry::load_default();
  BellFunctional f = reg.get("i3322");
  double v0 = solved(assemble_gmir_maxviolation(f, 0.0, HierarchyLevel::of(1)));
  double v1 = solved(assemble_gmir_maxviolation(f, 0.2, HierarchyLevel::of(1)));
  CHECK(v1 >= v0 - 1e-7);
}

TEST_CASE("tradeoff_curve_starts_at_local_bound_and_is_monotone") {
  BellFunctional f = tilted_chsh_functional(0.0);
  auto curve = tradeoff_curve(f, {0.0, 0.05, 0.2}, HierarchyLevel::of(2));
  REQUIRE(curve.size() == 3);
  CHECK(std::abs(curve[0].violation - 2.0) < 1e-4);
  CHECK(curve[0].violation <= curve[1].violation + 1e-6);
  CHECK(curve[1].violation <= curve[2].violation + 1e-6);
  CHECK_THROWS_AS(tradeoff_curve(f, {}, HierarchyLevel::of(1)), std::invalid_argument);
  CHECK_THROWS_AS(tradeoff_curve(f, {0.3, 0.1}, HierarchyLevel::of(1)), std::invalid_argument);
}

TEST_CASE("bob_word_restriction_never_beats_full_word_list") {
  TiltedChsh tc = tilted_chsh_realization(0.5);
  ProbTable P = born_rule(tc.realization);
  double full = solved(assemble_ir_di_given_P(P, HierarchyLevel::of(2)));
  double bob = solved(assemble_ir_di_given_P_bob_words(P, HierarchyLevel::of(2)));
  CHECK(full >= bob - 1e-7);
}

TEST_CASE("level_monotonicity_of_ir_bound") {
  TiltedChsh tc = tilted_chsh_realization(0.8);
  ProbTable P = born_rule(tc.realization);
  double l1 = solved(assemble_ir_di_given_P(P, HierarchyLevel::of(1)));
  double l2 = solved(assemble_ir_di_given_P(P, HierarchyLevel::of(2)));
  CHECK(l2 >= l1 - 1e-7);
}
