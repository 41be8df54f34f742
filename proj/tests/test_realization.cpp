#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mmb/realization.hpp"

using namespace mmb;

TEST_CASE("tilted_chsh_violation_formula") {
  for (double alpha : {0.0, 0.1, 0.5, 1.0, 1.5}) {
    TiltedChsh t = tilted_chsh_realization(alpha);
    CHECK(std::abs(t.violation - std::sqrt(8 + 2 * alpha * alpha)) < 1e-9);
    t.realization.validate();
  }
  CHECK_THROWS_AS(tilted_chsh_realization(2.0), std::invalid_argument);
  // alpha = 0 limit: maximally entangled, theta = pi/4
  CHECK(std::abs(tilted_chsh_realization(0.0).theta - M_PI / 4) < 1e-12);
}

TEST_CASE("born_rule_normalization_and_no_signaling") {
  Realization r = sample_random_realization(3, Scenario::bell(2, 3, 2, 2), 11, false);
  ProbTable P = born_rule(r);
  P.validate(1e-10);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      double s = 0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 2; ++b) s += P.at(a, b, x, y);
      CHECK(std::abs(s - 1.0) < 1e-12);
    }
}

TEST_CASE("born_rule_deterministic_product_state") {
  // |0><0| x |0><0| with Z measurements on both sides: outcome (0,0) certain
  Realization r;
  r.dim = 2;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(0) = 1;
  r.state = psi * psi.adjoint();
  Eigen::MatrixXcd P0 = Eigen::MatrixXcd::Zero(2, 2), P1 = Eigen::MatrixXcd::Zero(2, 2);
  P0(0, 0) = 1;
  P1(1, 1) = 1;
  r.assemblages = {{{P0, P1}}, {{P0, P1}}};
  r.projective = true;
  ProbTable P = born_rule(r);
  CHECK(std::abs(P.at(0, 0, 0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(P.at(1, 1, 0, 0)) < 1e-14);
}

TEST_CASE("mub_pair_reaches_tsirelson") {
  TiltedChsh t = tilted_chsh_realization(0.0);
  CHECK(std::abs(t.violation - 2 * std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("sampling_is_seed_deterministic") {
  Scenario sc = Scenario::chsh();
  Realization a = sample_random_realization(2, sc, 42, true);
  Realization b = sample_random_realization(2, sc, 42, true);
  CHECK((a.state - b.state).cwiseAbs().maxCoeff() == 0.0);
  for (int p = 0; p < 2; ++p)
    for (int x = 0; x < 2; ++x)
      for (int o = 0; o < 2; ++o)
        CHECK((a.assemblages[p][x][o] - b.assemblages[p][x][o]).cwiseAbs().maxCoeff() == 0.0);
  Realization c = sample_random_realization(2, sc, 43, true);
  CHECK((a.state - c.state).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("projective_sampling_gives_idempotent_effects") {
  Realization r = sample_random_realization(3, Scenario::bell(3, 2, 2, 2), 5, true);
  for (const auto& party : r.assemblages)
    for (const auto& setting : party)
      for (const auto& E : setting) CHECK((E * E - E).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("povm_sampling_gives_valid_effects") {
  Realization r = sample_random_realization(2, Scenario::chsh(), 9, false);
  for (const auto& party : r.assemblages)
    for (const auto& setting : party)
      for (const auto& E : setting) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(E, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > -1e-12);
        CHECK(es.eigenvalues().maxCoeff() < 1.0 + 1e-12);
      }
}

TEST_CASE("realization_roundtrip_serialization") {
  Realization r = sample_random_realization(2, Scenario::bell(2, 2, 3, 2), 77, false);
  Realization q = Realization::deserialize(r.serialize());
  CHECK(q.dim == r.dim);
  CHECK((q.state - r.state).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((q.assemblages[1][2][1] - r.assemblages[1][2][1]).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("realify_preserves_spectrum_structure") {
  Realization r = sample_random_realization(3, Scenario::bell(1, 3, 1, 2), 3, false);
  const Eigen::MatrixXcd& E = r.assemblages[0][0][0];
  Eigen::MatrixXd R = realify(E);
  CHECK((R - R.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ec(E, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> er(R, Eigen::EigenvaluesOnly);
  CHECK(std::abs(er.eigenvalues().minCoeff() - ec.eigenvalues().minCoeff()) < 1e-12);
  CHECK(std::abs(er.eigenvalues().sum() - 2 * ec.eigenvalues().sum()) < 1e-12);
}
