#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mmb/bell.hpp"
#include "mmb/realization.hpp"

using namespace mmb;
using Eigen::MatrixXcd;

TEST_CASE("registry_loads_shipped_entries") {
  BellRegistry reg = BellRegistry::load_default();
  auto names = reg.names();
  for (const char* want : {"chsh", "i3322", "i_elegant", "tilted_chsh"})
    CHECK(std::find(names.begin(), names.end(), want) != names.end());
  CHECK_THROWS_AS(reg.get("nope"), std::invalid_argument);
}

TEST_CASE("chsh_bounds") {
  BellRegistry reg = BellRegistry::load_default();
  BellFunctional f = reg.get("chsh");
  CHECK(f.local_bound == 2);
  CHECK(std::abs(f.deterministic_bound() - 2) < 1e-12);
  ProbTable P = born_rule(tilted_chsh_realization(0.0).realization);
  CHECK(std::abs(f.evaluate(P) - 2 * std::sqrt(2.0)) < 1e-9);
}

TEST_CASE("tilted_chsh_parametric") {
  BellRegistry reg = BellRegistry::load_default();
  for (double alpha : {0.0, 0.5, 1.0}) {
    BellFunctional f = reg.get("tilted_chsh", {{"alpha", alpha}});
    CHECK(std::abs(f.local_bound - (2 + alpha)) < 1e-12);
    CHECK(std::abs(f.deterministic_bound() - (2 + alpha)) < 1e-12);
    ProbTable P = born_rule(tilted_chsh_realization(alpha).realization);
    CHECK(std::abs(f.evaluate(P) - std::sqrt(8 + 2 * alpha * alpha)) < 1e-9);
  }
}

TEST_CASE("i3322_local_bound_zero") {
  BellRegistry reg = BellRegistry::load_default();
  BellFunctional f = reg.get("i3322");
  CHECK(f.local_bound == 0);
  CHECK(std::abs(f.deterministic_bound()) < 1e-12);
}

TEST_CASE("elegant_reaches_four_sqrt_three") {
  BellRegistry reg = BellRegistry::load_default();
  BellFunctional f = reg.get("i_elegant");
  CHECK(std::abs(f.deterministic_bound() - 6) < 1e-12);

  // Paulis for Alice; Bob measures along the diagonal directions, with the
  // Y component flipped to match the phi+ correlations <XX>=<ZZ>=1, <YY>=-1.
  MatrixXcd X(2, 2), Y(2, 2), Z(2, 2);
  X << 0, 1, 1, 0;
  Y << std::complex<double>(0, 0), std::complex<double>(0, -1), std::complex<double>(0, 1),
      std::complex<double>(0, 0);
  Z << 1, 0, 0, -1;
  const double s = 1 / std::sqrt(3.0);
  auto bob = [&](double nx, double ny, double nz) { return s * (nx * X - ny * Y + nz * Z); };
  Realization r;
  r.dim = 2;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(0) = psi(3) = 1 / std::sqrt(2.0);
  r.state = psi * psi.adjoint();
  auto dich = [](const MatrixXcd& O) {
    MatrixXcd I = MatrixXcd::Identity(2, 2);
    return std::vector<MatrixXcd>{0.5 * (I + O), 0.5 * (I - O)};
  };
  r.assemblages.push_back({dich(X), dich(Y), dich(Z)});
  r.assemblages.push_back({dich(bob(1, 1, 1)), dich(bob(1, -1, -1)), dich(bob(-1, 1, -1)),
                           dich(bob(-1, -1, 1))});
  ProbTable P = born_rule(r);
  CHECK(std::abs(f.evaluate(P) - 4 * std::sqrt(3.0)) < 1e-9);
}

TEST_CASE("cg_and_correlator_forms_agree_on_chsh") {
  // same functional written both ways must evaluate identically
  BellFunctional corr = BellFunctional::from_correlators(Scenario::chsh(), "c", {0, 0}, {0, 0},
                                                         {{1, 1}, {1, -1}}, 2);
  // CHSH in CG form: 4*(P00 terms) - 2*(marginals) + const 2; the constant
  // offset means local bounds differ by it
  BellFunctional cg = BellFunctional::from_cg(
      Scenario::chsh(), "g", {-4, 0}, {-4, 0}, {{4, 4}, {4, -4}}, 0);
  ProbTable P = born_rule(sample_random_realization(2, Scenario::chsh(), 3, false));
  CHECK(std::abs(corr.evaluate(P) - (cg.evaluate(P) + 2.0)) < 1e-10);
}
