#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "mmb/probtable.hpp"
#include "mmb/words.hpp"

namespace mmb {

// One party's measurements: [setting][outcome] effect matrices.
using Assemblage = std::vector<std::vector<Eigen::MatrixXcd>>;

// An explicit quantum model: local dimension, bipartite (or single-party)
// state, and one assemblage per party.
struct Realization {
  int dim = 2;
  Eigen::MatrixXcd state;               // d^parties x d^parties density matrix
  std::vector<Assemblage> assemblages;  // per party
  bool projective = false;

  void validate(double tol = 1e-10) const;
  Scenario scenario() const;

  std::string serialize() const;  // structured text, row-major complex entries
  static Realization deserialize(const std::string& text);
  static Realization load(const std::string& path);
  void save(const std::string& path) const;
};

void validate_assemblage(const Assemblage& a, int d, bool projective, double tol = 1e-10);

// P(a,b|x,y) = tr[(E_a|x (x) E_b|y) rho].
ProbTable born_rule(const Realization& r);

// Optimal tilted-CHSH model: |psi> = cos(theta)|00> + sin(theta)|11>,
// A1 = Z, A2 = X, Bob measures cos(mu) Z +/- sin(mu) X with
// mu = atan(sin 2theta), theta = (1/2) atan(sqrt((4-a^2)/(2a^2)))
// (theta = pi/4 at a = 0 by continuity). Violation sqrt(8+2a^2).
struct TiltedChsh {
  Realization realization;
  double violation;
  double theta, mu;
};
TiltedChsh tilted_chsh_realization(double alpha);

// Seeded random model. Projective mode partitions the columns of a Haar
// unitary into rank-chosen projectors; POVM mode normalizes random PSD
// effects. State is Haar-random pure.
Realization sample_random_realization(int d, const Scenario& sc, std::uint64_t seed,
                                      bool projective);

// Named qubit assemblages used by tests and the CLI.
Assemblage pauli_xz_assemblage();
Assemblage pauli_xyz_assemblage();
Assemblage trine_assemblage();
// White-noise mixing: E -> eta E + (1-eta) tr(E)/d * I.
Assemblage depolarize(const Assemblage& a, double eta, int d);

// Hermitian d x d -> symmetric 2d x 2d real embedding [[A,-B],[B,A]].
Eigen::MatrixXd realify(const Eigen::MatrixXcd& H);

}  // namespace mmb
