#pragma once

#include "mmb/bell.hpp"
#include "mmb/moments.hpp"
#include "mmb/oracle.hpp"
#include "mmb/probtable.hpp"
#include "mmb/sdp.hpp"

namespace mmb {

struct QuantifierResult {
  std::string quantifier;
  double bound = 0;
  Solution report;
  int level = 0;
  std::string mode;
  double lower_bracket = 0, upper_bracket = 0;  // bisection drivers
};

// DI lower bound on the incompatibility robustness of the first party's
// measurements, given the full observed distribution. Fixed entries pin the
// observed probabilities; the nonlinear normalization is relaxed to the
// fixed positions.
SdpProblem assemble_ir_di_given_P(const ProbTable& P, const HierarchyLevel& lvl);

// Max Bell value attainable when the first party's robustness is at most
// ir0; here the normalization constraint is exact.
SdpProblem assemble_maxviolation_given_ir(const BellFunctional& f, double ir0,
                                          const HierarchyLevel& lvl);

struct BisectionSettings {
  double tol = 1e-4;
  int max_iters = 30;
  double ir_hi = 16.0;  // upper end of the search interval
};

// inf { ir0 : maxviolation(ir0) >= K } by bisection; monotone because adding
// (d_ir/|L|) chi[1] to every chi[G_l] stays feasible.
QuantifierResult min_ir_given_violation(const BellFunctional& f, double K,
                                        const HierarchyLevel& lvl,
                                        const BisectionSettings& bs = {},
                                        const SolverSettings& st = {});

// Appendix-style variants over the same moment machinery.
SdpProblem assemble_variant(Quantifier v, const ProbTable& P, const HierarchyLevel& lvl);

// Genuine triplewise incompatibility robustness, given-P (relaxed
// normalization) and max-violation (exact normalization) forms.
SdpProblem assemble_gmir_di_given_P(const ProbTable& P, const HierarchyLevel& lvl);
SdpProblem assemble_gmir_maxviolation(const BellFunctional& f, double ir0,
                                      const HierarchyLevel& lvl);

// min total GMIR given only a Bell value K (normalization constraint dropped
// entirely, as the fixed part is uncharacterized).
SdpProblem assemble_gmir_given_violation(const BellFunctional& f, double K,
                                         const HierarchyLevel& lvl);

// Violation threshold above which genuine triplewise incompatibility is
// certified: max I(P) at zero robustness, reported relative to the local
// bound.
QuantifierResult gmi_threshold(const BellFunctional& f, const HierarchyLevel& lvl,
                               const SolverSettings& st = {});

struct TradeoffPoint {
  double ir0 = 0;
  double violation = 0;
  SolveStatus status = SolveStatus::numerical_failure;
};
std::vector<TradeoffPoint> tradeoff_curve(const BellFunctional& f,
                                          const std::vector<double>& ir_grid,
                                          const HierarchyLevel& lvl, bool gmi = false,
                                          const SolverSettings& st = {});

// Plain Navascues-Pironio-Acin upper bound on the maximal quantum value,
// over one-effect-per-setting projector words (dichotomic scenarios).
double npa_quantum_bound(const BellFunctional& f, const HierarchyLevel& lvl,
                         const SolverSettings& st = {});

// Same DI robustness bound restricted to second-party-only words: the
// assemblage-moment-matrix special case used for dominance checks.
SdpProblem assemble_ir_di_given_P_bob_words(const ProbTable& P, const HierarchyLevel& lvl);

}  // namespace mmb
