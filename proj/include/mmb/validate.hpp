#pragma once

#include "mmb/sdp.hpp"

namespace mmb {

// Residuals of a solution, recomputed from the problem data alone.
struct ResidualReport {
  double min_block_eigenvalue = 0;   // over all PSD blocks, instantiated from values
  double max_equality_residual = 0;  // |expr(values)|
  double min_inequality_slack = 0;   // expr(values), most negative
  double recomputed_gap = 0;         // <M(values), Y> summed over blocks
  double reported_gap = 0;
  bool ok = false;
  std::string detail;
};

ResidualReport validate(const SdpProblem& p, const Solution& s, double tol = 1e-8);

}  // namespace mmb
