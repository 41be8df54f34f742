#include "mmb/validate.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace mmb {

ResidualReport validate(const SdpProblem& p, const Solution& s, double tol) {
  ResidualReport r;
  r.min_block_eigenvalue = 1e300;
  r.min_inequality_slack = 1e300;
  if (s.values.size() != static_cast<std::size_t>(p.num_vars)) {
    r.ok = false;
    r.detail = "value vector size mismatch";
    return r;
  }
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    const auto& blk = p.blocks[b];
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(blk.size, blk.size);
    for (const auto& [i, j, e] : blk.entries) {
      const double v = e.evaluate(s.values);
      M(i, j) = v;
      M(j, i) = v;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    r.min_block_eigenvalue = std::min(r.min_block_eigenvalue, es.eigenvalues().minCoeff());
    if (b < s.dual_matrices.size() && s.dual_matrices[b].size() == M.size())
      r.recomputed_gap += (M.array() * s.dual_matrices[b].array()).sum();
  }
  for (const auto& e : p.equalities)
    r.max_equality_residual = std::max(r.max_equality_residual, std::abs(e.evaluate(s.values)));
  for (const auto& e : p.inequalities)
    r.min_inequality_slack = std::min(r.min_inequality_slack, e.evaluate(s.values));
  if (p.inequalities.empty()) r.min_inequality_slack = 0;
  r.reported_gap = s.duality_gap;

  r.ok = r.min_block_eigenvalue >= -tol && r.max_equality_residual <= tol &&
         r.min_inequality_slack >= -tol;
  if (!r.ok) {
    r.detail = "residuals exceed tolerance";
  }
  return r;
}

}  // namespace mmb
