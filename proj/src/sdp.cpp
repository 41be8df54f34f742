#include "mmb/sdp.hpp"

#include <algorithm>
#include <cmath>

namespace mmb {

void LinExpr::add_scaled(const LinExpr& o, double s) {
  for (const auto& t : o.terms) terms.push_back({t.var, t.coef * s});
  constant += o.constant * s;
}

void LinExpr::normalize(double drop_tol) {
  std::sort(terms.begin(), terms.end(),
            [](const LinTerm& a, const LinTerm& b) { return a.var < b.var; });
  std::size_t w = 0;
  for (std::size_t r = 0; r < terms.size();) {
    VarId v = terms[r].var;
    double c = 0;
    while (r < terms.size() && terms[r].var == v) c += terms[r++].coef;
    if (std::abs(c) > drop_tol) terms[w++] = {v, c};
  }
  terms.resize(w);
}

double LinExpr::evaluate(const std::vector<double>& values) const {
  double s = constant;
  for (const auto& t : terms) s += t.coef * values[t.var];
  return s;
}

VarId SdpProblem::add_var(std::string name) {
  var_names.push_back(std::move(name));
  return num_vars++;
}

SdpProblem::Block& SdpProblem::add_block(std::string name, int size) {
  blocks.push_back(Block{std::move(name), size, {}});
  return blocks.back();
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::near_optimal: return "near-optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::numerical_failure: return "numerical-failure";
  }
  return "?";
}

}  // namespace mmb
