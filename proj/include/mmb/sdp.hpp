#pragma once

#include <Eigen/Dense>
#include <string>
#include <tuple>
#include <vector>

namespace mmb {

using VarId = int;

struct LinTerm {
  VarId var;
  double coef;
};

// Sparse affine expression over scalar variables.
struct LinExpr {
  std::vector<LinTerm> terms;
  double constant = 0.0;

  LinExpr() = default;
  explicit LinExpr(double c) : constant(c) {}
  static LinExpr of(VarId v, double coef = 1.0) {
    LinExpr e;
    e.terms.push_back({v, coef});
    return e;
  }

  void add(VarId v, double coef) { terms.push_back({v, coef}); }
  void add_scaled(const LinExpr& o, double s);
  // Sort by variable, merge duplicates, drop negligible coefficients.
  void normalize(double drop_tol = 0.0);
  bool empty() const { return terms.empty(); }
  double evaluate(const std::vector<double>& values) const;
};

enum class Sense { minimize, maximize };

// Solver-agnostic conic problem: PSD blocks with affine entries, scalar
// linear equalities (== 0) and inequalities (>= 0), linear objective.
struct SdpProblem {
  struct Block {
    std::string name;
    int size = 0;
    std::vector<std::tuple<int, int, LinExpr>> entries;  // i <= j, missing = 0
  };

  int num_vars = 0;
  std::vector<std::string> var_names;
  std::vector<Block> blocks;
  std::vector<LinExpr> equalities;
  std::vector<LinExpr> inequalities;
  Sense sense = Sense::minimize;
  LinExpr objective;
  std::string origin;
  int level = 0;

  VarId add_var(std::string name);
  Block& add_block(std::string name, int size);
};

struct SolverSettings {
  double tol_gap = 1e-8;
  double tol_feas = 1e-8;
  int max_iters = 200;
  int verbosity = 0;
  double init_scale = 0.0;  // 0 selects automatically
};

enum class SolveStatus { optimal, near_optimal, infeasible, unbounded, numerical_failure };

const char* to_string(SolveStatus s);

struct Solution {
  SolveStatus status = SolveStatus::numerical_failure;
  double objective = 0;       // in the problem's own sense
  double dual_objective = 0;  // same orientation as `objective`
  double duality_gap = 0;
  std::vector<double> values;  // one per problem variable
  std::vector<Eigen::MatrixXd> block_matrices;  // primal slack, per problem block
  std::vector<Eigen::MatrixXd> dual_matrices;
  double max_psd_violation = 0;
  double max_linear_residual = 0;
  int iterations = 0;
  std::string message;

  bool certified(double tol = 1e-6) const {
    return status == SolveStatus::optimal ||
           (status == SolveStatus::near_optimal && duality_gap <= tol);
  }
};

struct CompileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mmb
