#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmb/probtable.hpp"
#include "mmb/words.hpp"

namespace mmb {

// A linear functional on bipartite correlations, stored outcome-resolved:
// I(P) = sum joint[a,b,x,y] P(a,b|x,y) + sum marg_a[a,x] P_A(a|x)
//        + sum marg_b[b,y] P_B(b|y).
struct BellFunctional {
  std::string name;
  std::string source;
  Scenario sc;
  std::vector<double> joint;   // [a][b][x][y], ProbTable layout
  std::vector<double> marg_a;  // [a][x]
  std::vector<double> marg_b;  // [b][y]
  double local_bound = 0;
  std::optional<double> quantum_bound;

  double& jc(int a, int b, int x, int y);
  double jc(int a, int b, int x, int y) const;
  double& ma(int a, int x);
  double ma(int a, int x) const;
  double& mb(int b, int y);
  double mb(int b, int y) const;

  double evaluate(const ProbTable& P) const;

  static BellFunctional zero(const Scenario& sc, std::string name);
  // Collins-Gisin table: coefficients on P_A(0|x), P_B(0|y), P(0,0|x,y).
  static BellFunctional from_cg(const Scenario& sc, std::string name,
                                const std::vector<double>& alice,
                                const std::vector<double>& bob,
                                const std::vector<std::vector<double>>& joint_00,
                                double local_bound);
  // correlator form, outcome 0 -> +1: sum j[x][y] <AxBy> + sum a[x]<Ax> + ...
  static BellFunctional from_correlators(const Scenario& sc, std::string name,
                                         const std::vector<double>& alice,
                                         const std::vector<double>& bob,
                                         const std::vector<std::vector<double>>& corr,
                                         double local_bound);
  // exact local bound by enumeration of deterministic strategies
  double deterministic_bound() const;
};

// alpha <A1> + <A1B1> + <A1B2> + <A2B1> - <A2B2>, local bound 2 + alpha.
BellFunctional tilted_chsh_functional(double alpha);

// Registry of named inequalities loaded from a JSON file. The `tilted_chsh`
// entry is parametric; fetch it through get() with an alpha parameter.
class BellRegistry {
 public:
  static BellRegistry load(const std::string& path);
  // resolution order: explicit path argument, MMB_REGISTRY env var,
  // ./data/bell_registry.json
  static BellRegistry load_default(const std::string& override_path = "");

  BellFunctional get(const std::string& name,
                     const std::map<std::string, double>& params = {}) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, BellFunctional> entries_;
};

}  // namespace mmb
