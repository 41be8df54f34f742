#pragma once

#include <string>
#include <vector>

#include "mmb/words.hpp"

namespace mmb {

// A full bipartite conditional distribution P(a,b|x,y).
struct ProbTable {
  Scenario sc;
  std::vector<double> p;  // index ((a*|B|+b)*|X|+x)*|Y|+y

  static ProbTable zeros(const Scenario& sc);

  double& at(int a, int b, int x, int y);
  double at(int a, int b, int x, int y) const;

  double marginal_a(int a, int x) const;  // independent of y by no-signaling
  double marginal_b(int b, int y) const;

  // Normalization and no-signaling within tol; throws on violation.
  void validate(double tol = 1e-8) const;

  // Swap the roles of the two parties.
  ProbTable transposed() const;

  std::string to_json() const;
  static ProbTable from_json(const std::string& text);
  static ProbTable load(const std::string& path);
  void save(const std::string& path) const;
};

}  // namespace mmb
