#pragma once

#include <unordered_map>

#include "mmb/sdp.hpp"

namespace mmb {

// Canonical LMI form: minimize c·z subject to F0_b + sum_i z_i F_{b,i} >= 0
// for every block b. Equalities are eliminated by ordered substitution,
// scalar inequalities become 1x1 blocks, maximization is negated away.
struct CompiledSdp {
  struct Entry {
    int var;  // reduced index, -1 for the constant part
    int i, j; // i <= j
    double coef;
  };
  struct Block {
    std::string name;
    int size = 0;
    std::vector<Entry> entries;  // sorted by (var, i, j)
    int problem_block = -1;      // index into SdpProblem::blocks, -1 for inequalities
    int inequality = -1;         // index into SdpProblem::inequalities
  };

  int m = 0;  // reduced variable count
  std::vector<double> c;
  double obj_const = 0;
  bool maximize = false;
  std::vector<Block> blocks;

  int orig_num_vars = 0;
  std::vector<int> orig_of_reduced;
  std::vector<int> reduced_of_orig;  // -1 when eliminated
  struct Sub {
    std::vector<std::pair<int, double>> terms;  // over reduced variables
    double constant = 0;
  };
  std::unordered_map<int, Sub> eliminated;
  bool proven_infeasible = false;  // an equality reduced to 0 == nonzero

  // Recover values of all original variables from reduced ones.
  std::vector<double> expand_values(const std::vector<double>& reduced) const;
};

CompiledSdp compile(const SdpProblem& p);

}  // namespace mmb
