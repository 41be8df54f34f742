#pragma once

#include "mmb/realization.hpp"
#include "mmb/sdp.hpp"

namespace mmb {

// Outcome assignments indexing parent-POVM elements: one outcome per setting.
std::vector<std::vector<int>> deterministic_strategies(const std::vector<int>& outcome_counts);

enum class Quantifier { ir, irj, irp, irr, iw, gmir };

Quantifier quantifier_from_name(const std::string& name);
const char* to_string(Quantifier q);

// Device-level SDPs on explicit effect matrices. Complex Hermitian data is
// realified by the 2x2 block embedding; the trace normalization uses the
// complex-dimension d throughout.
SdpProblem build_ir_device_problem(const Assemblage& a, int d);
SdpProblem build_variant_device_problem(Quantifier v, const Assemblage& a, int d);
SdpProblem build_gmir_device_problem(const Assemblage& a, int d);

struct OracleResult {
  double value = 0;
  Solution solution;
};

OracleResult ir_device(const Assemblage& a, int d, const SolverSettings& st = {});
OracleResult variant_device(Quantifier v, const Assemblage& a, int d,
                            const SolverSettings& st = {});
OracleResult gmir_device(const Assemblage& a, int d, const SolverSettings& st = {});

// Helpers shared with the moment-side assemblies: a Hermitian matrix
// variable embedded as a real symmetric block.
struct HermVar {
  int d = 0;
  std::vector<VarId> re;  // upper triangle incl. diagonal, row-major
  std::vector<VarId> im;  // strict upper triangle, row-major

  static HermVar create(SdpProblem& p, int d, const std::string& prefix);
  // The complex trace (a real number for Hermitian matrices).
  LinExpr trace() const;
};

// Accumulates affine entries of one symmetric block, then flushes them into
// an SdpProblem block.
class BlockBuilder {
 public:
  BlockBuilder(int n) : n_(n), entries_(static_cast<std::size_t>(n) * (n + 1) / 2) {}
  LinExpr& at(int i, int j);
  int size() const { return n_; }
  // adds coef * H for a Hermitian variable (realified layout)
  void add(const HermVar& h, double coef);
  // adds coef * realify(C) for a constant Hermitian matrix
  void add_const(const Eigen::MatrixXcd& C, double coef);
  void flush(SdpProblem& p, const std::string& name);

 private:
  int n_;
  std::vector<LinExpr> entries_;
};

// Entrywise equality of two Hermitian expressions given as builders is not
// needed; device constraints are emitted directly as scalar equalities over
// the HermVar components.

}  // namespace mmb
