#include "mmb/compile.hpp"

#include <algorithm>
#include <cmath>

namespace mmb {

namespace {

// Ordered Gaussian substitution over sparse equalities. Substitutions are
// kept closed: their right-hand sides reference live variables only, which
// takes one back-substitution pass whenever a new pivot is eliminated.
class Eliminator {
 public:
  explicit Eliminator(int nvars) : subs_(nvars), has_sub_(nvars, 0), refs_(nvars) {}

  // expr == 0. Returns false when the row reduces to 0 == c with c != 0.
  bool add_equality(const LinExpr& raw) {
    LinExpr e = resolve(raw);
    if (e.terms.empty()) return std::abs(e.constant) <= kFeasTol;
    // Pivot on the highest variable index with a non-negligible coefficient;
    // high indices are the late-interned (high-degree) words, so moment
    // eliminations flow toward lower-degree words.
    double cmax = 0;
    for (const auto& t : e.terms) cmax = std::max(cmax, std::abs(t.coef));
    std::size_t piv = e.terms.size();
    for (std::size_t k = 0; k < e.terms.size(); ++k)
      if (std::abs(e.terms[k].coef) >= 1e-6 * cmax &&
          (piv == e.terms.size() || e.terms[k].var > e.terms[piv].var))
        piv = k;
    const VarId pv = e.terms[piv].var;
    const double pc = e.terms[piv].coef;
    LinExpr sub;
    sub.constant = -e.constant / pc;
    for (std::size_t k = 0; k < e.terms.size(); ++k)
      if (k != piv) sub.add(e.terms[k].var, -e.terms[k].coef / pc);
    // close existing substitutions against the new pivot
    for (VarId s : refs_[pv]) {
      LinExpr& se = subs_[s];
      double c = 0;
      for (const auto& t : se.terms)
        if (t.var == pv) c += t.coef;
      if (c == 0) continue;
      std::erase_if(se.terms, [pv](const LinTerm& t) { return t.var == pv; });
      se.add_scaled(sub, c);
      se.normalize(kDropTol);
      for (const auto& t : sub.terms) register_ref(t.var, s);
    }
    refs_[pv].clear();
    for (const auto& t : sub.terms) register_ref(t.var, pv);
    subs_[pv] = std::move(sub);
    has_sub_[pv] = 1;
    return true;
  }

  bool is_eliminated(VarId v) const { return has_sub_[v] != 0; }

  // One-level expansion: substitutions are closed, so this is exact.
  LinExpr resolve(const LinExpr& e) const {
    LinExpr out;
    out.constant = e.constant;
    for (const auto& t : e.terms) {
      if (has_sub_[t.var])
        out.add_scaled(subs_[t.var], t.coef);
      else
        out.add(t.var, t.coef);
    }
    out.normalize(kDropTol);
    return out;
  }

  const LinExpr& resolved_sub(VarId v) const { return subs_[v]; }

 private:
  static constexpr double kDropTol = 1e-14;
  static constexpr double kFeasTol = 1e-9;

  void register_ref(VarId v, VarId sub_holder) {
    auto& lst = refs_[v];
    if (lst.empty() || lst.back() != sub_holder) lst.push_back(sub_holder);
  }

  std::vector<LinExpr> subs_;
  std::vector<char> has_sub_;
  std::vector<std::vector<VarId>> refs_;  // live var -> substitutions mentioning it
};

}  // namespace

std::vector<double> CompiledSdp::expand_values(const std::vector<double>& reduced) const {
  std::vector<double> full(orig_num_vars, 0.0);
  for (int v = 0; v < orig_num_vars; ++v) {
    if (reduced_of_orig[v] >= 0) {
      full[v] = reduced[reduced_of_orig[v]];
    } else {
      auto it = eliminated.find(v);
      if (it == eliminated.end()) continue;
      double s = it->second.constant;
      for (const auto& [rv, c] : it->second.terms) s += c * reduced[rv];
      full[v] = s;
    }
  }
  return full;
}

CompiledSdp compile(const SdpProblem& p) {
  if (p.blocks.empty() && p.inequalities.empty())
    throw CompileError("compile: empty problem");
  CompiledSdp cp;
  cp.orig_num_vars = p.num_vars;
  cp.maximize = p.sense == Sense::maximize;

  Eliminator elim(p.num_vars);
  for (const LinExpr& e : p.equalities)
    if (!elim.add_equality(e)) cp.proven_infeasible = true;

  // Resolve all affine maps, find surviving variables that actually appear
  // in a cone.
  std::vector<char> used(p.num_vars, 0);
  struct RawEntry {
    int i, j;
    LinExpr e;
  };
  std::vector<std::vector<RawEntry>> rblocks(p.blocks.size());
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    for (const auto& [i, j, e] : p.blocks[b].entries) {
      LinExpr r = elim.resolve(e);
      for (const auto& t : r.terms) used[t.var] = 1;
      if (!r.terms.empty() || r.constant != 0.0)
        rblocks[b].push_back({i, j, std::move(r)});
    }
  }
  std::vector<LinExpr> rineq(p.inequalities.size());
  for (std::size_t k = 0; k < p.inequalities.size(); ++k) {
    rineq[k] = elim.resolve(p.inequalities[k]);
    for (const auto& t : rineq[k].terms) used[t.var] = 1;
  }
  LinExpr robj = elim.resolve(p.objective);

  for (int v = 0; v < p.num_vars; ++v)
    if (!used[v] && !elim.is_eliminated(v)) {
      // referenced only by the objective (or not at all): no cone touches it
      bool in_obj = false;
      for (const auto& t : robj.terms)
        if (t.var == v) in_obj = true;
      std::string nm = v < static_cast<int>(p.var_names.size()) ? p.var_names[v] : "";
      if (in_obj)
        throw CompileError("compile: variable '" + nm + "' appears only in the objective");
      throw CompileError("compile: dangling variable '" + nm + "'");
    }

  cp.reduced_of_orig.assign(p.num_vars, -1);
  for (int v = 0; v < p.num_vars; ++v)
    if (used[v]) {
      cp.reduced_of_orig[v] = cp.m++;
      cp.orig_of_reduced.push_back(v);
    }
  for (int v = 0; v < p.num_vars; ++v)
    if (elim.is_eliminated(v)) {
      const LinExpr& s = elim.resolved_sub(v);
      CompiledSdp::Sub sub;
      sub.constant = s.constant;
      for (const auto& t : s.terms) sub.terms.emplace_back(cp.reduced_of_orig[t.var], t.coef);
      cp.eliminated.emplace(v, std::move(sub));
    }

  const double osign = cp.maximize ? -1.0 : 1.0;
  cp.c.assign(cp.m, 0.0);
  for (const auto& t : robj.terms) cp.c[cp.reduced_of_orig[t.var]] += osign * t.coef;
  cp.obj_const = osign * robj.constant;

  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    CompiledSdp::Block cb;
    cb.name = p.blocks[b].name;
    cb.size = p.blocks[b].size;
    cb.problem_block = static_cast<int>(b);
    for (const auto& re : rblocks[b]) {
      if (std::abs(re.e.constant) > 0.0)
        cb.entries.push_back({-1, re.i, re.j, re.e.constant});
      for (const auto& t : re.e.terms)
        cb.entries.push_back({cp.reduced_of_orig[t.var], re.i, re.j, t.coef});
    }
    std::sort(cb.entries.begin(), cb.entries.end(), [](const auto& a, const auto& b2) {
      return std::tie(a.var, a.i, a.j) < std::tie(b2.var, b2.i, b2.j);
    });
    cp.blocks.push_back(std::move(cb));
  }
  for (std::size_t k = 0; k < rineq.size(); ++k) {
    CompiledSdp::Block cb;
    cb.name = "ineq" + std::to_string(k);
    cb.size = 1;
    cb.inequality = static_cast<int>(k);
    if (std::abs(rineq[k].constant) > 0.0) cb.entries.push_back({-1, 0, 0, rineq[k].constant});
    for (const auto& t : rineq[k].terms)
      cb.entries.push_back({cp.reduced_of_orig[t.var], 0, 0, t.coef});
    std::sort(cb.entries.begin(), cb.entries.end(), [](const auto& a, const auto& b2) {
      return std::tie(a.var, a.i, a.j) < std::tie(b2.var, b2.i, b2.j);
    });
    cp.blocks.push_back(std::move(cb));
  }
  return cp;
}

}  // namespace mmb
