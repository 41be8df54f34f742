#include "mmb/quantifiers.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "mmb/solver.hpp"

namespace mmb {

namespace {

// Shared scaffolding of every moment-side assembly: word list, shared moment
// index, chi[1] and the chi[E_{a|x}] localizers with their PSD blocks, the
// completeness constraints, and on-demand moment variables.
struct Model {
  Scenario sc;
  std::shared_ptr<const std::vector<Monomial>> words;
  MomentIndex index;
  SdpProblem p;
  std::vector<VarId> mvar;
  MomentTemplate chi1;
  std::vector<std::vector<MomentTemplate>> chiE;  // [x][a]
  std::set<std::string> eq_seen;

  explicit Model(const Scenario& s) : sc(s), index(s) {}

  VarId var(MomentId id) {
    while (static_cast<int>(mvar.size()) <= id) {
      const int k = static_cast<int>(mvar.size());
      mvar.push_back(p.add_var("m:" + index.representative(k).str()));
    }
    return mvar[id];
  }

  void add_entry(LinExpr& e, const std::optional<MomentId>& id, double coef) {
    if (id) e.add(var(*id), coef);
  }

  void add_equality_unique(LinExpr e) {
    e.normalize(1e-14);
    if (e.terms.empty() && e.constant == 0.0) return;
    std::ostringstream key;
    for (const auto& t : e.terms) key << t.var << ":" << t.coef << ";";
    key << "|" << e.constant;
    if (eq_seen.insert(key.str()).second) p.equalities.push_back(std::move(e));
  }
};

Model build_model(const Scenario& sc, const HierarchyLevel& lvl, bool bob_words_only = false) {
  Model m(sc);
  auto all = generate_word_list(sc, lvl);
  if (bob_words_only) {
    std::vector<Monomial> bob;
    for (const auto& w : all)
      if (w.factors[0].empty()) bob.push_back(w);
    all = std::move(bob);
  }
  m.words = std::make_shared<const std::vector<Monomial>>(std::move(all));
  m.chi1 = build_identity_template(sc, m.words, m.index);
  m.chiE.resize(sc.settings[0]);
  for (int x = 0; x < sc.settings[0]; ++x)
    for (int a = 0; a < sc.outcomes[0]; ++a)
      m.chiE[x].push_back(build_effect_template(sc, m.words, Symbol::effect(0, x, a), m.index));

  const int n = m.chi1.size();
  auto& b1 = m.p.add_block("chi1", n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (auto id = m.chi1.entry(i, j)) b1.entries.emplace_back(i, j, LinExpr::of(m.var(*id)));
  for (int x = 0; x < sc.settings[0]; ++x)
    for (int a = 0; a < sc.outcomes[0]; ++a) {
      auto& be = m.p.add_block("chiE:" + std::to_string(x) + "," + std::to_string(a), n);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          if (auto id = m.chiE[x][a].entry(i, j))
            be.entries.emplace_back(i, j, LinExpr::of(m.var(*id)));
    }
  // completeness: sum_a chi[E_{a|x}] = chi[1], entrywise
  for (int x = 0; x < sc.settings[0]; ++x)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        LinExpr e;
        for (int a = 0; a < sc.outcomes[0]; ++a) m.add_entry(e, m.chiE[x][a].entry(i, j), 1.0);
        m.add_entry(e, m.chi1.entry(i, j), -1.0);
        m.add_equality_unique(std::move(e));
      }
  return m;
}

struct UBlock {
  UnknownBlockTemplate t;
  std::vector<VarId> vars;
  VarId unit = -1;

  LinExpr entry(int i, int j) const {
    LinExpr e;
    if (auto id = t.entry(i, j)) e.add(vars[*id], 1.0);
    return e;
  }
  void add_entry(LinExpr& e, int i, int j, double coef) const {
    if (auto id = t.entry(i, j)) e.add(vars[*id], coef);
  }
};

UBlock add_unknown_block(Model& m, const std::string& tag) {
  UBlock u;
  u.t = build_unknown_template(m.sc, m.words, tag);
  for (int k = 0; k < u.t.index.size(); ++k)
    u.vars.push_back(m.p.add_var("u:" + tag + ":" + std::to_string(k)));
  u.unit = u.vars[u.t.unit_variable()];
  const int n = u.t.size();
  auto& b = m.p.add_block("chi[" + tag + "]", n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (auto id = u.t.entry(i, j)) b.entries.emplace_back(i, j, LinExpr::of(u.vars[*id]));
  return u;
}

// positions of chi[1] carrying observed probabilities, with their values
std::vector<std::tuple<int, int, double>> fixed_positions(Model& m, const FixedAssignment& f) {
  std::map<MomentId, double> val;
  for (const auto& [id, v] : f.values) val[id] = v;
  std::vector<std::tuple<int, int, double>> out;
  const int n = m.chi1.size();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (auto id = m.chi1.entry(i, j)) {
        auto it = val.find(*id);
        if (it != val.end()) out.emplace_back(i, j, it->second);
      }
  return out;
}

void pin_fixed(Model& m, const FixedAssignment& f) {
  for (const auto& [id, v] : f.values) {
    LinExpr e = LinExpr::of(m.var(id));
    e.constant = -v;
    m.add_equality_unique(std::move(e));
  }
}

LinExpr bell_expr(Model& m, const BellFunctional& f) {
  if (!(f.sc == m.sc)) throw std::invalid_argument("bell functional scenario mismatch");
  LinExpr e;
  for (int a = 0; a < m.sc.outcomes[0]; ++a)
    for (int x = 0; x < m.sc.settings[0]; ++x)
      if (f.ma(a, x) != 0)
        e.add(m.var(m.index.intern(Monomial::single(2, Symbol::effect(0, x, a)))), f.ma(a, x));
  for (int b = 0; b < m.sc.outcomes[1]; ++b)
    for (int y = 0; y < m.sc.settings[1]; ++y)
      if (f.mb(b, y) != 0)
        e.add(m.var(m.index.intern(Monomial::single(2, Symbol::effect(1, y, b)))), f.mb(b, y));
  for (int a = 0; a < m.sc.outcomes[0]; ++a)
    for (int b = 0; b < m.sc.outcomes[1]; ++b)
      for (int x = 0; x < m.sc.settings[0]; ++x)
        for (int y = 0; y < m.sc.settings[1]; ++y)
          if (f.jc(a, b, x, y) != 0) {
            Monomial w = Monomial::identity(2);
            w.factors[0] = {Symbol::effect(0, x, a)};
            w.factors[1] = {Symbol::effect(1, y, b)};
            e.add(m.var(m.index.intern(w)), f.jc(a, b, x, y));
          }
  e.normalize();
  return e;
}

// sum_l delta_{a,l_x} chi[G_l] (+ extra unknowns) - chi[E_{a|x}] >= 0
void add_cover_block(Model& m, const std::string& name,
                     const std::vector<const UBlock*>& parts, const MomentTemplate& chi_e) {
  const int n = m.chi1.size();
  auto& b = m.p.add_block(name, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      LinExpr e;
      for (const UBlock* u : parts) u->add_entry(e, i, j, 1.0);
      m.add_entry(e, chi_e.entry(i, j), -1.0);
      e.normalize(1e-14);
      if (!e.terms.empty() || e.constant != 0.0) b.entries.emplace_back(i, j, std::move(e));
    }
}

std::vector<std::vector<int>> alice_strategies(const Scenario& sc) {
  return deterministic_strategies(std::vector<int>(sc.settings[0], sc.outcomes[0]));
}

}  // namespace

SdpProblem assemble_ir_di_given_P(const ProbTable& P, const HierarchyLevel& lvl) {
  const Scenario& sc = P.sc;
  Model m = build_model(sc, lvl);
  FixedAssignment fa = fixed_assignments(sc, m.index, P);
  const auto lambdas = alice_strategies(sc);
  std::vector<UBlock> G;
  for (std::size_t l = 0; l < lambdas.size(); ++l)
    G.push_back(add_unknown_block(m, "G" + std::to_string(l)));
  LinExpr s;  // sum_l chi[G_l]_1
  for (const auto& g : G) s.add(g.unit, 1.0);

  for (int x = 0; x < sc.settings[0]; ++x)
    for (int a = 0; a < sc.outcomes[0]; ++a) {
      std::vector<const UBlock*> parts;
      for (std::size_t l = 0; l < lambdas.size(); ++l)
        if (lambdas[l][x] == a) parts.push_back(&G[l]);
      add_cover_block(m, "cover:" + std::to_string(x) + "," + std::to_string(a), parts,
                      m.chiE[x][a]);
    }

  // relaxed normalization on the observed positions only
  for (const auto& [i, j, val] : fixed_positions(m, fa)) {
    LinExpr e;
    for (const auto& g : G) g.add_entry(e, i, j, 1.0);
    e.add_scaled(s, -val);
    m.add_equality_unique(std::move(e));
  }
  pin_fixed(m, fa);

  m.p.objective = s;
  m.p.objective.constant = -1.0;
  m.p.sense = Sense::minimize;
  m.p.origin = "ir-di-given-P";
  m.p.level = lvl.level;
  return std::move(m.p);
}

SdpProblem assemble_maxviolation_given_ir(const BellFunctional& f, double ir0,
                                          const HierarchyLevel& lvl) {
  if (ir0 < 0) throw std::invalid_argument("ir0 must be >= 0");
  const Scenario& sc = f.sc;
  Model m = build_model(sc, lvl);
  const auto lambdas = alice_strategies(sc);
  std::vector<UBlock> G;
  for (std::size_t l = 0; l < lambdas.size(); ++l)
    G.push_back(add_unknown_block(m, "G" + std::to_string(l)));
  LinExpr s;
  for (const auto& g : G) s.add(g.unit, 1.0);

  for (int x = 0; x < sc.settings[0]; ++x)
    for (int a = 0; a < sc.outcomes[0]; ++a) {
      std::vector<const UBlock*> parts;
      for (std::size_t l = 0; l < lambdas.size(); ++l)
        if (lambdas[l][x] == a) parts.push_back(&G[l]);
      add_cover_block(m, "cover:" + std::to_string(x) + "," + std::to_string(a), parts,
                      m.chiE[x][a]);
    }

  // exact normalization: sum_l chi[G_l] = (ir0+1) chi[1], all entries
  const int n = m.chi1.size();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      LinExpr e;
      for (const auto& g : G) g.add_entry(e, i, j, 1.0);
      m.add_entry(e, m.chi1.entry(i, j), -(ir0 + 1.0));
      m.add_equality_unique(std::move(e));
    }
  LinExpr sunit = s;
  sunit.constant = -(ir0 + 1.0);
  m.add_equality_unique(std::move(sunit));

  m.p.objective = bell_expr(m, f);
  m.p.sense = Sense::maximize;
  m.p.origin = "maxviolation-given-ir:" + f.name;
  m.p.level = lvl.level;
  return std::move(m.p);
}

QuantifierResult min_ir_given_violation(const BellFunctional& f, double K,
                                        const HierarchyLevel& lvl, const BisectionSettings& bs,
                                        const SolverSettings& st) {
  QuantifierResult r;
  r.quantifier = "ir";
  r.mode = "given-violation";
  r.level = lvl.level;
  const double slack = 1e-7;

  auto maxviol = [&](double ir0) {
    Solution s = solve(assemble_maxviolation_given_ir(f, ir0, lvl), st);
    if (s.status != SolveStatus::optimal && s.status != SolveStatus::near_optimal)
      throw std::runtime_error("maxviolation solve failed at ir0=" + std::to_string(ir0) + ": " +
                               to_string(s.status));
    return s;
  };

  Solution at_zero = maxviol(0.0);
  if (at_zero.objective >= K - slack) {
    r.bound = 0;
    r.lower_bracket = r.upper_bracket = 0;
    r.report = std::move(at_zero);
    return r;
  }
  Solution at_hi = maxviol(bs.ir_hi);
  if (at_hi.objective < K - slack)
    throw std::runtime_error("violation target exceeds the relaxation's quantum bound");

  double lo = 0, hi = bs.ir_hi;
  for (int it = 0; it < bs.max_iters && hi - lo > bs.tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    Solution sm = maxviol(mid);
    if (sm.objective >= K - slack) {
      hi = mid;
      r.report = std::move(sm);
    } else {
      lo = mid;
    }
  }
  r.bound = lo;  // certified side: violation K is impossible below lo
  r.lower_bracket = lo;
  r.upper_bracket = hi;
  return r;
}

SdpProblem assemble_variant(Quantifier v, const ProbTable& P, const HierarchyLevel& lvl) {
  if (v == Quantifier::ir) return assemble_ir_di_given_P(P, lvl);
  if (v == Quantifier::gmir) return assemble_gmir_di_given_P(P, lvl);
  const Scenario& sc = P.sc;
  Model m = build_model(sc, lvl);
  FixedAssignment fa = fixed_assignments(sc, m.index, P);
  const auto lambdas = alice_strategies(sc);
  const auto fpos = fixed_positions(m, fa);
  const int n_out = sc.outcomes[0];

  std::vector<UBlock> G;
  for (std::size_t l = 0; l < lambdas.size(); ++l)
    G.push_back(add_unknown_block(m, "G" + std::to_string(l)));
  LinExpr s;
  for (const auto& g : G) s.add(g.unit, 1.0);

  auto relax_fixed = [&](const std::vector<UBlock>& blocks, const LinExpr& total) {
    for (const auto& [i, j, val] : fpos) {
      LinExpr e;
      for (const auto& g : blocks) g.add_entry(e, i, j, 1.0);
      e.add_scaled(total, -val);
      m.add_equality_unique(std::move(e));
    }
  };

  switch (v) {
    case Quantifier::irj: {
      std::vector<UBlock> H;
      for (std::size_t l = 0; l < lambdas.size(); ++l)
        H.push_back(add_unknown_block(m, "H" + std::to_string(l)));
      LinExpr sh;
      for (const auto& h : H) sh.add(h.unit, 1.0);
      // chi[E_{a|x}] = sum_l delta (chi[G_l] - chi[H_l]), entrywise
      const int n = m.chi1.size();
      for (int x = 0; x < sc.settings[0]; ++x)
        for (int a = 0; a < n_out; ++a)
          for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
              LinExpr e;
              m.add_entry(e, m.chiE[x][a].entry(i, j), 1.0);
              for (std::size_t l = 0; l < lambdas.size(); ++l)
                if (lambdas[l][x] == a) {
                  G[l].add_entry(e, i, j, -1.0);
                  H[l].add_entry(e, i, j, 1.0);
                }
              m.add_equality_unique(std::move(e));
            }
      LinExpr tie = sh;
      tie.add_scaled(s, -1.0);
      tie.constant = 1.0;
      m.add_equality_unique(std::move(tie));
      relax_fixed(G, s);
      relax_fixed(H, sh);
      pin_fixed(m, fa);
      m.p.objective = sh;
      m.p.sense = Sense::minimize;
      m.p.origin = "irj-di-given-P";
      break;
    }
    case Quantifier::irp: {
      std::vector<std::vector<VarId>> q(sc.settings[0]);
      for (int x = 0; x < sc.settings[0]; ++x)
        for (int a = 0; a < n_out; ++a) {
          VarId qv = m.p.add_var("q:" + std::to_string(x) + "," + std::to_string(a));
          q[x].push_back(qv);
          m.p.inequalities.push_back(LinExpr::of(qv));
        }
      // fixed positions only: chi[E]^fixed = sum delta chi[G]^fixed - q chi[1]^fixed
      for (int x = 0; x < sc.settings[0]; ++x)
        for (int a = 0; a < n_out; ++a)
          for (const auto& [i, j, val] : fpos) {
            LinExpr e;
            m.add_entry(e, m.chiE[x][a].entry(i, j), 1.0);
            for (std::size_t l = 0; l < lambdas.size(); ++l)
              if (lambdas[l][x] == a) G[l].add_entry(e, i, j, -1.0);
            e.add(q[x][a], val);
            m.add_equality_unique(std::move(e));
          }
      for (int x = 0; x < sc.settings[0]; ++x) {
        LinExpr e;
        for (VarId qv : q[x]) e.add(qv, 1.0);
        e.add_scaled(s, -1.0);
        e.constant = 1.0;
        m.add_equality_unique(std::move(e));
      }
      relax_fixed(G, s);
      pin_fixed(m, fa);
      m.p.objective = s;
      m.p.objective.constant = -1.0;
      m.p.sense = Sense::minimize;
      m.p.origin = "irp-di-given-P";
      break;
    }
    case Quantifier::irr: {
      // fixed positions: chi[E]^fixed = sum delta chi[G]^fixed
      //                  - (1/|A|)(sum chi[G]_1 - 1) chi[1]^fixed
      for (int x = 0; x < sc.settings[0]; ++x)
        for (int a = 0; a < n_out; ++a)
          for (const auto& [i, j, val] : fpos) {
            LinExpr e;
            m.add_entry(e, m.chiE[x][a].entry(i, j), 1.0);
            for (std::size_t l = 0; l < lambdas.size(); ++l)
              if (lambdas[l][x] == a) G[l].add_entry(e, i, j, -1.0);
            e.add_scaled(s, val / n_out);
            e.constant -= val / n_out;
            m.add_equality_unique(std::move(e));
          }
      relax_fixed(G, s);
      pin_fixed(m, fa);
      m.p.objective = s;
      m.p.objective.constant = -1.0;
      m.p.sense = Sense::minimize;
      m.p.origin = "irr-di-given-P";
      break;
    }
    case Quantifier::iw: {
      // chi[E_{a|x}] >= sum_l delta chi[G_l]
      const int n = m.chi1.size();
      for (int x = 0; x < sc.settings[0]; ++x)
        for (int a = 0; a < n_out; ++a) {
          auto& b = m.p.add_block("dominated:" + std::to_string(x) + "," + std::to_string(a), n);
          for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
              LinExpr e;
              m.add_entry(e, m.chiE[x][a].entry(i, j), 1.0);
              for (std::size_t l = 0; l < lambdas.size(); ++l)
                if (lambdas[l][x] == a) G[l].add_entry(e, i, j, -1.0);
              e.normalize(1e-14);
              if (!e.terms.empty() || e.constant != 0.0) b.entries.emplace_back(i, j, std::move(e));
            }
        }
      relax_fixed(G, s);
      pin_fixed(m, fa);
      m.p.objective = LinExpr(1.0);
      m.p.objective.add_scaled(s, -1.0);
      m.p.sense = Sense::minimize;
      m.p.origin = "iw-di-given-P";
      break;
    }
    default:
      throw std::invalid_argument("assemble_variant: unknown variant id");
  }
  m.p.level = lvl.level;
  return std::move(m.p);
}

namespace {

// Triplewise machinery shared by the GMIR assemblies: per-pair parent blocks
// chi[G^{st}_l] with l ranging over the pair's outcome assignments, and
// chi[J^{st}_{a|x}] for the complementary setting x, tied by
// sum_a chi[J^{st}_{a|x}] = sum_l chi[G^{st}_l], plus the coverage
// inequalities sum_l delta_{a,l_x}(chi[G^{sx}]+chi[G^{tx}]) + chi[J^{st}]
// >= chi[E_{a|x}].
struct GmirParts {
  std::vector<std::pair<int, int>> pairs{{0, 1}, {0, 2}, {1, 2}};
  std::vector<std::vector<UBlock>> G;  // [pair][lambda]
  std::vector<std::vector<UBlock>> J;  // [pair][outcome of complementary x]
  std::vector<std::vector<std::vector<int>>> lam;
  std::vector<LinExpr> s;  // per-pair sums of chi[G]_1
};

GmirParts add_gmir_blocks(Model& m) {
  const Scenario& sc = m.sc;
  if (sc.settings[0] < 3)
    throw std::invalid_argument("gmir: fewer than 3 first-party settings");
  if (sc.settings[0] != 3)
    throw std::invalid_argument("gmir: only the triplewise case is built");
  GmirParts gp;
  gp.G.resize(3);
  gp.J.resize(3);
  gp.lam.resize(3);
  gp.s.resize(3);
  const int n = m.chi1.size();
  for (std::size_t k = 0; k < gp.pairs.size(); ++k) {
    auto [ps, pt] = gp.pairs[k];
    gp.lam[k] = deterministic_strategies({sc.outcomes[0], sc.outcomes[0]});
    const std::string pk = std::to_string(ps) + std::to_string(pt);
    for (std::size_t l = 0; l < gp.lam[k].size(); ++l) {
      gp.G[k].push_back(add_unknown_block(m, "G" + pk + "_" + std::to_string(l)));
      gp.s[k].add(gp.G[k].back().unit, 1.0);
    }
    for (int a = 0; a < sc.outcomes[0]; ++a)
      gp.J[k].push_back(add_unknown_block(m, "J" + pk + ":" + std::to_string(a)));
    // sum_a chi[J^{st}_{a|x}] = sum_l chi[G^{st}_l]
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        LinExpr e;
        for (const auto& jb : gp.J[k]) jb.add_entry(e, i, j, 1.0);
        for (const auto& gb : gp.G[k]) gb.add_entry(e, i, j, -1.0);
        m.add_equality_unique(std::move(e));
      }
  }
  auto pair_index = [&](int u, int v) -> std::size_t {
    const auto key = std::make_pair(std::min(u, v), std::max(u, v));
    for (std::size_t k = 0; k < gp.pairs.size(); ++k)
      if (gp.pairs[k] == key) return k;
    throw std::logic_error("pair lookup");
  };
  for (std::size_t k = 0; k < gp.pairs.size(); ++k) {
    auto [ps, pt] = gp.pairs[k];
    const int x = 3 - ps - pt;
    for (int a = 0; a < sc.outcomes[0]; ++a) {
      std::vector<const UBlock*> parts;
      for (int other : {ps, pt}) {
        const std::size_t ok = pair_index(other, x);
        const int xpos = gp.pairs[ok].first == x ? 0 : 1;
        for (std::size_t l = 0; l < gp.lam[ok].size(); ++l)
          if (gp.lam[ok][l][xpos] == a) parts.push_back(&gp.G[ok][l]);
      }
      parts.push_back(&gp.J[k][a]);
      add_cover_block(m, "cover:" + std::to_string(x) + "," + std::to_string(a), parts,
                      m.chiE[x][a]);
    }
  }
  return gp;
}

}  // namespace

SdpProblem assemble_gmir_di_given_P(const ProbTable& P, const HierarchyLevel& lvl) {
  Model m = build_model(P.sc, lvl);
  FixedAssignment fa = fixed_assignments(P.sc, m.index, P);
  GmirParts gp = add_gmir_blocks(m);
  const auto fpos = fixed_positions(m, fa);
  // per-pair relaxed normalization on the observed positions
  for (std::size_t k = 0; k < gp.pairs.size(); ++k)
    for (const auto& [i, j, val] : fpos) {
      LinExpr e;
      for (const auto& gb : gp.G[k]) gb.add_entry(e, i, j, 1.0);
      e.add_scaled(gp.s[k], -val);
      m.add_equality_unique(std::move(e));
    }
  pin_fixed(m, fa);
  for (const auto& sk : gp.s) m.p.objective.add_scaled(sk, 1.0);
  m.p.objective.constant = -1.0;
  m.p.sense = Sense::minimize;
  m.p.origin = "gmir-di-given-P";
  m.p.level = lvl.level;
  return std::move(m.p);
}

SdpProblem assemble_gmir_maxviolation(const BellFunctional& f, double ir0,
                                      const HierarchyLevel& lvl) {
  if (ir0 < 0) throw std::invalid_argument("ir0 must be >= 0");
  Model m = build_model(f.sc, lvl);
  GmirParts gp = add_gmir_blocks(m);
  // exact: sum over pairs and lambda of chi[G] = (ir0+1) chi[1]
  const int n = m.chi1.size();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      LinExpr e;
      for (const auto& pair_g : gp.G)
        for (const auto& gb : pair_g) gb.add_entry(e, i, j, 1.0);
      m.add_entry(e, m.chi1.entry(i, j), -(ir0 + 1.0));
      m.add_equality_unique(std::move(e));
    }
  LinExpr stot;
  for (const auto& sk : gp.s) stot.add_scaled(sk, 1.0);
  stot.constant = -(ir0 + 1.0);
  m.add_equality_unique(std::move(stot));

  m.p.objective = bell_expr(m, f);
  m.p.sense = Sense::maximize;
  m.p.origin = "gmir-maxviolation:" + f.name;
  m.p.level = lvl.level;
  return std::move(m.p);
}

SdpProblem assemble_gmir_given_violation(const BellFunctional& f, double K,
                                         const HierarchyLevel& lvl) {
  Model m = build_model(f.sc, lvl);
  GmirParts gp = add_gmir_blocks(m);
  LinExpr viol = bell_expr(m, f);
  viol.constant -= K;
  m.add_equality_unique(std::move(viol));
  // the unit moment stays normalized even without observed probabilities
  LinExpr unit = LinExpr::of(m.var(m.index.intern(Monomial::identity(2))));
  unit.constant = -1.0;
  m.add_equality_unique(std::move(unit));
  for (const auto& sk : gp.s) m.p.objective.add_scaled(sk, 1.0);
  m.p.objective.constant = -1.0;
  m.p.sense = Sense::minimize;
  m.p.origin = "gmir-given-violation:" + f.name;
  m.p.level = lvl.level;
  return std::move(m.p);
}

QuantifierResult gmi_threshold(const BellFunctional& f, const HierarchyLevel& lvl,
                               const SolverSettings& st) {
  QuantifierResult r;
  r.quantifier = "gmir";
  r.mode = "threshold";
  r.level = lvl.level;
  r.report = solve(assemble_gmir_maxviolation(f, 0.0, lvl), st);
  r.bound = r.report.objective - f.local_bound;
  return r;
}

std::vector<TradeoffPoint> tradeoff_curve(const BellFunctional& f,
                                          const std::vector<double>& ir_grid,
                                          const HierarchyLevel& lvl, bool gmi,
                                          const SolverSettings& st) {
  if (ir_grid.empty()) throw std::invalid_argument("tradeoff: empty grid");
  if (!std::is_sorted(ir_grid.begin(), ir_grid.end()))
    throw std::invalid_argument("tradeoff: grid must be sorted");
  std::vector<TradeoffPoint> out;
  for (double ir0 : ir_grid) {
    TradeoffPoint pt;
    pt.ir0 = ir0;
    try {
      Solution s = solve(gmi ? assemble_gmir_maxviolation(f, ir0, lvl)
                             : assemble_maxviolation_given_ir(f, ir0, lvl),
                         st);
      pt.violation = s.objective;
      pt.status = s.status;
    } catch (const std::exception&) {
      pt.status = SolveStatus::numerical_failure;
    }
    out.push_back(pt);
  }
  return out;
}

double npa_quantum_bound(const BellFunctional& f, const HierarchyLevel& lvl,
                         const SolverSettings& st) {
  const Scenario& sc = f.sc;
  if (sc.outcomes[0] != 2 || sc.outcomes[1] != 2)
    throw std::invalid_argument("npa_quantum_bound: dichotomic scenarios only");
  // one projector per setting; the complementary effects are affine in these
  std::vector<Symbol> gens;
  for (int p = 0; p < 2; ++p)
    for (int x = 0; x < sc.settings[p]; ++x) gens.push_back(Symbol::effect(p, x, 0));
  auto words = std::make_shared<const std::vector<Monomial>>(generate_word_list(sc, lvl, gens));
  MomentIndex index(sc);
  MomentTemplate chi1 = build_identity_template(sc, words, index);
  SdpProblem p;
  std::vector<VarId> mvar;
  auto var = [&](MomentId id) {
    while (static_cast<int>(mvar.size()) <= id)
      mvar.push_back(p.add_var("m:" + index.representative(mvar.size()).str()));
    return mvar[id];
  };
  const int n = chi1.size();
  auto& b1 = p.add_block("chi1", n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (auto id = chi1.entry(i, j)) b1.entries.emplace_back(i, j, LinExpr::of(var(*id)));
  LinExpr unit = LinExpr::of(var(index.intern(Monomial::identity(2))));
  unit.constant = -1.0;
  p.equalities.push_back(std::move(unit));

  // Collins-Gisin decomposition of the functional over outcome-0 moments
  std::vector<double> am(sc.settings[0], 0.0), bm(sc.settings[1], 0.0);
  std::vector<std::vector<double>> jm(sc.settings[0], std::vector<double>(sc.settings[1], 0.0));
  double cst = 0;
  for (int x = 0; x < sc.settings[0]; ++x) {
    am[x] += f.ma(0, x) - f.ma(1, x);
    cst += f.ma(1, x);
  }
  for (int y = 0; y < sc.settings[1]; ++y) {
    bm[y] += f.mb(0, y) - f.mb(1, y);
    cst += f.mb(1, y);
  }
  for (int x = 0; x < sc.settings[0]; ++x)
    for (int y = 0; y < sc.settings[1]; ++y) {
      const double c00 = f.jc(0, 0, x, y), c01 = f.jc(0, 1, x, y), c10 = f.jc(1, 0, x, y),
                   c11 = f.jc(1, 1, x, y);
      jm[x][y] = c00 - c01 - c10 + c11;
      am[x] += c01 - c11;
      bm[y] += c10 - c11;
      cst += c11;
    }
  LinExpr obj(cst);
  for (int x = 0; x < sc.settings[0]; ++x)
    if (am[x] != 0)
      obj.add(var(index.intern(Monomial::single(2, Symbol::effect(0, x, 0)))), am[x]);
  for (int y = 0; y < sc.settings[1]; ++y)
    if (bm[y] != 0)
      obj.add(var(index.intern(Monomial::single(2, Symbol::effect(1, y, 0)))), bm[y]);
  for (int x = 0; x < sc.settings[0]; ++x)
    for (int y = 0; y < sc.settings[1]; ++y)
      if (jm[x][y] != 0) {
        Monomial w = Monomial::identity(2);
        w.factors[0] = {Symbol::effect(0, x, 0)};
        w.factors[1] = {Symbol::effect(1, y, 0)};
        obj.add(var(index.intern(w)), jm[x][y]);
      }
  p.objective = std::move(obj);
  p.sense = Sense::maximize;
  p.origin = "npa:" + f.name;
  p.level = lvl.level;
  Solution s = solve(p, st);
  if (!s.certified(1e-6)) throw std::runtime_error("npa bound solve failed");
  return s.objective;
}

SdpProblem assemble_ir_di_given_P_bob_words(const ProbTable& P, const HierarchyLevel& lvl) {
  const Scenario& sc = P.sc;
  Model m = build_model(sc, lvl, /*bob_words_only=*/true);
  FixedAssignment fa = fixed_assignments(sc, m.index, P);
  const auto lambdas = alice_strategies(sc);
  std::vector<UBlock> G;
  for (std::size_t l = 0; l < lambdas.size(); ++l)
    G.push_back(add_unknown_block(m, "G" + std::to_string(l)));
  LinExpr s;
  for (const auto& g : G) s.add(g.unit, 1.0);
  for (int x = 0; x < sc.settings[0]; ++x)
    for (int a = 0; a < sc.outcomes[0]; ++a) {
      std::vector<const UBlock*> parts;
      for (std::size_t l = 0; l < lambdas.size(); ++l)
        if (lambdas[l][x] == a) parts.push_back(&G[l]);
      add_cover_block(m, "cover:" + std::to_string(x) + "," + std::to_string(a), parts,
                      m.chiE[x][a]);
    }
  for (const auto& [i, j, val] : fixed_positions(m, fa)) {
    LinExpr e;
    for (const auto& g : G) g.add_entry(e, i, j, 1.0);
    e.add_scaled(s, -val);
    m.add_equality_unique(std::move(e));
  }
  pin_fixed(m, fa);
  m.p.objective = s;
  m.p.objective.constant = -1.0;
  m.p.sense = Sense::minimize;
  m.p.origin = "ir-di-given-P-bob-words";
  m.p.level = lvl.level;
  return std::move(m.p);
}

}  // namespace mmb
