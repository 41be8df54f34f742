#include "mmb/oracle.hpp"

#include <cmath>

#include "mmb/solver.hpp"

namespace mmb {

std::vector<std::vector<int>> deterministic_strategies(const std::vector<int>& outcome_counts) {
  std::vector<std::vector<int>> out = {{}};
  for (int oc : outcome_counts) {
    std::vector<std::vector<int>> next;
    for (const auto& s : out)
      for (int a = 0; a < oc; ++a) {
        auto t = s;
        t.push_back(a);
        next.push_back(std::move(t));
      }
    out = std::move(next);
  }
  return out;
}

Quantifier quantifier_from_name(const std::string& name) {
  if (name == "ir") return Quantifier::ir;
  if (name == "irj") return Quantifier::irj;
  if (name == "irp") return Quantifier::irp;
  if (name == "irr") return Quantifier::irr;
  if (name == "iw") return Quantifier::iw;
  if (name == "gmir") return Quantifier::gmir;
  throw std::invalid_argument("unknown quantifier: " + name);
}

const char* to_string(Quantifier q) {
  switch (q) {
    case Quantifier::ir: return "ir";
    case Quantifier::irj: return "irj";
    case Quantifier::irp: return "irp";
    case Quantifier::irr: return "irr";
    case Quantifier::iw: return "iw";
    case Quantifier::gmir: return "gmir";
  }
  return "?";
}

HermVar HermVar::create(SdpProblem& p, int d, const std::string& prefix) {
  HermVar h;
  h.d = d;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      h.re.push_back(p.add_var(prefix + ".re" + std::to_string(i) + "_" + std::to_string(j)));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      h.im.push_back(p.add_var(prefix + ".im" + std::to_string(i) + "_" + std::to_string(j)));
  return h;
}

namespace {

inline int up_index(int i, int j, int d) {  // i <= j
  return i * d - i * (i + 1) / 2 + j;
}

inline int strict_index(int i, int j, int d) {  // i < j
  return i * (d - 1) - i * (i - 1) / 2 + (j - i - 1);
}

}  // namespace

LinExpr HermVar::trace() const {
  LinExpr e;
  for (int i = 0; i < d; ++i) e.add(re[up_index(i, i, d)], 1.0);
  return e;
}

LinExpr& BlockBuilder::at(int i, int j) {
  if (i > j) std::swap(i, j);
  return entries_[static_cast<std::size_t>(i) * n_ -
                  static_cast<std::size_t>(i) * (i + 1) / 2 + j];
}

void BlockBuilder::add(const HermVar& h, double coef) {
  const int d = h.d;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      const VarId v = h.re[up_index(i, j, d)];
      at(i, j).add(v, coef);
      at(i + d, j + d).add(v, coef);
    }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const VarId v = h.im[strict_index(i, j, d)];
      // [[A,-B],[B,A]] with B(i,j) = v = -B(j,i)
      at(j, i + d).add(v, coef);
      at(i, j + d).add(v, -coef);
    }
}

void BlockBuilder::add_const(const Eigen::MatrixXcd& C, double coef) {
  const int d = static_cast<int>(C.rows());
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      const double re = C(i, j).real();
      if (re != 0.0) {
        at(i, j).constant += coef * re;
        at(i + d, j + d).constant += coef * re;
      }
    }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double im = C(i, j).imag();
      if (im != 0.0) {
        at(j, i + d).constant += coef * im;
        at(i, j + d).constant -= coef * im;
      }
    }
}

void BlockBuilder::flush(SdpProblem& p, const std::string& name) {
  auto& b = p.add_block(name, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) {
      LinExpr& e = at(i, j);
      e.normalize();
      if (!e.terms.empty() || e.constant != 0.0) b.entries.emplace_back(i, j, std::move(e));
    }
}

namespace {

struct DeviceCommon {
  SdpProblem p;
  std::vector<HermVar> G;
  std::vector<std::vector<int>> lambdas;
  LinExpr total_trace;  // sum_l tr G_l
  int d = 0;
};

DeviceCommon device_scaffold(const Assemblage& a, int d, const std::string& tag) {
  DeviceCommon c;
  c.d = d;
  std::vector<int> ocounts;
  for (const auto& s : a) ocounts.push_back(static_cast<int>(s.size()));
  c.lambdas = deterministic_strategies(ocounts);
  for (std::size_t l = 0; l < c.lambdas.size(); ++l)
    c.G.push_back(HermVar::create(c.p, d, tag + std::to_string(l)));
  for (std::size_t l = 0; l < c.G.size(); ++l) {
    BlockBuilder bb(2 * d);
    bb.add(c.G[l], 1.0);
    bb.flush(c.p, "psd:" + tag + std::to_string(l));
  }
  for (const auto& g : c.G) c.total_trace.add_scaled(g.trace(), 1.0);
  return c;
}

// sum_l G_l == (1/d)(sum_l tr G_l) * I as scalar equalities.
void add_parent_normalization(SdpProblem& p, const std::vector<HermVar>& G, int d,
                              const LinExpr& total_trace) {
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      LinExpr e;
      for (const auto& g : G) e.add(g.re[up_index(i, j, d)], 1.0);
      if (i == j) e.add_scaled(total_trace, -1.0 / d);
      p.equalities.push_back(std::move(e));
    }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      LinExpr e;
      for (const auto& g : G) e.add(g.im[strict_index(i, j, d)], 1.0);
      p.equalities.push_back(std::move(e));
    }
}

}  // namespace

SdpProblem build_ir_device_problem(const Assemblage& a, int d) {
  validate_assemblage(a, d, false);
  DeviceCommon c = device_scaffold(a, d, "G");
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t o = 0; o < a[x].size(); ++o) {
      BlockBuilder bb(2 * d);
      for (std::size_t l = 0; l < c.lambdas.size(); ++l)
        if (c.lambdas[l][x] == static_cast<int>(o)) bb.add(c.G[l], 1.0);
      bb.add_const(a[x][o], -1.0);
      bb.flush(c.p, "cover:" + std::to_string(x) + "," + std::to_string(o));
    }
  add_parent_normalization(c.p, c.G, d, c.total_trace);
  c.p.objective.add_scaled(c.total_trace, 1.0 / d);
  c.p.objective.constant = -1.0;
  c.p.sense = Sense::minimize;
  c.p.origin = "device-ir";
  return c.p;
}

SdpProblem build_variant_device_problem(Quantifier v, const Assemblage& a, int d) {
  if (v == Quantifier::ir) return build_ir_device_problem(a, d);
  if (v == Quantifier::gmir) return build_gmir_device_problem(a, d);
  validate_assemblage(a, d, false);
  const int n_outcomes = static_cast<int>(a[0].size());
  DeviceCommon c = device_scaffold(a, d, "G");
  SdpProblem& p = c.p;

  // entrywise Hermitian equality helper: lhs(G parts) == rhs matrix
  auto herm_equalities = [&](std::size_t x, std::size_t o, auto&& re_extra) {
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        LinExpr e;
        for (std::size_t l = 0; l < c.lambdas.size(); ++l)
          if (c.lambdas[l][x] == static_cast<int>(o)) e.add(c.G[l].re[up_index(i, j, d)], 1.0);
        re_extra(e, i, j);
        e.constant -= a[x][o](i, j).real();
        p.equalities.push_back(std::move(e));
      }
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        LinExpr e;
        for (std::size_t l = 0; l < c.lambdas.size(); ++l)
          if (c.lambdas[l][x] == static_cast<int>(o)) e.add(c.G[l].im[strict_index(i, j, d)], 1.0);
        e.constant -= a[x][o](i, j).imag();
        p.equalities.push_back(std::move(e));
      }
  };

  switch (v) {
    case Quantifier::irj: {
      std::vector<HermVar> H;
      LinExpr htrace;
      for (std::size_t l = 0; l < c.lambdas.size(); ++l) {
        H.push_back(HermVar::create(p, d, "H" + std::to_string(l)));
        htrace.add_scaled(H.back().trace(), 1.0);
        BlockBuilder bb(2 * d);
        bb.add(H.back(), 1.0);
        bb.flush(p, "psd:H" + std::to_string(l));
      }
      for (std::size_t x = 0; x < a.size(); ++x)
        for (std::size_t o = 0; o < a[x].size(); ++o) {
          for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
              LinExpr e;
              for (std::size_t l = 0; l < c.lambdas.size(); ++l)
                if (c.lambdas[l][x] == static_cast<int>(o)) {
                  e.add(c.G[l].re[up_index(i, j, d)], 1.0);
                  e.add(H[l].re[up_index(i, j, d)], -1.0);
                }
              e.constant -= a[x][o](i, j).real();
              p.equalities.push_back(std::move(e));
            }
          for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
              LinExpr e;
              for (std::size_t l = 0; l < c.lambdas.size(); ++l)
                if (c.lambdas[l][x] == static_cast<int>(o)) {
                  e.add(c.G[l].im[strict_index(i, j, d)], 1.0);
                  e.add(H[l].im[strict_index(i, j, d)], -1.0);
                }
              e.constant -= a[x][o](i, j).imag();
              p.equalities.push_back(std::move(e));
            }
        }
      LinExpr tie;
      tie.add_scaled(htrace, 1.0 / d);
      tie.add_scaled(c.total_trace, -1.0 / d);
      tie.constant = 1.0;
      p.equalities.push_back(std::move(tie));
      add_parent_normalization(p, c.G, d, c.total_trace);
      add_parent_normalization(p, H, d, htrace);
      p.objective.add_scaled(htrace, 1.0 / d);
      p.sense = Sense::minimize;
      p.origin = "device-irj";
      return p;
    }
    case Quantifier::irp: {
      std::vector<std::vector<VarId>> q(a.size());
      for (std::size_t x = 0; x < a.size(); ++x)
        for (int o = 0; o < static_cast<int>(a[x].size()); ++o) {
          VarId qv = p.add_var("q" + std::to_string(x) + "," + std::to_string(o));
          q[x].push_back(qv);
          p.inequalities.push_back(LinExpr::of(qv));
        }
      for (std::size_t x = 0; x < a.size(); ++x)
        for (std::size_t o = 0; o < a[x].size(); ++o)
          herm_equalities(x, o, [&](LinExpr& e, int i, int j) {
            if (i == j) e.add(q[x][o], -1.0);
          });
      for (std::size_t x = 0; x < a.size(); ++x) {
        LinExpr e;
        for (VarId qv : q[x]) e.add(qv, 1.0);
        e.add_scaled(c.total_trace, -1.0 / d);
        e.constant = 1.0;
        p.equalities.push_back(std::move(e));
      }
      add_parent_normalization(p, c.G, d, c.total_trace);
      p.objective.add_scaled(c.total_trace, 1.0 / d);
      p.objective.constant = -1.0;
      p.sense = Sense::minimize;
      p.origin = "device-irp";
      return p;
    }
    case Quantifier::irr: {
      for (std::size_t x = 0; x < a.size(); ++x)
        for (std::size_t o = 0; o < a[x].size(); ++o)
          herm_equalities(x, o, [&](LinExpr& e, int i, int j) {
            if (i == j) {
              e.add_scaled(c.total_trace, -1.0 / (n_outcomes * d));
              e.constant += 1.0 / n_outcomes;
            }
          });
      add_parent_normalization(p, c.G, d, c.total_trace);
      p.objective.add_scaled(c.total_trace, 1.0 / d);
      p.objective.constant = -1.0;
      p.sense = Sense::minimize;
      p.origin = "device-irr";
      return p;
    }
    case Quantifier::iw: {
      for (std::size_t x = 0; x < a.size(); ++x)
        for (std::size_t o = 0; o < a[x].size(); ++o) {
          BlockBuilder bb(2 * d);
          bb.add_const(a[x][o], 1.0);
          for (std::size_t l = 0; l < c.lambdas.size(); ++l)
            if (c.lambdas[l][x] == static_cast<int>(o)) bb.add(c.G[l], -1.0);
          bb.flush(p, "dominated:" + std::to_string(x) + "," + std::to_string(o));
        }
      add_parent_normalization(p, c.G, d, c.total_trace);
      p.objective.constant = 1.0;
      p.objective.add_scaled(c.total_trace, -1.0 / d);
      p.sense = Sense::minimize;
      p.origin = "device-iw";
      return p;
    }
    default:
      throw std::invalid_argument("unsupported variant");
  }
}

SdpProblem build_gmir_device_problem(const Assemblage& a, int d) {
  validate_assemblage(a, d, false);
  if (a.size() != 3) throw std::invalid_argument("gmir: exactly 3 settings required");
  SdpProblem p;
  const std::vector<std::pair<int, int>> pairs = {{0, 1}, {0, 2}, {1, 2}};

  std::vector<std::vector<HermVar>> G(pairs.size());
  std::vector<std::vector<std::vector<int>>> lam(pairs.size());
  std::vector<LinExpr> pair_trace(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto [s, t] = pairs[k];
    lam[k] = deterministic_strategies(
        {static_cast<int>(a[s].size()), static_cast<int>(a[t].size())});
    for (std::size_t l = 0; l < lam[k].size(); ++l) {
      G[k].push_back(HermVar::create(
          p, d, "G" + std::to_string(s) + std::to_string(t) + "_" + std::to_string(l)));
      pair_trace[k].add_scaled(G[k].back().trace(), 1.0);
      BlockBuilder bb(2 * d);
      bb.add(G[k].back(), 1.0);
      bb.flush(p, "psd:G" + std::to_string(s) + std::to_string(t) + "_" + std::to_string(l));
    }
    add_parent_normalization(p, G[k], d, pair_trace[k]);
  }

  std::vector<std::vector<HermVar>> J(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto [s, t] = pairs[k];
    const int x = 3 - s - t;
    for (std::size_t o = 0; o < a[x].size(); ++o) {
      J[k].push_back(HermVar::create(
          p, d, "J" + std::to_string(s) + std::to_string(t) + "_" + std::to_string(o)));
      BlockBuilder bb(2 * d);
      bb.add(J[k].back(), 1.0);
      bb.flush(p, "psd:J" + std::to_string(s) + std::to_string(t) + "_" + std::to_string(o));
    }
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        LinExpr e;
        for (const auto& jv : J[k]) e.add(jv.re[up_index(i, j, d)], 1.0);
        for (const auto& gv : G[k]) e.add(gv.re[up_index(i, j, d)], -1.0);
        p.equalities.push_back(std::move(e));
      }
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        LinExpr e;
        for (const auto& jv : J[k]) e.add(jv.im[strict_index(i, j, d)], 1.0);
        for (const auto& gv : G[k]) e.add(gv.im[strict_index(i, j, d)], -1.0);
        p.equalities.push_back(std::move(e));
      }
  }

  auto pair_index = [&](int u, int v) {
    const auto key = std::make_pair(std::min(u, v), std::max(u, v));
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (pairs[k] == key) return k;
    throw std::logic_error("pair lookup");
  };
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto [s, t] = pairs[k];
    const int x = 3 - s - t;
    for (std::size_t o = 0; o < a[x].size(); ++o) {
      BlockBuilder bb(2 * d);
      for (int other : {s, t}) {
        const std::size_t pk = pair_index(other, x);
        const int xpos = pairs[pk].first == x ? 0 : 1;
        for (std::size_t l = 0; l < lam[pk].size(); ++l)
          if (lam[pk][l][xpos] == static_cast<int>(o)) bb.add(G[pk][l], 1.0);
      }
      bb.add(J[k][o], 1.0);
      bb.add_const(a[x][o], -1.0);
      bb.flush(p, "cover:" + std::to_string(x) + "," + std::to_string(o));
    }
  }

  for (std::size_t k = 0; k < pairs.size(); ++k) p.objective.add_scaled(pair_trace[k], 1.0 / d);
  p.objective.constant = -1.0;
  p.sense = Sense::minimize;
  p.origin = "device-gmir";
  return p;
}

namespace {

OracleResult run(SdpProblem p, const SolverSettings& st) {
  OracleResult r;
  r.solution = solve(p, st);
  r.value = r.solution.objective;
  return r;
}

}  // namespace

OracleResult ir_device(const Assemblage& a, int d, const SolverSettings& st) {
  return run(build_ir_device_problem(a, d), st);
}

OracleResult variant_device(Quantifier v, const Assemblage& a, int d, const SolverSettings& st) {
  if (v == Quantifier::gmir) return gmir_device(a, d, st);
  return run(build_variant_device_problem(v, a, d), st);
}

OracleResult gmir_device(const Assemblage& a, int d, const SolverSettings& st) {
  return run(build_gmir_device_problem(a, d), st);
}

}  // namespace mmb
