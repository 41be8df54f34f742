#include "mmb/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace mmb {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct VarPattern {
  int var;
  std::vector<int> rows, cols;  // i <= j
  std::vector<double> vals;
  std::vector<int> support;  // distinct indices touched, sorted
};

struct BlockData {
  int size = 0;
  MatrixXd F0;
  std::vector<VarPattern> vars;
  bool constant() const { return vars.empty(); }
};

// Per-block iterate and per-iteration scaling state.
struct BlockState {
  MatrixXd X, Y, Rp;
  MatrixXd Ri;  // R^{-1}; the NT scaling is W = R R^T, W^{-1} = Ri^T Ri
  MatrixXd Wi;
  VectorXd d;  // scaled spectrum: X and Y both scale to diag(d)
  MatrixXd sdX, sdY;  // scaled directions of the latest computed step
  MatrixXd dX, dY;    // unscaled directions
  MatrixXd work;
};

double sym_dot(const VarPattern& p, const MatrixXd& M) {
  double s = 0;
  for (std::size_t k = 0; k < p.vals.size(); ++k) {
    const double w = p.rows[k] == p.cols[k] ? 1.0 : 2.0;
    s += w * p.vals[k] * M(p.rows[k], p.cols[k]);
  }
  return s;
}

void scatter_add(MatrixXd& M, const VarPattern& p, double coef) {
  for (std::size_t k = 0; k < p.vals.size(); ++k) {
    M(p.rows[k], p.cols[k]) += coef * p.vals[k];
    if (p.rows[k] != p.cols[k]) M(p.cols[k], p.rows[k]) += coef * p.vals[k];
  }
}

// out = Wi * F_p * Wi, using only the columns of Wi in F_p's support.
void scaled_matrix(const VarPattern& p, const MatrixXd& Wi, MatrixXd& out, MatrixXd& U,
                   MatrixXd& S) {
  const int n = static_cast<int>(Wi.rows());
  const int u = static_cast<int>(p.support.size());
  U.resize(n, u);
  for (int k = 0; k < u; ++k) U.col(k) = Wi.col(p.support[k]);
  S.setZero(u, u);
  auto pos = [&](int idx) {
    return static_cast<int>(std::lower_bound(p.support.begin(), p.support.end(), idx) -
                            p.support.begin());
  };
  for (std::size_t k = 0; k < p.vals.size(); ++k) {
    const int a = pos(p.rows[k]), b = pos(p.cols[k]);
    S(a, b) += p.vals[k];
    if (a != b) S(b, a) += p.vals[k];
  }
  out.noalias() = U * (S * U.transpose());
}

// Largest alpha with diag(d) + alpha * dM >= 0.
double max_step(const VectorXd& d, const MatrixXd& dM) {
  const int n = static_cast<int>(d.size());
  MatrixXd T(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) T(i, j) = dM(i, j) / std::sqrt(d(i) * d(j));
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(T, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin >= -1e-14) return 1e30;
  return -1.0 / lmin;
}

struct Metrics {
  double pobj, dobj, gap, relgap, pinf, dinf, mu;
};

}  // namespace

Solution solve_compiled(const CompiledSdp& cp, const SolverSettings& settings) {
  Solution sol;
  const double osign = cp.maximize ? -1.0 : 1.0;
  auto finish_objective = [&](double pobj_min, double dobj_min) {
    sol.objective = osign * (pobj_min + cp.obj_const);
    sol.dual_objective = osign * (dobj_min + cp.obj_const);
    sol.duality_gap = std::abs(sol.objective - sol.dual_objective);
  };

  if (cp.proven_infeasible) {
    sol.status = SolveStatus::infeasible;
    sol.message = "inconsistent linear equalities";
    return sol;
  }

  const int m = cp.m;
  std::vector<BlockData> blocks;
  double f0max = 0, fmax = 0, cmax = 0;
  for (const auto& cb : cp.blocks) {
    BlockData bd;
    bd.size = cb.size;
    bd.F0 = MatrixXd::Zero(cb.size, cb.size);
    std::size_t k = 0;
    const auto& es = cb.entries;
    while (k < es.size() && es[k].var == -1) {
      bd.F0(es[k].i, es[k].j) = es[k].coef;
      bd.F0(es[k].j, es[k].i) = es[k].coef;
      f0max = std::max(f0max, std::abs(es[k].coef));
      ++k;
    }
    while (k < es.size()) {
      VarPattern vp;
      vp.var = es[k].var;
      while (k < es.size() && es[k].var == vp.var) {
        vp.rows.push_back(es[k].i);
        vp.cols.push_back(es[k].j);
        vp.vals.push_back(es[k].coef);
        vp.support.push_back(es[k].i);
        vp.support.push_back(es[k].j);
        fmax = std::max(fmax, std::abs(es[k].coef));
        ++k;
      }
      std::sort(vp.support.begin(), vp.support.end());
      vp.support.erase(std::unique(vp.support.begin(), vp.support.end()), vp.support.end());
      bd.vars.push_back(std::move(vp));
    }
    blocks.push_back(std::move(bd));
  }
  for (double ci : cp.c) cmax = std::max(cmax, std::abs(ci));

  std::vector<int> active;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].constant()) {
      if (blocks[b].size > 0) {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(blocks[b].F0, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-9) {
          sol.status = SolveStatus::infeasible;
          sol.message = "constant block not positive semidefinite";
          return sol;
        }
      }
    } else {
      active.push_back(static_cast<int>(b));
    }
  }
  if (m == 0 || active.empty()) {
    sol.status = SolveStatus::optimal;
    sol.values.assign(m, 0.0);
    finish_objective(0, 0);
    for (const auto& bd : blocks) {
      sol.block_matrices.push_back(bd.F0);
      sol.dual_matrices.push_back(MatrixXd::Zero(bd.size, bd.size));
    }
    return sol;
  }

  int ntot = 0;
  for (int b : active) ntot += blocks[b].size;

  std::vector<BlockState> st(blocks.size());
  const double xi = settings.init_scale > 0
                        ? settings.init_scale
                        : 10.0 * std::max({1.0, f0max, std::sqrt(static_cast<double>(ntot))});
  const double eta =
      settings.init_scale > 0 ? settings.init_scale : 10.0 * std::max(1.0, cmax / (1.0 + fmax));
  VectorXd x = VectorXd::Zero(m);
  for (int b : active) {
    st[b].X = xi * MatrixXd::Identity(blocks[b].size, blocks[b].size);
    st[b].Y = eta * MatrixXd::Identity(blocks[b].size, blocks[b].size);
  }

  MatrixXd B(m, m);
  VectorXd rhs(m), dx(m);
  MatrixXd U, S, Mj;

  const VectorXd cvec = VectorXd::Map(cp.c.data(), m);

  auto assemble_M = [&](int b, MatrixXd& out) {
    const auto& bd = blocks[b];
    out = bd.F0;
    for (const auto& vp : bd.vars) scatter_add(out, vp, x(vp.var));
  };

  auto compute_metrics = [&]() {
    Metrics r{};
    r.pobj = cvec.dot(x);
    VectorXd dres = cvec;
    double pinf = 0, xmax = 0, ymax = 0;
    for (int b : active) {
      auto& s = st[b];
      assemble_M(b, s.work);
      s.Rp = s.work - s.X;
      pinf = std::max(pinf, s.Rp.cwiseAbs().maxCoeff());
      xmax = std::max(xmax, s.X.cwiseAbs().maxCoeff());
      ymax = std::max(ymax, s.Y.cwiseAbs().maxCoeff());
      r.dobj -= (blocks[b].F0.array() * s.Y.array()).sum();
      r.gap += (s.X.array() * s.Y.array()).sum();
      for (const auto& vp : blocks[b].vars) dres(vp.var) -= sym_dot(vp, s.Y);
    }
    r.relgap = r.gap / (1.0 + std::abs(r.pobj) + std::abs(r.dobj));
    r.pinf = pinf / (1.0 + f0max + xmax);
    r.dinf = dres.cwiseAbs().maxCoeff() / (1.0 + cmax + ymax);
    r.mu = r.gap / ntot;
    return r;
  };

  // Builds the Schur matrix into B (lower triangle).
  auto form_schur = [&](double jitter) {
    B.setZero();
    for (int b : active) {
      const auto& bd = blocks[b];
      auto& s = st[b];
      for (std::size_t jj = 0; jj < bd.vars.size(); ++jj) {
        const auto& pj = bd.vars[jj];
        scaled_matrix(pj, s.Wi, Mj, U, S);
        for (std::size_t ii = 0; ii <= jj; ++ii) {
          const auto& pi = bd.vars[ii];
          const double v = sym_dot(pi, Mj);
          if (pj.var >= pi.var)
            B(pj.var, pi.var) += v;
          else
            B(pi.var, pj.var) += v;
        }
      }
    }
    if (jitter > 0) B.diagonal().array() += jitter;
  };

  // dX = sum_i dxv_i F_i + Rp per block; then scaled quantities and dY from
  // the scaled target Rc (scaled space), storing everything in the state.
  auto build_directions = [&](const VectorXd& dxv) {
    for (int b : active) {
      auto& s = st[b];
      s.dX = s.Rp;
      for (const auto& vp : blocks[b].vars) scatter_add(s.dX, vp, dxv(vp.var));
      s.sdX.noalias() = s.Ri * s.dX * s.Ri.transpose();
      // s.work must hold the scaled Rc of the step being built
      s.sdY = s.work - s.sdX;
      s.dY.noalias() = s.Ri.transpose() * s.sdY * s.Ri;
    }
  };

  Metrics mt{};
  double best_relgap = std::numeric_limits<double>::infinity();
  double best_score = std::numeric_limits<double>::infinity();
  double best_dinf = std::numeric_limits<double>::infinity();
  VectorXd best_x = x;
  std::vector<MatrixXd> best_X, best_Y;
  for (int b : active) {
    best_X.push_back(st[b].X);
    best_Y.push_back(st[b].Y);
  }
  auto save_best = [&]() {
    best_x = x;
    std::size_t k = 0;
    for (int b : active) {
      best_X[k] = st[b].X;
      best_Y[k] = st[b].Y;
      ++k;
    }
  };
  int stall = 0;
  int iter = 0;
  std::string exit_msg;

  for (; iter < settings.max_iters; ++iter) {
    mt = compute_metrics();
    if (settings.verbosity > 0)
      std::printf("it %3d  pobj % .9e  dobj % .9e  rgap %.2e  pinf %.2e  dinf %.2e\n", iter,
                  osign * (mt.pobj + cp.obj_const), osign * (mt.dobj + cp.obj_const), mt.relgap,
                  mt.pinf, mt.dinf);
    const double score = std::max({mt.relgap, mt.pinf, mt.dinf});
    if (score < best_score) {
      best_score = score;
      best_dinf = std::min(best_dinf, mt.dinf);
      save_best();
    }
    if (mt.relgap <= settings.tol_gap && mt.pinf <= settings.tol_feas &&
        mt.dinf <= settings.tol_feas)
      break;
    // post-convergence dual divergence: keep the best iterate and stop
    if (mt.relgap <= 10 * settings.tol_gap && mt.dinf > 100 * std::max(best_dinf, 1e-12) &&
        mt.dinf > 1e-7) {
      exit_msg = "dual residual diverging after primal convergence";
      break;
    }
    if (mt.pobj < -1e12) {
      finish_objective(mt.pobj, mt.dobj);
      sol.status = SolveStatus::unbounded;
      sol.message = "objective diverging below";
      return sol;
    }
    if (mt.dobj > 1e11 * std::max(1.0, f0max) && mt.dinf < 1e-6) {
      finish_objective(mt.pobj, mt.dobj);
      sol.status = SolveStatus::infeasible;
      sol.message = "dual objective diverging: primal infeasible";
      return sol;
    }
    const double progress = mt.relgap + mt.pinf + mt.dinf;
    if (progress < best_relgap * 0.95) {
      best_relgap = progress;
      stall = 0;
    } else if (++stall > 25) {
      exit_msg = "stalled";
      break;
    }

    // NT scaling.
    bool scale_ok = true;
    for (int b : active) {
      auto& s = st[b];
      const int n = blocks[b].size;
      Eigen::LLT<MatrixXd> lltX(s.X);
      if (lltX.info() != Eigen::Success) {
        scale_ok = false;
        break;
      }
      MatrixXd L = lltX.matrixL();
      MatrixXd C = L.transpose() * s.Y * L;
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(C);
      if (es.info() != Eigen::Success) {
        scale_ok = false;
        break;
      }
      VectorXd lam = es.eigenvalues().cwiseMax(1e-250);
      MatrixXd QtLi = es.eigenvectors().transpose() *
                      L.triangularView<Eigen::Lower>().solve(MatrixXd::Identity(n, n));
      s.Ri = lam.array().pow(0.25).matrix().asDiagonal() * QtLi;
      s.Wi.noalias() = s.Ri.transpose() * s.Ri;
      s.d = lam.array().sqrt().matrix();
    }
    if (!scale_ok) {
      exit_msg = "scaling factorization failed";
      break;
    }

    bool factored = false;
    double jitter = 0;
    for (int attempt = 0; attempt < 3 && !factored; ++attempt) {
      form_schur(jitter);
      Eigen::LLT<Eigen::Ref<MatrixXd>> lltB(B);
      if (lltB.info() == Eigen::Success) {
        factored = true;

        // Predictor: scaled target Rc~ = -D.
        rhs = -cvec;
        for (int b : active) {
          auto& s = st[b];
          s.work.noalias() = s.Wi * s.Rp * s.Wi;
          for (const auto& vp : blocks[b].vars) rhs(vp.var) -= sym_dot(vp, s.work);
        }
        dx = lltB.solve(rhs);
        for (int b : active) st[b].work = (-st[b].d).asDiagonal();
        build_directions(dx);

        double apmax = 1e30, admax = 1e30;
        for (int b : active) {
          apmax = std::min(apmax, max_step(st[b].d, st[b].sdX));
          admax = std::min(admax, max_step(st[b].d, st[b].sdY));
        }
        const double ap_aff = std::min(1.0, 0.99 * apmax);
        const double ad_aff = std::min(1.0, 0.99 * admax);
        double mu_aff = 0;
        for (int b : active) {
          auto& s = st[b];
          MatrixXd XA = MatrixXd(s.d.asDiagonal()) + ap_aff * s.sdX;
          MatrixXd YA = MatrixXd(s.d.asDiagonal()) + ad_aff * s.sdY;
          mu_aff += (XA.array() * YA.array()).sum();
        }
        mu_aff /= ntot;
        const double sigma = std::clamp(std::pow(mu_aff / mt.mu, 3.0), 1e-10, 1.0);

        // Corrector: Rc~ = T(sigma*mu*I - D^2 - (sdX sdY + sdY sdX)/2).
        rhs = -cvec;
        for (int b : active) {
          auto& s = st[b];
          const int n = blocks[b].size;
          MatrixXd Mc = -0.5 * (s.sdX * s.sdY + s.sdY * s.sdX);
          Mc.diagonal().array() += sigma * mt.mu - s.d.array().square();
          for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) Mc(i, j) = 2.0 * Mc(i, j) / (s.d(i) + s.d(j));
          s.work = std::move(Mc);  // scaled Rc for build_directions
          // rhs_i += <F_i, Y + Ri^T Rc~ Ri - Wi Rp Wi>
          MatrixXd G = s.Y;
          G.noalias() += s.Ri.transpose() * s.work * s.Ri;
          G.noalias() -= s.Wi * s.Rp * s.Wi;
          for (const auto& vp : blocks[b].vars) rhs(vp.var) += sym_dot(vp, G);
        }
        dx = lltB.solve(rhs);
        build_directions(dx);

        apmax = admax = 1e30;
        for (int b : active) {
          apmax = std::min(apmax, max_step(st[b].d, st[b].sdX));
          admax = std::min(admax, max_step(st[b].d, st[b].sdY));
        }
        const double gam = 0.9 + 0.09 * std::min(1.0, std::min(ap_aff, ad_aff));
        const double ap = std::min(1.0, gam * apmax);
        const double ad = std::min(1.0, gam * admax);
        if (ap < 1e-10 && ad < 1e-10) {
          exit_msg = "step length collapsed";
          iter = settings.max_iters;  // force exit
          break;
        }

        x += ap * dx;
        for (int b : active) {
          auto& s = st[b];
          s.X += ap * s.dX;
          s.Y += ad * s.dY;
          s.X = 0.5 * (s.X + s.X.transpose()).eval();
          s.Y = 0.5 * (s.Y + s.Y.transpose()).eval();
        }
      } else {
        jitter = jitter == 0 ? 1e-12 * std::max(1.0, B.diagonal().maxCoeff()) : jitter * 1e3;
      }
    }
    if (!factored) {
      exit_msg = "Schur factorization failed";
      break;
    }
    if (!exit_msg.empty()) break;
  }

  {
    // fall back to the best iterate seen (late iterations can diverge on
    // problems with degenerate duals)
    Metrics cur = compute_metrics();
    if (std::max({cur.relgap, cur.pinf, cur.dinf}) > best_score) {
      x = best_x;
      std::size_t k = 0;
      for (int b : active) {
        st[b].X = best_X[k];
        st[b].Y = best_Y[k];
        ++k;
      }
    }
  }
  mt = compute_metrics();
  finish_objective(mt.pobj, mt.dobj);
  sol.duality_gap = mt.gap;
  sol.iterations = std::min(iter, settings.max_iters);
  sol.max_linear_residual = mt.pinf;
  sol.max_psd_violation = 0.0;
  sol.values.assign(m, 0.0);
  VectorXd::Map(sol.values.data(), m) = x;

  const bool tight = mt.relgap <= settings.tol_gap && mt.pinf <= settings.tol_feas &&
                     mt.dinf <= settings.tol_feas;
  const bool close = mt.relgap <= 1e3 * settings.tol_gap && mt.pinf <= 1e3 * settings.tol_feas &&
                     mt.dinf <= 1e3 * settings.tol_feas;
  sol.status = tight ? SolveStatus::optimal
                     : (close ? SolveStatus::near_optimal : SolveStatus::numerical_failure);
  sol.message = exit_msg.empty() && !tight ? "iteration limit" : exit_msg;

  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].constant()) {
      sol.block_matrices.push_back(blocks[b].F0);
      sol.dual_matrices.push_back(MatrixXd::Zero(blocks[b].size, blocks[b].size));
    } else {
      sol.block_matrices.push_back(st[b].X);
      sol.dual_matrices.push_back(st[b].Y);
    }
  }
  return sol;
}

Solution solve(const SdpProblem& p, const SolverSettings& settings) {
  CompiledSdp cp = compile(p);
  Solution s = solve_compiled(cp, settings);
  if (s.values.size() == static_cast<std::size_t>(cp.m))
    s.values = cp.expand_values(s.values);
  else
    s.values.assign(p.num_vars, 0.0);
  std::vector<Eigen::MatrixXd> bm(p.blocks.size()), dm(p.blocks.size());
  for (std::size_t cb = 0; cb < cp.blocks.size() && cb < s.block_matrices.size(); ++cb) {
    const int pb = cp.blocks[cb].problem_block;
    if (pb < 0) continue;
    bm[pb] = s.block_matrices[cb];
    dm[pb] = s.dual_matrices[cb];
  }
  s.block_matrices = std::move(bm);
  s.dual_matrices = std::move(dm);
  return s;
}

}  // namespace mmb
