#include "drosvi/solver.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace drosvi {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kDecrementTol = 1e-10;   // centering accuracy (squared decrement)


// Strict feasibility check plus barrier value and cached factorizations.
struct BarrierState {
  bool feasible = false;
  double value = 0.0;
  Eigen::MatrixXd D, Y;
  Eigen::LLT<Eigen::MatrixXd> d_llt, y_llt;
  double soc_t = 0.0, soc_s = 0.0;  // s = t^2 - ||u||^2
  Eigen::VectorXd soc_u;
  Eigen::VectorXd slack;            // h - G v
};

double logdet(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

BarrierState eval_barrier(const ConicProgram& prog, const Eigen::VectorXd& v) {
  BarrierState st;
  st.D = prog.d_block(v);
  st.d_llt.compute(st.D);
  if (st.d_llt.info() != Eigen::Success) return st;
  st.Y = prog.y_block(v);
  st.y_llt.compute(st.Y);
  if (st.y_llt.info() != Eigen::Success) return st;
  double phi = -logdet(st.d_llt) - logdet(st.y_llt);

  if (prog.has_soc()) {
    st.soc_t = prog.soc_t(v);
    st.soc_u = prog.soc_u(v);
    st.soc_s = st.soc_t * st.soc_t - st.soc_u.squaredNorm();
    if (st.soc_t <= 0.0 || st.soc_s <= 0.0) return st;
    phi -= std::log(st.soc_s);
  }
  if (prog.lin_ineq_G().rows() > 0) {
    st.slack = prog.lin_ineq_h() - prog.lin_ineq_G() * v;
    if (st.slack.minCoeff() <= 0.0) return st;
    phi -= st.slack.array().log().sum();
  }
  for (int i : prog.nonneg()) {
    if (v[i] <= 0.0) return st;
    phi -= std::log(v[i]);
  }
  st.feasible = true;
  st.value = phi;
  return st;
}

using VectorXld = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// Gradient and Hessian of the barrier at a strictly feasible point. Assembled
// in long double: near the end of the central path the Hessian's condition
// number approaches 1/eps of double, and the Newton step keeps its accuracy
// only if both assembly and factorization carry the extra digits.
void barrier_derivatives(const ConicProgram& prog, const Eigen::VectorXd& v,
                         const BarrierState& st, VectorXld& grad, MatrixXld& hess) {
  const VariableLayout& lay = prog.layout();
  const int d = lay.total;
  grad.setZero(d);
  hess.setZero(d, d);

  // -log det D: grad_k = -tr(Dinv dD_k),
  // hess_kl = tr(Dinv dD_k Dinv dD_l) - tr(Dinv d2D_kl).
  const int r = lay.m + 1;
  const MatrixXld Dld = st.D.cast<long double>();
  const MatrixXld Dinv =
      Eigen::LLT<MatrixXld>(Dld).solve(MatrixXld::Identity(r, r));
  std::vector<MatrixXld> W(d);
  std::vector<MatrixXld> dD(d);
  for (int k = 0; k < d; ++k) {
    dD[k] = prog.d_block_derivative(k, v).cast<long double>();
    W[k] = Dinv * dD[k];
    grad[k] -= W[k].trace();
  }
  for (int k = 0; k < d; ++k)
    for (int l = 0; l <= k; ++l) {
      long double h = W[k].cwiseProduct(W[l].transpose()).sum();
      const Eigen::MatrixXd S2 = prog.d_block_second(k, l);
      h -= Dinv.cwiseProduct(S2.cast<long double>()).sum();  // both symmetric
      hess(k, l) += h;
      if (l < k) hess(l, k) += h;
    }

  // -log det Y over the vech block.
  const int m = lay.m;
  const MatrixXld Yinv = Eigen::LLT<MatrixXld>(st.Y.cast<long double>())
                             .solve(MatrixXld::Identity(m, m));
  std::vector<MatrixXld> WY(lay.vech_size());
  for (int j = 0; j < m; ++j)
    for (int i = j; i < m; ++i) {
      const int k = lay.vech_index(i, j);
      MatrixXld S = MatrixXld::Zero(m, m);
      S(i, j) = S(j, i) = 1.0;  // (i == j) sets it once
      WY[k] = Yinv * S;
      grad[lay.off_Y + k] -= WY[k].trace();
    }
  for (int k = 0; k < lay.vech_size(); ++k)
    for (int l = 0; l <= k; ++l) {
      const long double h = WY[k].cwiseProduct(WY[l].transpose()).sum();
      hess(lay.off_Y + k, lay.off_Y + l) += h;
      if (l < k) hess(lay.off_Y + l, lay.off_Y + k) += h;
    }

  // -log(t^2 - ||u||^2).
  if (prog.has_soc()) {
    const int it = prog.soc_t_index();
    const MatrixXld A = prog.soc_u_jacobian().cast<long double>();
    const long double s = st.soc_s;
    VectorXld gs = -2.0L * (A.transpose() * st.soc_u.cast<long double>());
    gs[it] += 2.0L * static_cast<long double>(st.soc_t);
    grad -= gs / s;
    hess += gs * gs.transpose() / (s * s);
    hess += (2.0L / s) * (A.transpose() * A);
    hess(it, it) -= 2.0L / s;
  }

  // Linear inequalities and sign constraints.
  const Eigen::MatrixXd& G = prog.lin_ineq_G();
  if (G.rows() > 0) {
    const MatrixXld Gld = G.cast<long double>();
    const Eigen::Array<long double, Eigen::Dynamic, 1> inv =
        st.slack.cast<long double>().array().inverse();
    grad += Gld.transpose() * inv.matrix();
    hess += Gld.transpose() * inv.square().matrix().asDiagonal() * Gld;
  }
  for (int i : prog.nonneg()) {
    const long double vi = v[i];
    grad[i] -= 1.0L / vi;
    hess(i, i) += 1.0L / (vi * vi);
  }
}

// Interior starting point: phase-1 QP for x, small positive multipliers,
// and a scaled identity (y0, Y) pushed up until the D-block is positive
// definite. Returns nullopt with fail set when S has no strict interior.
std::optional<Eigen::VectorXd> initial_point(const ConicProgram& prog, SolveStatus& fail) {
  const VariableLayout& lay = prog.layout();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(lay.total);
  const Eigen::MatrixXd empty_mat(0, lay.n);
  const Eigen::VectorXd empty_vec(0);
  const Eigen::MatrixXd In = Eigen::MatrixXd::Identity(lay.n, lay.n);
  const Eigen::VectorXd zn = Eigen::VectorXd::Zero(lay.n);

  bool have_x = false;
  for (double margin = 1.0; margin >= 1e-9; margin *= 0.1) {
    if (lay.has_mu) {
      // S = {Ax = b, x >= 0}; substitute x = x' + margin so x' >= 0 keeps
      // x componentwise >= margin.
      const Eigen::MatrixXd E = prog.lin_eq_E().middleCols(lay.off_x, lay.n);
      const Eigen::VectorXd d =
          prog.lin_eq_d() - margin * E * Eigen::VectorXd::Ones(lay.n);
      std::vector<int> all(lay.n);
      for (int i = 0; i < lay.n; ++i) all[i] = i;
      const QpResult qp = solve_qp(In, zn, empty_mat, empty_vec, E, d, all);
      if (qp.status == SolveStatus::Optimal) {
        v.segment(lay.off_x, lay.n) =
            qp.x + margin * Eigen::VectorXd::Ones(lay.n);
        have_x = true;
        break;
      }
    } else {
      const Eigen::MatrixXd G = prog.lin_ineq_G().middleCols(lay.off_x, lay.n);
      const Eigen::VectorXd h =
          prog.lin_ineq_h() - margin * Eigen::VectorXd::Ones(G.rows());
      const QpResult qp =
          solve_qp(In, zn, G, h, Eigen::MatrixXd(0, lay.n), empty_vec);
      if (qp.status == SolveStatus::Optimal) {
        v.segment(lay.off_x, lay.n) = qp.x;
        have_x = true;
        break;
      }
    }
  }
  if (!have_x) {
    fail = SolveStatus::Infeasible;
    return std::nullopt;
  }

  // Small positive values for the sign-constrained multipliers (lambda in
  // Inequality mode, mu, s); x entries are already interior.
  for (int i : prog.nonneg())
    if (i < lay.off_x || i >= lay.off_x + lay.n) v[i] = 1e-2;

  // Scale (y0, Y) up until the quadratic matrix block turns PD.
  for (double tau = 1.0; tau <= 1e12; tau *= 2.0) {
    v[lay.off_y0] = tau;
    for (int j = 0; j < lay.m; ++j) v[lay.off_Y + lay.vech_index(j, j)] = tau;
    if (prog.has_soc())
      v[prog.soc_t_index()] = prog.soc_u(v).norm() + 1.0;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(prog.d_block(v));
    if (es.eigenvalues().minCoeff() > 1e-6 && eval_barrier(prog, v).feasible)
      return v;
  }
  fail = SolveStatus::NumericalFailure;
  return std::nullopt;
}

// Least-squares equality multiplier w minimizing ||g + E'w||, empty if no
// equality constraints.
Eigen::VectorXd eq_multiplier(const Eigen::MatrixXd& E, const Eigen::VectorXd& g) {
  if (E.rows() == 0) return Eigen::VectorXd(0);
  return (E * E.transpose()).ldlt().solve(-E * g);
}

}  // namespace

ConicResult solve_conic(const ConicProgram& prog, const ConicSettings& settings,
                        const std::optional<DecisionBlock>& start) {
  const auto clock_start = std::chrono::steady_clock::now();
  const VariableLayout& lay = prog.layout();
  const int d = lay.total;
  const Eigen::MatrixXd& E = prog.lin_eq_E();
  const int le = static_cast<int>(E.rows());

  ConicResult res;
  res.report.status = SolveStatus::NumericalFailure;

  Eigen::VectorXd v;
  if (start) {
    v = lay.pack(*start);
    const bool eq_ok =
        le == 0 || (E * v - prog.lin_eq_d()).cwiseAbs().maxCoeff() <= 1e-8;
    if (!eq_ok || !eval_barrier(prog, v).feasible) v.resize(0);
  }
  if (v.size() == 0) {
    SolveStatus fail = SolveStatus::NumericalFailure;
    auto v0 = initial_point(prog, fail);
    if (!v0) {
      res.report.status = fail;
      res.v = Eigen::VectorXd::Zero(d);
      res.point = lay.unpack(res.v);
      return res;
    }
    v = *v0;
  }
  // Snap onto the equality manifold; Newton steps then stay on it.
  if (le > 0) {
    const Eigen::VectorXd rd = prog.lin_eq_d() - E * v;
    if (rd.cwiseAbs().maxCoeff() > 0.0)
      v += E.transpose() * (E * E.transpose()).ldlt().solve(rd);
  }

  const double nu = (lay.m + 1) + lay.m + (prog.has_soc() ? 2 : 0) +
                    prog.lin_ineq_G().rows() +
                    static_cast<double>(prog.nonneg().size());
  const Eigen::VectorXd& c = prog.objective();

  double tb = 1.0;
  int newton_total = 0;
  bool capped = false, stalled = false;
  VectorXld grad(d);
  MatrixXld hess(d, d);

  // Residual of the stationarity system after projecting out the equality
  // span; this is exactly what the reported multipliers certify.
  auto projected_norm = [&](const Eigen::VectorXd& g) {
    if (le == 0) return g.norm();
    return (g + E.transpose() * eq_multiplier(E, g)).norm();
  };

  // One centering at barrier parameter t; returns false on a line-search
  // stall before one of the exit criteria is met. All quantities are scaled
  // by 1/t (merit c'v + phi/t, gradient c + grad/t) so that the arithmetic
  // stays well conditioned when t grows to ~1/tol; absolute merits at large
  // t would drown the Newton decrement in rounding noise. The Newton system
  // itself is factored in long double: near the end of the path its
  // condition number exceeds what double can resolve, and an accurate step
  // is what lets the projected gradient reach the KKT target. dec_tol <= 0
  // disables the decrement exit, leaving only the stationarity target.
  auto center = [&](double t, double dec_tol) -> bool {
    BarrierState st = eval_barrier(prog, v);
    if (!st.feasible) return false;
    res.trace.emplace_back(t, c.dot(v) + st.value / t);
    // If the loop stalls short of the stationarity target, fall back to the
    // iterate with the smallest projected gradient seen along the way.
    double best_pg = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_iterate = v;
    int stalled = 0;
    for (int it = 0; it < settings.max_newton; ++it) {
      barrier_derivatives(prog, v, st, grad, hess);
      const Eigen::VectorXd g =
          c + (grad / static_cast<long double>(t)).cast<double>();
      const double pg = projected_norm(g);
      // Once the decrement exit is off, stop as soon as the projected
      // gradient plateaus: past that point the remaining error is set by
      // the double-precision evaluation of the problem data, and further
      // Newton steps only wander inside that noise floor.
      if (dec_tol <= 0.0 && pg >= 0.9 * best_pg) {
        if (++stalled >= 8) break;
      } else {
        stalled = 0;
      }
      if (pg < best_pg) {
        best_pg = pg;
        best_iterate = v;
      }
      // Stationarity certified to well below the KKT target: fully centered
      // for this barrier value.
      if (pg <= 0.25 * settings.tol) return true;

      Eigen::VectorXd step;
      double descent = 0.0;
      for (double reg = 1e-10; reg <= 1e-6; reg *= 10.0) {
        MatrixXld K = MatrixXld::Zero(d + le, d + le);
        K.topLeftCorner(d, d) = hess / static_cast<long double>(t);
        K.topLeftCorner(d, d).diagonal().array() += static_cast<long double>(reg);
        if (le > 0) {
          K.topRightCorner(d, le) = E.transpose().cast<long double>();
          K.bottomLeftCorner(le, d) = E.cast<long double>();
        }
        VectorXld rhs = VectorXld::Zero(d + le);
        rhs.head(d) = -g.cast<long double>();
        const VectorXld sol = Eigen::FullPivLU<MatrixXld>(K).solve(rhs);
        if (!sol.allFinite() ||
            static_cast<double>((K * sol - rhs).cwiseAbs().maxCoeff()) >
                1e-8 * (1.0 + g.cwiseAbs().maxCoeff()))
          continue;
        step = sol.head(d).cast<double>();
        descent = g.dot(step);
        if (descent < 0.0) break;
      }
      if (step.size() == 0 || descent >= 0.0) {
        v = best_iterate;
        return false;
      }
      if (dec_tol > 0.0 && -t * descent / 2.0 <= dec_tol) return true;

      // Fraction-to-boundary on the closed-form constraints, then a
      // backtracking Armijo search handling the matrix and cone blocks.
      double amax = std::numeric_limits<double>::infinity();
      for (int i : prog.nonneg())
        if (step[i] < 0.0) amax = std::min(amax, -v[i] / step[i]);
      if (prog.lin_ineq_G().rows() > 0) {
        const Eigen::VectorXd gstep = prog.lin_ineq_G() * step;
        for (int i = 0; i < gstep.size(); ++i)
          if (gstep[i] > 0.0) amax = std::min(amax, st.slack[i] / gstep[i]);
      }
      double a = std::min(1.0, settings.ftb * amax);
      bool accepted = false;
      if (-t * descent <= 1e-9) {
        // The predicted merit decrease (half the squared Newton decrement)
        // is below what double-precision merit differences can resolve, so
        // an Armijo test would compare noise. The damped step of a
        // self-concordant barrier is safe here; accept it on feasibility
        // alone and let the plateau check above terminate the loop.
        const Eigen::VectorXd trial = v + a * step;
        const BarrierState st2 = eval_barrier(prog, trial);
        if (st2.feasible) {
          v = trial;
          st = st2;
          accepted = true;
        }
      }
      for (int bt = 0; !accepted && bt < 60; ++bt, a *= 0.5) {
        const Eigen::VectorXd trial = v + a * step;
        const BarrierState st2 = eval_barrier(prog, trial);
        if (!st2.feasible) continue;
        // Merit difference assembled from differences, never from the
        // cancellation-prone absolute values.
        const double dmerit = a * c.dot(step) + (st2.value - st.value) / t;
        if (dmerit <= kArmijo * a * descent) {
          v = trial;
          st = st2;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        v = best_iterate;
        return false;
      }
      ++newton_total;
      res.trace.emplace_back(t, c.dot(v) + st.value / t);
    }
    v = best_iterate;
    return true;  // hit max_newton; treat as centered enough
  };

  // Barrier multipliers at the center for barrier parameter t.
  auto mults_at = [&](const BarrierState& st, double t) {
    ConicMultipliers mm;
    const int r = lay.m + 1;
    mm.Z_d = st.d_llt.solve(Eigen::MatrixXd::Identity(r, r)) / t;
    mm.Z_y = st.y_llt.solve(Eigen::MatrixXd::Identity(lay.m, lay.m)) / t;
    if (prog.has_soc()) {
      mm.soc_dual0 = 2.0 * st.soc_t / (st.soc_s * t);
      mm.soc_dual = -2.0 * st.soc_u / (st.soc_s * t);
    } else {
      mm.soc_dual = Eigen::VectorXd(0);
    }
    mm.ineq_mult = st.slack.size() > 0
                       ? (1.0 / t) * st.slack.array().inverse().matrix().eval()
                       : Eigen::VectorXd(0);
    mm.bound_mult = Eigen::VectorXd::Zero(d);
    for (int i : prog.nonneg()) mm.bound_mult[i] = 1.0 / (t * v[i]);
    // Equality multipliers from least-squares stationarity at the center.
    barrier_derivatives(prog, v, st, grad, hess);
    mm.eq_mult =
        eq_multiplier(E, c + (grad / static_cast<long double>(t)).cast<double>());
    return mm;
  };

  // Best certified candidate so far; candidates are accepted against the
  // honestly recomputed KKT residual, never against path-following theory.
  double best_kkt = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_v;
  ConicMultipliers best_mult;
  auto try_accept = [&](const Eigen::VectorXd& vv, const ConicMultipliers& mm) {
    const double r = kkt_residual(prog, vv, mm);
    if (r < best_kkt) {
      best_kkt = r;
      best_v = vv;
      best_mult = mm;
    }
    return r <= settings.tol;
  };

  // Once t is large enough that the curvature term of the central path is
  // O(tol), extrapolate consecutive centers (affine in 1/t) to t = infinity.
  // This removes the 1/t complementarity error without pushing t to 1/tol,
  // where the Newton systems stop being solvable in finite precision.
  const double t_cert = 1.0 / std::sqrt(settings.tol);
  const double t_cap = 8.0 * (lay.m + 1) / settings.tol;
  Eigen::VectorXd v_prev;
  ConicMultipliers mult_prev;
  double t_prev = 0.0;
  int outer = 0;
  while (true) {
    const bool cert = tb >= t_cert;
    if (!center(tb, cert ? 0.0 : kDecrementTol) && !cert) {
      stalled = true;
      break;
    }
    if (cert) {
      const BarrierState st = eval_barrier(prog, v);
      if (!st.feasible) {
        stalled = true;
        break;
      }
      const ConicMultipliers mm = mults_at(st, tb);
      if (try_accept(v, mm)) break;
      if (t_prev > 0.0) {
        const double f = (1.0 / tb) / (1.0 / t_prev - 1.0 / tb);
        const Eigen::VectorXd ve = v + f * (v - v_prev);
        ConicMultipliers me;
        me.Z_d = mm.Z_d + f * (mm.Z_d - mult_prev.Z_d);
        me.Z_y = mm.Z_y + f * (mm.Z_y - mult_prev.Z_y);
        me.soc_dual0 = mm.soc_dual0 + f * (mm.soc_dual0 - mult_prev.soc_dual0);
        me.soc_dual = mm.soc_dual + f * (mm.soc_dual - mult_prev.soc_dual);
        me.ineq_mult = mm.ineq_mult + f * (mm.ineq_mult - mult_prev.ineq_mult);
        me.bound_mult = mm.bound_mult + f * (mm.bound_mult - mult_prev.bound_mult);
        me.eq_mult = mm.eq_mult + f * (mm.eq_mult - mult_prev.eq_mult);
        if (try_accept(ve, me)) break;
      }
      v_prev = v;
      mult_prev = mm;
      t_prev = tb;
    }
    if (tb >= t_cap) {
      capped = true;
      break;
    }
    if (++outer >= settings.max_outer) {
      capped = true;
      break;
    }
    tb = std::min(tb / settings.mu_factor, t_cap);
  }

  // Last resort when the loop never certified a candidate.
  if (!std::isfinite(best_kkt)) {
    const BarrierState st = eval_barrier(prog, v);
    if (st.feasible) try_accept(v, mults_at(st, tb));
  }

  res.report.iterations = newton_total;
  res.report.barrier_mu_final = nu / tb;
  if (std::isfinite(best_kkt)) {
    res.v = best_v;
    res.point = lay.unpack(best_v);
    res.report.objective = c.dot(best_v);
    res.mult = best_mult;
    res.report.kkt_residual = best_kkt;
    if (best_kkt <= settings.tol)
      res.report.status = SolveStatus::Optimal;
    else
      res.report.status =
          stalled ? SolveStatus::NumericalFailure : SolveStatus::MaxIter;
  } else {
    res.v = v;
    res.point = lay.unpack(v);
    res.report.objective = c.dot(v);
    res.report.status = SolveStatus::NumericalFailure;
  }

  res.report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start)
          .count();
  return res;
}

double kkt_residual(const ConicProgram& prog, const Eigen::VectorXd& v,
                    const ConicMultipliers& mult) {
  const VariableLayout& lay = prog.layout();
  double res = 0.0;
  auto track = [&](double r) { res = std::max(res, r); };

  // Primal feasibility.
  const Eigen::MatrixXd D = prog.d_block(v);
  const Eigen::MatrixXd Y = prog.y_block(v);
  track(std::max(0.0, -Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(D)
                           .eigenvalues()
                           .minCoeff()));
  track(std::max(0.0, -Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Y)
                           .eigenvalues()
                           .minCoeff()));
  Eigen::VectorXd soc_u;
  double soc_t = 0.0;
  if (prog.has_soc()) {
    soc_t = prog.soc_t(v);
    soc_u = prog.soc_u(v);
    track(std::max(0.0, soc_u.norm() - soc_t));
  }
  Eigen::VectorXd slack(0);
  if (prog.lin_ineq_G().rows() > 0) {
    slack = prog.lin_ineq_h() - prog.lin_ineq_G() * v;
    track(std::max(0.0, -slack.minCoeff()));
  }
  if (prog.lin_eq_E().rows() > 0)
    track((prog.lin_eq_E() * v - prog.lin_eq_d()).cwiseAbs().maxCoeff());
  for (int i : prog.nonneg()) track(std::max(0.0, -v[i]));

  // Dual feasibility.
  track(std::max(0.0, -Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(mult.Z_d)
                           .eigenvalues()
                           .minCoeff()));
  track(std::max(0.0, -Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(mult.Z_y)
                           .eigenvalues()
                           .minCoeff()));
  if (prog.has_soc())
    track(std::max(0.0, mult.soc_dual.norm() - mult.soc_dual0));
  if (mult.ineq_mult.size() > 0)
    track(std::max(0.0, -mult.ineq_mult.minCoeff()));
  for (int i : prog.nonneg()) track(std::max(0.0, -mult.bound_mult[i]));

  // Stationarity: c - adj(Z_d) - adj(Z_y) - adj(soc) + G'lam + E'nu - eta.
  Eigen::VectorXd r = prog.objective();
  for (int k = 0; k < lay.total; ++k)
    r[k] -= mult.Z_d.cwiseProduct(prog.d_block_derivative(k, v)).sum();
  for (int j = 0; j < lay.m; ++j)
    for (int i = j; i < lay.m; ++i)
      r[lay.off_Y + lay.vech_index(i, j)] -=
          (i == j) ? mult.Z_y(i, i) : 2.0 * mult.Z_y(i, j);
  if (prog.has_soc()) {
    r[prog.soc_t_index()] -= mult.soc_dual0;
    r -= prog.soc_u_jacobian().transpose() * mult.soc_dual;
  }
  if (mult.ineq_mult.size() > 0)
    r += prog.lin_ineq_G().transpose() * mult.ineq_mult;
  if (mult.eq_mult.size() > 0) r += prog.lin_eq_E().transpose() * mult.eq_mult;
  if (mult.bound_mult.size() > 0) r -= mult.bound_mult;
  track(r.cwiseAbs().maxCoeff());

  // Complementarity.
  track(std::abs(mult.Z_d.cwiseProduct(D).sum()));
  track(std::abs(mult.Z_y.cwiseProduct(Y).sum()));
  if (prog.has_soc())
    track(std::abs(mult.soc_dual0 * soc_t + mult.soc_dual.dot(soc_u)));
  for (int i = 0; i < slack.size(); ++i)
    track(std::abs(mult.ineq_mult[i] * slack[i]));
  for (int i : prog.nonneg()) track(std::abs(mult.bound_mult[i] * v[i]));

  return res;
}

}  // namespace drosvi
