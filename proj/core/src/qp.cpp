#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "drosvi/solver.hpp"

namespace drosvi {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::MaxIter: return "max_iter";
    case SolveStatus::NumericalFailure: return "numerical_failure";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

struct KktSolve {
  bool consistent = false;
  Eigen::VectorXd x;
  Eigen::VectorXd eq_mult;
  Eigen::VectorXd act_mult;
};

// Equality-constrained QP for the current working set:
//   [Q  E'  Gw'] [x ]   [-c ]
//   [E  0   0  ] [nu] = [ d ]
//   [Gw 0   0  ] [la]   [ hw]
KktSolve solve_eqp(const Eigen::MatrixXd& Q, const Eigen::VectorXd& c,
                   const Eigen::MatrixXd& E, const Eigen::VectorXd& d,
                   const Eigen::MatrixXd& G, const Eigen::VectorXd& h,
                   const std::vector<int>& active) {
  const int n = static_cast<int>(Q.rows());
  const int le = static_cast<int>(E.rows());
  const int la = static_cast<int>(active.size());
  const int dim = n + le + la;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd rhs(dim);
  K.topLeftCorner(n, n) = Q;
  K.block(0, n, n, le) = E.transpose();
  K.block(n, 0, le, n) = E;
  for (int a = 0; a < la; ++a) {
    K.block(0, n + le + a, n, 1) = G.row(active[a]).transpose();
    K.block(n + le + a, 0, 1, n) = G.row(active[a]);
  }
  rhs.head(n) = -c;
  rhs.segment(n, le) = d;
  for (int a = 0; a < la; ++a) rhs[n + le + a] = h[active[a]];

  Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
  KktSolve out;
  Eigen::VectorXd sol = lu.solve(rhs);
  const double scale = 1.0 + rhs.cwiseAbs().maxCoeff() + K.cwiseAbs().maxCoeff();
  out.consistent = (K * sol - rhs).cwiseAbs().maxCoeff() <= 1e-9 * scale;
  out.x = sol.head(n);
  out.eq_mult = sol.segment(n, le);
  out.act_mult = sol.tail(la);
  return out;
}

}  // namespace

QpResult solve_qp(const Eigen::MatrixXd& Q, const Eigen::VectorXd& c,
                  const Eigen::MatrixXd& A_ineq, const Eigen::VectorXd& b_ineq,
                  const Eigen::MatrixXd& E, const Eigen::VectorXd& d,
                  const std::vector<int>& nonneg) {
  const int n = static_cast<int>(Q.rows());
  if (Q.cols() != n || c.size() != n) throw std::invalid_argument("solve_qp: bad Q/c");
  if (A_ineq.rows() != b_ineq.size() || (A_ineq.rows() > 0 && A_ineq.cols() != n))
    throw std::invalid_argument("solve_qp: bad inequality data");
  if (E.rows() != d.size() || (E.rows() > 0 && E.cols() != n))
    throw std::invalid_argument("solve_qp: bad equality data");

  // All inequalities as rows of G x <= h; bound rows follow the A_ineq rows.
  const int li = static_cast<int>(A_ineq.rows());
  const int lb = static_cast<int>(nonneg.size());
  Eigen::MatrixXd G(li + lb, n);
  Eigen::VectorXd h(li + lb);
  G.topRows(li) = A_ineq;
  h.head(li) = b_ineq;
  for (int k = 0; k < lb; ++k) {
    G.row(li + k).setZero();
    G(li + k, nonneg[k]) = -1.0;
    h[li + k] = 0.0;
  }

  QpResult res;
  res.ineq_mult = Eigen::VectorXd::Zero(li);
  res.bound_mult = Eigen::VectorXd::Zero(n);
  std::vector<int> active;

  const int max_iter = 50 + 10 * (li + lb + static_cast<int>(E.rows()));
  const double tol = 1e-10;
  KktSolve kkt;
  for (int iter = 0; iter < max_iter; ++iter) {
    res.iterations = iter + 1;
    kkt = solve_eqp(Q, c, E, d, G, h, active);
    if (!kkt.consistent) {
      // The working set only ever contains constraints that were violated,
      // so an inconsistent system means the constraints exclude each other.
      res.status = SolveStatus::Infeasible;
      return res;
    }
    // Drop the most negative active multiplier, if any.
    int drop = -1;
    double most_negative = -tol;
    for (int a = 0; a < static_cast<int>(active.size()); ++a)
      if (kkt.act_mult[a] < most_negative) {
        most_negative = kkt.act_mult[a];
        drop = a;
      }
    if (drop >= 0) {
      active.erase(active.begin() + drop);
      continue;
    }
    // Add the most violated inactive inequality whose gradient is linearly
    // independent of the working set; a dependent row would make the KKT
    // system singular without signalling infeasibility.
    const int le = static_cast<int>(E.rows());
    Eigen::MatrixXd W(le + static_cast<int>(active.size()) + 1, n);
    W.topRows(le) = E;
    for (int a = 0; a < static_cast<int>(active.size()); ++a)
      W.row(le + a) = G.row(active[a]);
    const int base_rank =
        W.rows() > 1 ? static_cast<int>(
                           Eigen::FullPivLU<Eigen::MatrixXd>(W.topRows(W.rows() - 1)).rank())
                     : 0;
    int add = -1;
    int dep = -1;
    const double viol_tol = tol * (1.0 + kkt.x.cwiseAbs().maxCoeff());
    double worst = viol_tol;
    double worst_dep = viol_tol;
    for (int i = 0; i < G.rows(); ++i) {
      const double viol = G.row(i).dot(kkt.x) - h[i];
      if (viol <= viol_tol) continue;
      W.bottomRows(1) = G.row(i);
      if (static_cast<int>(Eigen::FullPivLU<Eigen::MatrixXd>(W).rank()) <= base_rank) {
        if (viol > worst_dep) {
          worst_dep = viol;
          dep = i;
        }
        continue;
      }
      if (viol <= worst) continue;
      worst = viol;
      add = i;
    }
    if (add < 0 && dep >= 0) {
      // Every violated gradient lies in the span of the working set: the
      // violation is forced by rows already held at equality, so exchange
      // one of them for the violated row. Writing g = sum coef_j w_j, only
      // rows with coef_j > 0 help: relaxing such a row (w_j' x decreasing)
      // lowers g' x towards feasibility. A nonzero coefficient also keeps
      // the exchanged working set linearly independent.
      const Eigen::VectorXd coef =
          W.topRows(W.rows() - 1)
              .transpose()
              .colPivHouseholderQr()
              .solve(G.row(dep).transpose());
      int drop_a = -1;
      double best = 1e-8 * (1.0 + coef.cwiseAbs().maxCoeff());
      for (int a = 0; a < static_cast<int>(active.size()); ++a)
        if (coef[le + a] > best) {
          best = coef[le + a];
          drop_a = a;
        }
      if (drop_a < 0) {
        // Dependency rests on the equalities alone: they pin the violated
        // constraint's value, so no feasible point exists.
        res.status = SolveStatus::Infeasible;
        return res;
      }
      active[drop_a] = dep;
      continue;
    }
    if (add < 0) {
      res.status = SolveStatus::Optimal;
      res.x = kkt.x;
      res.eq_mult = kkt.eq_mult;
      for (int a = 0; a < static_cast<int>(active.size()); ++a) {
        const int row = active[a];
        const double mult = std::max(0.0, kkt.act_mult[a]);
        if (row < li)
          res.ineq_mult[row] = mult;
        else
          res.bound_mult[nonneg[row - li]] = mult;
      }
      return res;
    }
    active.push_back(add);
  }
  res.status = SolveStatus::NumericalFailure;
  res.x = kkt.x;
  return res;
}

}  // namespace drosvi
