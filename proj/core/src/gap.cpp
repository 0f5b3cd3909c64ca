#include "drosvi/gap.hpp"

#include <stdexcept>

#include "drosvi/solver.hpp"

namespace drosvi {

Projection project(const PolyhedralSet& S, const Eigen::VectorXd& z) {
  if (z.size() != S.dim()) throw std::invalid_argument("project: dimension mismatch");
  const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(S.dim(), S.dim());
  QpResult r;
  if (S.mode == FeasMode::Inequality) {
    r = solve_qp(Q, -z, S.A, S.b, Eigen::MatrixXd(0, S.dim()), Eigen::VectorXd(0));
  } else {
    std::vector<int> nonneg(S.dim());
    for (int i = 0; i < S.dim(); ++i) nonneg[i] = i;
    r = solve_qp(Q, -z, Eigen::MatrixXd(0, S.dim()), Eigen::VectorXd(0), S.A, S.b, nonneg);
  }
  if (r.status == SolveStatus::Infeasible)
    throw std::runtime_error("project: feasible set is empty");
  if (r.status != SolveStatus::Optimal)
    throw std::runtime_error("project: QP solver failed");
  Projection p;
  p.point = r.x;
  if (S.mode == FeasMode::Inequality) {
    p.lambda = r.ineq_mult;
  } else {
    p.lambda = r.eq_mult;
    p.mu = r.bound_mult;
  }
  return p;
}

GapEval gap_value(const AffineSvip& inst, double alpha, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& xi) {
  if (alpha <= 0.0) throw std::invalid_argument("gap_value: alpha must be positive");
  if (!inst.feasible().contains(x, 1e-9))
    throw std::invalid_argument("gap_value: x is not in S");
  const Eigen::VectorXd f = inst.F(x, xi);
  const Projection p = project(inst.feasible(), x - alpha * f);
  GapEval out;
  out.alpha = alpha;
  out.maximizer_y = p.point;
  out.value = f.dot(x - p.point) - (p.point - x).squaredNorm() / (2.0 * alpha);
  return out;
}

double omega(const AffineSvip& inst, double alpha, const Eigen::VectorXd& x,
             const Eigen::VectorXd& lambda, const Eigen::VectorXd& mu,
             const Eigen::VectorXd& xi) {
  const PolyhedralSet& S = inst.feasible();
  if (lambda.size() != S.num_rows()) throw std::invalid_argument("omega: lambda dimension");
  const Eigen::VectorXd f = inst.F(x, xi);
  const Eigen::VectorXd slack = S.b - S.A * x;
  if (S.mode == FeasMode::Inequality) {
    if (mu.size() != 0) throw std::invalid_argument("omega: mu is absent in Inequality mode");
    if (lambda.size() > 0 && lambda.minCoeff() < 0.0)
      throw std::invalid_argument("omega: lambda must be nonnegative in Inequality mode");
    return 0.5 * alpha * (f + S.A.transpose() * lambda).squaredNorm() + slack.dot(lambda);
  }
  if (mu.size() != inst.n()) throw std::invalid_argument("omega: mu dimension");
  if (mu.size() > 0 && mu.minCoeff() < 0.0)
    throw std::invalid_argument("omega: mu must be nonnegative");
  return 0.5 * alpha * (f + S.A.transpose() * lambda - mu).squaredNorm() +
         slack.dot(lambda) + mu.dot(x);
}

GapDual gap_with_multipliers(const AffineSvip& inst, double alpha,
                             const Eigen::VectorXd& x, const Eigen::VectorXd& xi) {
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
  if (!inst.feasible().contains(x, 1e-9))
    throw std::invalid_argument("gap_with_multipliers: x is not in S");
  const Eigen::VectorXd f = inst.F(x, xi);
  const Projection p = project(inst.feasible(), x - alpha * f);
  GapDual out;
  out.eval.alpha = alpha;
  out.eval.maximizer_y = p.point;
  out.eval.value = f.dot(x - p.point) - (p.point - x).squaredNorm() / (2.0 * alpha);
  // Projection stationarity y - z + A'l - m = 0 with z = x - alpha F maps to
  // the gap dual's stationarity after dividing the multipliers by alpha.
  out.lambda = p.lambda / alpha;
  if (p.mu.size() > 0) out.mu = p.mu / alpha;
  if (inst.feasible().mode == FeasMode::EqualityNonneg && out.mu.size() == 0)
    out.mu = Eigen::VectorXd::Zero(inst.n());
  return out;
}

}  // namespace drosvi
