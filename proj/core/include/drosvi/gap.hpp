#pragma once

#include <Eigen/Dense>

#include "drosvi/model.hpp"

namespace drosvi {

/// Euclidean projection onto a polyhedral set with the KKT multipliers of
/// the projection QP. For EqualityNonneg: point - z + A' lambda - mu = 0
/// with mu >= 0; for Inequality: point - z + A' lambda = 0 with lambda >= 0.
struct Projection {
  Eigen::VectorXd point;
  Eigen::VectorXd lambda;
  Eigen::VectorXd mu;  // empty in Inequality mode
};

/// argmin_{y in S} ||y - z||. Throws std::runtime_error if S is infeasible.
Projection project(const PolyhedralSet& S, const Eigen::VectorXd& z);

struct GapEval {
  double value = 0.0;
  Eigen::VectorXd maximizer_y;
  double alpha = 0.0;
};

/// Regularized gap function
///   f_alpha(x, xi) = max_{y in S} <F(x,xi), x - y> - ||y - x||^2 / (2 alpha),
/// evaluated through the closed-form maximizer y* = proj_S(x - alpha F).
/// Requires x in S (within 1e-9); nonnegative there.
GapEval gap_value(const AffineSvip& inst, double alpha, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& xi);

/// Dual upper bound on the gap. EqualityNonneg mode (mu >= 0, lambda free):
///   omega = (alpha/2) ||F + A'lambda - mu||^2 + <b - Ax, lambda> + <mu, x>.
/// Inequality mode (lambda >= 0, mu must be empty):
///   omega = (alpha/2) ||F + A'lambda||^2 + <b - Ax, lambda>.
/// Weak duality: omega >= f_alpha for x in S.
double omega(const AffineSvip& inst, double alpha, const Eigen::VectorXd& x,
             const Eigen::VectorXd& lambda, const Eigen::VectorXd& mu,
             const Eigen::VectorXd& xi);

/// Gap value together with the multipliers (lambda, mu) of the inner
/// maximization, scaled so that omega(x, lambda, mu; xi) equals the gap
/// (strong duality witness).
struct GapDual {
  GapEval eval;
  Eigen::VectorXd lambda;
  Eigen::VectorXd mu;
};

GapDual gap_with_multipliers(const AffineSvip& inst, double alpha,
                             const Eigen::VectorXd& x, const Eigen::VectorXd& xi);

}  // namespace drosvi
