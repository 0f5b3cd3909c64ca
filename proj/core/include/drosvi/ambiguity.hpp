#pragma once

#include <Eigen/Dense>

namespace drosvi {

/// Moment ambiguity set: distributions on the support whose mean lies in the
/// ellipsoid (E[xi]-mu0)' Sigma0^{-1} (E[xi]-mu0) <= gamma1 and whose centered
/// second moment satisfies E[(xi-mu0)(xi-mu0)'] <= gamma2 Sigma0.
/// Requires Sigma0 positive definite, gamma1 >= 0, gamma2 >= 1.
class MomentAmbiguity {
 public:
  MomentAmbiguity(Eigen::VectorXd mu0, Eigen::MatrixXd sigma0, double gamma1,
                  double gamma2);

  int dim() const { return static_cast<int>(mu0_.size()); }
  const Eigen::VectorXd& mu0() const { return mu0_; }
  const Eigen::MatrixXd& sigma0() const { return sigma0_; }
  double gamma1() const { return gamma1_; }
  double gamma2() const { return gamma2_; }

  /// Cached lower-triangular factor L with L L' = Sigma0.
  const Eigen::MatrixXd& factor() const { return factor_; }

  /// Objective of the dual reformulation:
  ///   z0 + y0 + mu0'y + <gamma2 Sigma0 + mu0 mu0', Y>.
  double dual_objective(double y0, const Eigen::VectorXd& y, const Eigen::MatrixXd& Y,
                        double z0) const;

  /// Slack of the second-order cone constraint:
  ///   z0 - sqrt(gamma1) ||L'(y + 2 Y mu0)||.
  /// Nonnegative iff the constraint holds; independent of the factor choice.
  double soc_margin(const Eigen::VectorXd& y, const Eigen::MatrixXd& Y, double z0) const;

 private:
  Eigen::VectorXd mu0_;
  Eigen::MatrixXd sigma0_;
  double gamma1_;
  double gamma2_;
  Eigen::MatrixXd factor_;
};

}  // namespace drosvi
