#include "drosvi/ambiguity.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace drosvi {

MomentAmbiguity::MomentAmbiguity(Eigen::VectorXd mu0, Eigen::MatrixXd sigma0,
                                 double gamma1, double gamma2)
    : mu0_(std::move(mu0)),
      sigma0_(std::move(sigma0)),
      gamma1_(gamma1),
      gamma2_(gamma2) {
  const auto m = mu0_.size();
  if (sigma0_.rows() != m || sigma0_.cols() != m)
    throw std::invalid_argument("Sigma0 must be m x m");
  if ((sigma0_ - sigma0_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + sigma0_.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("Sigma0 must be symmetric");
  if (gamma1_ < 0.0) throw std::invalid_argument("gamma1 must be >= 0");
  if (gamma2_ < 1.0) throw std::invalid_argument("gamma2 must be >= 1");
  Eigen::LLT<Eigen::MatrixXd> llt(sigma0_);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("Sigma0 must be positive definite");
  factor_ = llt.matrixL();
}

double MomentAmbiguity::dual_objective(double y0, const Eigen::VectorXd& y,
                                       const Eigen::MatrixXd& Y, double z0) const {
  if (y.size() != dim() || Y.rows() != dim() || Y.cols() != dim())
    throw std::invalid_argument("dual_objective: dimension mismatch");
  const Eigen::MatrixXd weight = gamma2_ * sigma0_ + mu0_ * mu0_.transpose();
  return z0 + y0 + mu0_.dot(y) + weight.cwiseProduct(Y).sum();
}

double MomentAmbiguity::soc_margin(const Eigen::VectorXd& y, const Eigen::MatrixXd& Y,
                                   double z0) const {
  if (y.size() != dim() || Y.rows() != dim() || Y.cols() != dim())
    throw std::invalid_argument("soc_margin: dimension mismatch");
  const Eigen::VectorXd u = factor_.transpose() * (y + 2.0 * Y * mu0_);
  return z0 - std::sqrt(gamma1_) * u.norm();
}

}  // namespace drosvi
