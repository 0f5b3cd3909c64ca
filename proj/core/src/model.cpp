#include "drosvi/model.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace drosvi {

bool PolyhedralSet::contains(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != dim()) return false;
  if (mode == FeasMode::Inequality) {
    return num_rows() == 0 || ((A * x - b).maxCoeff() <= tol);
  }
  if (num_rows() > 0 && (A * x - b).cwiseAbs().maxCoeff() > tol) return false;
  return x.minCoeff() >= -tol;
}

AffineSvip::AffineSvip(Eigen::MatrixXd m0, std::vector<Eigen::MatrixXd> m_xi,
                       Eigen::MatrixXd q_lin, Eigen::VectorXd q0,
                       PolyhedralSet feasible)
    : n_(static_cast<int>(m0.rows())),
      m_(static_cast<int>(m_xi.size())),
      m0_(std::move(m0)),
      m_xi_(std::move(m_xi)),
      q_lin_(std::move(q_lin)),
      q0_(std::move(q0)),
      feasible_(std::move(feasible)) {
  if (m0_.cols() != n_) throw std::invalid_argument("M0 must be square");
  for (const auto& mk : m_xi_) {
    if (mk.rows() != n_ || mk.cols() != n_)
      throw std::invalid_argument("each M_k must be n x n");
  }
  if (q_lin_.rows() != n_ || q_lin_.cols() != m_)
    throw std::invalid_argument("q_lin must be n x m");
  if (q0_.size() != n_) throw std::invalid_argument("q0 must have length n");
  if (feasible_.dim() != n_)
    throw std::invalid_argument("feasible set dimension mismatch");
}

Eigen::MatrixXd AffineSvip::M(const Eigen::VectorXd& xi) const {
  if (xi.size() != m_) throw std::invalid_argument("xi dimension mismatch");
  Eigen::MatrixXd out = m0_;
  for (int k = 0; k < m_; ++k) out += xi[k] * m_xi_[k];
  return out;
}

Eigen::VectorXd AffineSvip::q(const Eigen::VectorXd& xi) const {
  if (xi.size() != m_) throw std::invalid_argument("xi dimension mismatch");
  return q_lin_ * xi + q0_;
}

Eigen::VectorXd AffineSvip::F(const Eigen::VectorXd& x, const Eigen::VectorXd& xi) const {
  if (x.size() != n_) throw std::invalid_argument("x dimension mismatch");
  return M(xi) * x + q(xi);
}

AffineCoeffs AffineSvip::coeffs(const Eigen::VectorXd& x) const {
  if (x.size() != n_) throw std::invalid_argument("x dimension mismatch");
  AffineCoeffs out;
  out.C = q_lin_.transpose();  // m x n, column i = q^i
  out.c0 = q0_;
  for (int k = 0; k < m_; ++k) {
    // (M_k x)_i contributes to the xi_k coefficient of F_i.
    out.C.row(k) += (m_xi_[k] * x).transpose();
  }
  out.c0 += m0_ * x;
  return out;
}

double AffineSvip::beta0() const {
  if (beta0_override_) return *beta0_override_;
  for (const auto& mk : m_xi_) {
    if ((mk + mk.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw std::runtime_error(
          "beta0: M(xi) has a xi-dependent symmetric part; the uniform "
          "monotonicity modulus would require an infimum over the support. "
          "Supply an override via set_beta0_override().");
  }
  Eigen::MatrixXd sym = 0.5 * (m0_ + m0_.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  return es.eigenvalues().minCoeff();
}

}  // namespace drosvi
