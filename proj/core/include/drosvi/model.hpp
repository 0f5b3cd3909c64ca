#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace drosvi {

enum class FeasMode {
  EqualityNonneg,  // S = {x | Ax = b, x >= 0}
  Inequality       // S = {x | Ax <= b}
};

/// Polyhedral feasible set of the variational inequality. A is l x n.
struct PolyhedralSet {
  FeasMode mode = FeasMode::Inequality;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;

  int dim() const { return static_cast<int>(A.cols()); }
  int num_rows() const { return static_cast<int>(A.rows()); }

  bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const;
};

/// Coefficients of the xi-affine mapping at a fixed decision x:
/// F_i(x, xi) = <C.col(i), xi> + c0(i).
struct AffineCoeffs {
  Eigen::MatrixXd C;   // m x n, column i = c^i(x)
  Eigen::VectorXd c0;  // n
};

/// Affine stochastic VI data: F(x, xi) = M(xi) x + q(xi) with M and q
/// affine in xi. Stored as M(xi) = M0 + sum_k xi_k * Mk and
/// q(xi) = Qlin xi + q0. Immutable after construction.
class AffineSvip {
 public:
  AffineSvip(Eigen::MatrixXd m0, std::vector<Eigen::MatrixXd> m_xi,
             Eigen::MatrixXd q_lin, Eigen::VectorXd q0, PolyhedralSet feasible);

  int n() const { return n_; }
  int m() const { return m_; }
  const PolyhedralSet& feasible() const { return feasible_; }

  const Eigen::MatrixXd& m0() const { return m0_; }
  const std::vector<Eigen::MatrixXd>& m_xi() const { return m_xi_; }
  const Eigen::MatrixXd& q_lin() const { return q_lin_; }
  const Eigen::VectorXd& q0() const { return q0_; }

  Eigen::MatrixXd M(const Eigen::VectorXd& xi) const;
  Eigen::VectorXd q(const Eigen::VectorXd& xi) const;

  /// F(x, xi) = M(xi) x + q(xi).
  Eigen::VectorXd F(const Eigen::VectorXd& x, const Eigen::VectorXd& xi) const;

  /// c^i(x) = q^i + sum_j x_j m^{ij} and c^i_0(x) = q^i_0 + sum_j x_j m^{ij}_0,
  /// so that F_i(x, xi) = <c^i(x), xi> + c^i_0(x).
  AffineCoeffs coeffs(const Eigen::VectorXd& x) const;

  /// Strong-monotonicity modulus: lambda_min of the symmetric part of M0.
  /// Valid only when the xi-dependent part of M has no symmetric component
  /// (e.g. the antisymmetric game coupling); otherwise throws unless an
  /// override was supplied.
  double beta0() const;

  void set_beta0_override(double value) { beta0_override_ = value; }

 private:
  int n_ = 0;
  int m_ = 0;
  Eigen::MatrixXd m0_;                  // n x n
  std::vector<Eigen::MatrixXd> m_xi_;   // m matrices, n x n
  Eigen::MatrixXd q_lin_;               // n x m, row i = q^i
  Eigen::VectorXd q0_;                  // n
  PolyhedralSet feasible_;
  std::optional<double> beta0_override_;
};

/// Two-player game data from which a benchmark SVIP is derived.
struct GameInstance {
  int n1 = 0, n2 = 0;
  Eigen::MatrixXd M1, M2;        // symmetric positive definite blocks
  Eigen::MatrixXd A1, A2;        // l_nu x n_nu constraint matrices
  Eigen::VectorXd b1, b2;
  Eigen::MatrixXd r_const;       // n1 x n2, entries r0^{ij}
  Eigen::MatrixXd Q_map;         // (n1+n2) x m
  Eigen::VectorXd q0;            // n1+n2
  Eigen::VectorXd x_star0;       // n1+n2

  int n() const { return n1 + n2; }
  int m() const { return n1 * n2 + 2; }
};

}  // namespace drosvi
