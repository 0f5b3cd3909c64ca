#pragma once

#include <Eigen/Dense>
#include <vector>

#include "drosvi/ambiguity.hpp"
#include "drosvi/model.hpp"

namespace drosvi {

/// One quadratic sublevel constraint g(xi) = xi'A xi + 2 b'xi + c <= 0.
struct SupportQuadratic {
  Eigen::MatrixXd A_tilde;
  Eigen::VectorXd b_tilde;
  double c_tilde = 0.0;

  double eval(const Eigen::VectorXd& xi) const {
    return xi.dot(A_tilde * xi) + 2.0 * b_tilde.dot(xi) + c_tilde;
  }

  /// Augmented (m+1) x (m+1) matrix [[c, b'], [b, A]].
  Eigen::MatrixXd augmented() const;
};

/// Support of the random vector: all of R^m, or an intersection of
/// quadratic sublevel sets.
struct SupportSpec {
  bool full_space = true;
  std::vector<SupportQuadratic> quads;

  int count() const { return full_space ? 0 : static_cast<int>(quads.size()); }
  bool contains(const Eigen::VectorXd& xi, double tol = 0.0) const;

  static SupportSpec full();
  /// Box {lo_i <= xi_i <= hi_i} as the quadratics (xi_i - lo_i)(xi_i - hi_i) <= 0.
  static SupportSpec box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);
  /// Intersection of ellipsoids (xi - center_i)' P_i^{-1} (xi - center_i) <= 1.
  static SupportSpec ellipsoids(const std::vector<Eigen::VectorXd>& centers,
                                const std::vector<Eigen::MatrixXd>& shapes);
};

/// Decision variables of the deterministic program. mu is empty in
/// Inequality mode, s is empty for a full-space support, z0 is fixed at 0
/// when gamma1 = 0.
struct DecisionBlock {
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;
  Eigen::VectorXd mu;
  double y0 = 0.0;
  Eigen::VectorXd y;
  Eigen::MatrixXd Y;
  double z0 = 0.0;
  Eigen::VectorXd s;
};

/// D_alpha(w) = [[y0, y'/2], [y/2, Y]] - G(x,lambda,mu)
///              - (alpha/2) sum_i H^i(x,lambda,mu),
/// the (m+1) x (m+1) matrix whose quadratic form in (1, xi) equals
/// xi'Y xi + xi'y + y0 - omega_alpha(x,lambda,mu; xi).
Eigen::MatrixXd assemble_D(const AffineSvip& inst, double alpha, const DecisionBlock& w);

/// Flat-vector layout of the decision block: x, lambda, [mu], y0, y,
/// vech(Y) (lower triangle, column major), [z0], [s].
struct VariableLayout {
  int n = 0, l = 0, m = 0, p = 0;
  bool has_mu = false;
  bool has_z0 = false;

  int off_x = 0, off_lambda = 0, off_mu = 0, off_y0 = 0, off_y = 0, off_Y = 0,
      off_z0 = 0, off_s = 0;
  int total = 0;

  int vech_size() const { return m * (m + 1) / 2; }
  /// Index of entry (i, j), i >= j, within the vech block.
  int vech_index(int i, int j) const { return j * m - j * (j - 1) / 2 + (i - j); }

  Eigen::VectorXd pack(const DecisionBlock& w) const;
  DecisionBlock unpack(const Eigen::VectorXd& v) const;
};

/// The deterministic conic program produced by build(). The D-block is
/// quadratic in the decision vector: an affine part, a bilinear correction
/// on the (0,0) entry (the <b - Ax, lambda> + <mu, x> term), and the
/// rank-structured -(alpha/2) P(v) P(v)' term with P affine. The program is
/// convex whenever alpha >= 1/(2 beta0). Immutable after build.
class ConicProgram {
 public:
  const VariableLayout& layout() const { return layout_; }
  double alpha() const { return alpha_; }
  const Eigen::VectorXd& objective() const { return c_; }
  double objective_value(const Eigen::VectorXd& v) const { return c_.dot(v); }

  /// D-block (size m+1) including the support terms sum_i s_i A~_i.
  Eigen::MatrixXd d_block(const Eigen::VectorXd& v) const;
  /// P(v), the (m+1) x n matrix with column i = [p^i_0; c^i(x)].
  Eigen::MatrixXd p_matrix(const Eigen::VectorXd& v) const;
  /// Affine part of the D-block (everything except -(alpha/2) P P').
  Eigen::MatrixXd lin_block(const Eigen::VectorXd& v) const;
  /// Schur-complement lift [[lin(v), P(v)], [P(v)', (2/alpha) I_n]],
  /// PSD exactly when d_block(v) is PSD. Size (m+1) + n.
  Eigen::MatrixXd lifted_block(const Eigen::VectorXd& v) const;

  /// dD/dv_k at v, and the (constant-free) second derivative d2D/dv_k dv_l.
  Eigen::MatrixXd d_block_derivative(int k, const Eigen::VectorXd& v) const;
  Eigen::MatrixXd d_block_second(int k, int l) const;

  Eigen::MatrixXd y_block(const Eigen::VectorXd& v) const;

  bool has_soc() const { return layout_.has_z0; }
  /// (t(v), u(v)) of the cone constraint t >= ||u||; sqrt(gamma1) is folded
  /// into u so the margin is t - ||u||.
  double soc_t(const Eigen::VectorXd& v) const;
  Eigen::VectorXd soc_u(const Eigen::VectorXd& v) const;
  const Eigen::MatrixXd& soc_u_jacobian() const { return soc_A_; }
  int soc_t_index() const { return layout_.off_z0; }

  const Eigen::MatrixXd& lin_ineq_G() const { return lin_G_; }
  const Eigen::VectorXd& lin_ineq_h() const { return lin_h_; }
  const Eigen::MatrixXd& lin_eq_E() const { return lin_E_; }
  const Eigen::VectorXd& lin_eq_d() const { return lin_d_; }
  const std::vector<int>& nonneg() const { return nonneg_; }

  bool convexity_certified() const { return convexity_certified_; }

  /// Block sizes and coefficient tensors, for debugging.
  std::string to_json() const;

 private:
  friend ConicProgram build(const AffineSvip&, double, const MomentAmbiguity&,
                            const SupportSpec&);

  VariableLayout layout_;
  double alpha_ = 1.0;
  Eigen::VectorXd c_;
  Eigen::MatrixXd d_aff0_;
  std::vector<Eigen::MatrixXd> d_aff_;                  // per variable
  std::vector<std::tuple<int, int, double>> bilin00_;   // c * v_i * v_j on entry (0,0)
  Eigen::MatrixXd p0_;
  std::vector<Eigen::MatrixXd> p_aff_;                  // per variable
  Eigen::MatrixXd soc_A_;                               // u(v) = soc_A v (no constant part)
  Eigen::MatrixXd lin_G_;
  Eigen::VectorXd lin_h_;
  Eigen::MatrixXd lin_E_;
  Eigen::VectorXd lin_d_;
  std::vector<int> nonneg_;
  bool convexity_certified_ = false;
};

/// Assemble the deterministic program for the worst-case expected gap
/// minimization: dual objective, second-order-cone block (dropped together
/// with z0 when gamma1 = 0), the quadratic matrix constraint
/// D_alpha(w) + sum_i s_i A~_i >= 0 (s absent for full-space support),
/// Y >= 0, and x in S with the sign conditions on lambda/mu/s.
ConicProgram build(const AffineSvip& inst, double alpha, const MomentAmbiguity& amb,
                   const SupportSpec& support);

}  // namespace drosvi
