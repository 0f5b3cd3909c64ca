#pragma once

#include <Eigen/Dense>
#include <optional>

#include "drosvi/nsdp.hpp"

namespace drosvi {

enum class SolveStatus { Optimal, MaxIter, NumericalFailure, Infeasible };

const char* to_string(SolveStatus s);

struct SolveReport {
  SolveStatus status = SolveStatus::NumericalFailure;
  double objective = 0.0;
  int iterations = 0;
  double kkt_residual = 0.0;
  double barrier_mu_final = 0.0;
  double wall_time = 0.0;  // seconds
};

/// Result of the dense convex QP
///   min 1/2 x'Qx + c'x  s.t.  A x <= b,  E x = d,  x_i >= 0 (i in nonneg).
/// Stationarity holds as Q x + c + A' ineq_mult + E' eq_mult - bound_mult = 0
/// with ineq_mult >= 0 and bound_mult >= 0 (bound_mult is zero outside the
/// nonneg index set).
struct QpResult {
  SolveStatus status = SolveStatus::NumericalFailure;
  Eigen::VectorXd x;
  Eigen::VectorXd ineq_mult;
  Eigen::VectorXd eq_mult;
  Eigen::VectorXd bound_mult;
  int iterations = 0;
};

/// Primal-infeasible-start active-set method for strictly convex dense QPs.
/// Starts from the equality-constrained minimiser and adds violated
/// inequalities one at a time, dropping constraints whose multiplier turns
/// negative. Deterministic; intended for small problems (l + n <= 64).
QpResult solve_qp(const Eigen::MatrixXd& Q, const Eigen::VectorXd& c,
                  const Eigen::MatrixXd& A_ineq, const Eigen::VectorXd& b_ineq,
                  const Eigen::MatrixXd& E, const Eigen::VectorXd& d,
                  const std::vector<int>& nonneg = {});

struct ConicSettings {
  double tol = 1e-7;        // KKT residual target
  int max_outer = 200;      // barrier (outer) iteration cap
  int max_newton = 500;     // Newton steps per centering
  double mu_factor = 0.2;   // barrier parameter reduction per outer step
  double ftb = 0.99;        // fraction-to-boundary safeguard
};

/// Dual information reported by the conic solver; see kkt_residual for the
/// exact optimality system these certify.
struct ConicMultipliers {
  Eigen::MatrixXd Z_d;        // dual of the D-block,  Z_d >= 0
  Eigen::MatrixXd Z_y;        // dual of Y >= 0
  double soc_dual0 = 0.0;     // dual of the second-order cone block
  Eigen::VectorXd soc_dual;
  Eigen::VectorXd ineq_mult;  // Gx <= h multipliers, >= 0
  Eigen::VectorXd eq_mult;
  Eigen::VectorXd bound_mult; // nonnegative-variable multipliers, >= 0
};

struct ConicResult {
  Eigen::VectorXd v;          // flat decision vector (program layout)
  DecisionBlock point;
  SolveReport report;
  ConicMultipliers mult;
  /// (barrier parameter, merit value) at every accepted Newton step; the
  /// merit is non-increasing within a fixed barrier parameter.
  std::vector<std::pair<double, double>> trace;
};

/// Path-following barrier Newton method on the deterministic program
/// produced by nsdp build(): log-det barrier on the (psd-concave) D-block
/// and on Y, logarithmic barriers on the second-order cone, the linear
/// inequalities and the nonnegative variables; equality constraints are
/// kept in the Newton KKT system. Deterministic for a fixed program and
/// starting point.
ConicResult solve_conic(const ConicProgram& prog, const ConicSettings& settings = {},
                        const std::optional<DecisionBlock>& start = std::nullopt);

/// Max of primal-feasibility, stationarity and complementarity residuals of
/// the program's KKT system at (v, mult). Zero at an exact KKT point.
double kkt_residual(const ConicProgram& prog, const Eigen::VectorXd& v,
                    const ConicMultipliers& mult);

}  // namespace drosvi
