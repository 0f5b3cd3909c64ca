#pragma once

#include <Eigen/Dense>
#include <vector>

#include "drosvi/ambiguity.hpp"
#include "drosvi/model.hpp"
#include "drosvi/solver.hpp"

namespace drosvi {

/// Gray-code Sobol points in [0,1)^dim with published (Joe-Kuo) direction
/// numbers; the all-zero point of index 0 is skipped. Supports dim <= 32.
std::vector<Eigen::VectorXd> sobol(int count, int dim);

/// How the unit-cube points are mapped into sampling sites.
///   PaperLiteral:  xi^k = ((mu0 - 3 sqrt(2)) + (mu0 + 3 sqrt(2)) zeta_k) 1,
///                  with a scalar mu0 (first mean entry) and a 1-D sequence.
///   PerCoordinate: xi^k_i = (mu0_i - 3 sqrt(S0_ii)) + 6 sqrt(S0_ii) zeta_ki,
///                  an m-dimensional sequence covering the +-3 sigma box.
enum class SamplingMode { PaperLiteral, PerCoordinate };

struct QmcSampleSet {
  std::vector<Eigen::VectorXd> points;
  Eigen::VectorXd weights;  // N(mu0, Sigma0) density at each point
  SamplingMode mode = SamplingMode::PerCoordinate;
};

/// Density of N(mu0, Sigma0) at xi.
double gaussian_density(const MomentAmbiguity& amb, const Eigen::VectorXd& xi);

QmcSampleSet qmc_samples(const MomentAmbiguity& amb, int n_k,
                         SamplingMode mode = SamplingMode::PerCoordinate);

/// Quasi-Monte-Carlo estimate of E[f_alpha(x, xi)]:
///   (1 / (N p(mu0))) sum_k f_alpha(x, xi^k) p(xi^k),
/// accumulated with a fixed pairwise-tree reduction so the result is
/// bitwise deterministic regardless of evaluation order elsewhere.
double erm_objective(const AffineSvip& inst, double alpha, const QmcSampleSet& samples,
                     const MomentAmbiguity& amb, const Eigen::VectorXd& x);

/// Gradient of erm_objective; each sampled gap contributes
///   F(x,xi) - (M(xi)' - I/alpha)(y_alpha(x,xi) - x).
Eigen::VectorXd erm_gradient(const AffineSvip& inst, double alpha,
                             const QmcSampleSet& samples, const MomentAmbiguity& amb,
                             const Eigen::VectorXd& x);

struct ErmResult {
  Eigen::VectorXd x;
  SolveReport report;  // kkt_residual holds the projected-gradient norm
};

/// Projected-gradient descent with backtracking on the sampled objective,
/// stopping when || x - proj_S(x - grad) || <= tol.
ErmResult solve_erm(const AffineSvip& inst, double alpha, const QmcSampleSet& samples,
                    const MomentAmbiguity& amb, const Eigen::VectorXd& start,
                    double tol = 1e-7, int max_iter = 1000);

}  // namespace drosvi
