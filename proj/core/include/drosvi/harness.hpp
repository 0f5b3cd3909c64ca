#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "drosvi/ambiguity.hpp"
#include "drosvi/model.hpp"
#include "drosvi/qmc.hpp"
#include "drosvi/solver.hpp"

namespace drosvi {

struct GameConfig {
  int n1 = 2, n2 = 2;  // player dimensions
  int l1 = 2, l2 = 2;  // constraint rows per player
};

/// Random two-player game: M_nu = L_nu L_nu' + I with L_nu lower triangular
/// drawn from [-5,5), A_nu from [-2,2), b_nu from [0,10), R0 from [-5,5),
/// x*_0 from [-2,2); q0 = -[[M1,R0],[-R0',M2]] x*_0 so that x*_0 solves the
/// nominal (xi = 0) VI. Deterministic in the seed.
GameInstance generate_game(const GameConfig& cfg, std::uint64_t seed);

/// F(x,xi) = [[M1, R(xi)],[-R(xi)', M2]] x + Q xi + q0 with
/// R(xi)_ij = xi_{i*n2+j} + r0_ij, over S = {blockdiag(A1,A2) x <= (b1;b2)}.
AffineSvip to_svip(const GameInstance& game);

/// Nominal second moment used throughout the benchmark protocol: 2 on the
/// diagonal and 1.6 off it, mean zero.
MomentAmbiguity nominal_ambiguity(int m, double gamma1, double gamma2);

/// mu0 + u with u uniform [-0.25,0.25)^m, Sigma0 + U with U symmetric and
/// upper-triangle entries uniform [-0.2,0.2); resamples the whole
/// perturbation until Sigma stays positive definite. Throws after
/// max_retries failures. scale multiplies both perturbations (scale = 0 is
/// the identity path, kept for testing).
MomentAmbiguity perturb_moments(const MomentAmbiguity& amb, std::uint64_t seed,
                                int max_retries = 100, double scale = 1.0);

/// N draws from N(mu0, Sigma0) via xi = mu0 + L g, deterministic in seed.
std::vector<Eigen::VectorXd> sample_realizations(const MomentAmbiguity& amb, int N,
                                                 std::uint64_t seed);

struct EvaluationSummary {
  double min = 0.0, max = 0.0, mean = 0.0, median = 0.0, sd = 0.0;
  int count = 0;
  std::vector<double> gaps;  // realized f_alpha(x, xi_j), input order
};

/// Realized gap statistics of a feasible point over a fixed realization set;
/// sd uses the 1/(N-1) form.
EvaluationSummary evaluate(const Eigen::VectorXd& x, const AffineSvip& inst,
                           double alpha, const std::vector<Eigen::VectorXd>& realizations);

/// Rates of change (v_drerm - v_erm) / v_erm per summary statistic; a zero
/// denominator yields NaN rather than an error.
struct RcReport {
  double rc_min = 0.0, rc_max = 0.0, rc_mean = 0.0, rc_median = 0.0, rc_sd = 0.0;
};

RcReport rc(const EvaluationSummary& drerm, const EvaluationSummary& erm);

struct ExperimentConfig {
  enum class Mode { Compare, Sweep };
  Mode mode = Mode::Compare;
  std::uint64_t seed = 1;
  int instances = 10;            // compare: number of generated games
  int n_k = 80;                  // ERM sample count
  SamplingMode sampling = SamplingMode::PerCoordinate;
  int realizations = 5000;
  std::vector<double> gamma1 = {0.0};  // sweep grid axes (compare uses {0}/{1})
  std::vector<double> gamma2 = {1.0};
  double tol = 1e-7;
  GameConfig game;
  std::string out_prefix = "experiment";  // writes <prefix>.csv, <prefix>.manifest.json
};

struct ExperimentResult {
  std::string csv_path;
  std::string manifest_path;
  int rows = 0;
  int failures = 0;  // rows whose solve did not finish Optimal
};

/// Compare mode: per instance, solve the worst-case program (gamma1=0,
/// gamma2=1) and the sampled ERM baseline, evaluate both on shared
/// realizations and emit RC rows. Sweep mode: one game with perturbed
/// moments, the program solved across the gamma grid against fixed
/// realizations. Output bytes are deterministic in (seed, config) except
/// for the timing columns; per-row failures are flagged, not fatal.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace drosvi
