#include "drosvi/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "drosvi/gap.hpp"
#include "drosvi/nsdp.hpp"
#include "drosvi/rng.hpp"

namespace drosvi {

namespace {

// Salted stream splits so the draw order of one stage can change without
// shifting every other stage.
constexpr std::uint64_t kGameSalt = 0x67616d65;
constexpr std::uint64_t kRealizationSalt = 0x7265616c;
constexpr std::uint64_t kPerturbSalt = 0x70657274;

Eigen::MatrixXd lower_triangular(Rng& rng, int n, double lo, double hi) {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) L(i, j) = rng.uniform(lo, hi);
  return L;
}

Eigen::MatrixXd dense(Rng& rng, int rows, int cols, double lo, double hi) {
  Eigen::MatrixXd A(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) A(i, j) = rng.uniform(lo, hi);
  return A;
}

Eigen::VectorXd vec(Rng& rng, int n, double lo, double hi) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

// Fixed-format floating point for deterministic CSV bytes.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

GameInstance generate_game(const GameConfig& cfg, std::uint64_t seed) {
  if (cfg.n1 < 1 || cfg.n2 < 1 || cfg.l1 < 1 || cfg.l2 < 1)
    throw std::invalid_argument("generate_game: dimensions must be positive");
  Rng rng(seed);
  GameInstance g;
  g.n1 = cfg.n1;
  g.n2 = cfg.n2;
  const int n = g.n();

  const Eigen::MatrixXd L1 = lower_triangular(rng, cfg.n1, -5.0, 5.0);
  g.M1 = L1 * L1.transpose() + Eigen::MatrixXd::Identity(cfg.n1, cfg.n1);
  const Eigen::MatrixXd L2 = lower_triangular(rng, cfg.n2, -5.0, 5.0);
  g.M2 = L2 * L2.transpose() + Eigen::MatrixXd::Identity(cfg.n2, cfg.n2);
  g.A1 = dense(rng, cfg.l1, cfg.n1, -2.0, 2.0);
  g.A2 = dense(rng, cfg.l2, cfg.n2, -2.0, 2.0);
  g.b1 = vec(rng, cfg.l1, 0.0, 10.0);
  g.b2 = vec(rng, cfg.l2, 0.0, 10.0);
  g.r_const = dense(rng, cfg.n1, cfg.n2, -5.0, 5.0);
  g.x_star0 = vec(rng, n, -2.0, 2.0);

  Eigen::MatrixXd M0(n, n);
  M0.topLeftCorner(cfg.n1, cfg.n1) = g.M1;
  M0.topRightCorner(cfg.n1, cfg.n2) = g.r_const;
  M0.bottomLeftCorner(cfg.n2, cfg.n1) = -g.r_const.transpose();
  M0.bottomRightCorner(cfg.n2, cfg.n2) = g.M2;
  g.q0 = -M0 * g.x_star0;

  // q(xi) = Q xi + q0: the two trailing xi coordinates shift the players'
  // costs uniformly.
  g.Q_map = Eigen::MatrixXd::Zero(n, g.m());
  g.Q_map.block(0, cfg.n1 * cfg.n2, cfg.n1, 1).setOnes();
  g.Q_map.block(cfg.n1, cfg.n1 * cfg.n2 + 1, cfg.n2, 1).setOnes();
  return g;
}

AffineSvip to_svip(const GameInstance& g) {
  const int n = g.n();
  const int m = g.m();

  Eigen::MatrixXd M0(n, n);
  M0.topLeftCorner(g.n1, g.n1) = g.M1;
  M0.topRightCorner(g.n1, g.n2) = g.r_const;
  M0.bottomLeftCorner(g.n2, g.n1) = -g.r_const.transpose();
  M0.bottomRightCorner(g.n2, g.n2) = g.M2;

  std::vector<Eigen::MatrixXd> m_xi(m, Eigen::MatrixXd::Zero(n, n));
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) {
      Eigen::MatrixXd& Mk = m_xi[i * g.n2 + j];
      Mk(i, g.n1 + j) = 1.0;
      Mk(g.n1 + j, i) = -1.0;
    }

  PolyhedralSet S;
  S.mode = FeasMode::Inequality;
  const int l1 = static_cast<int>(g.A1.rows());
  const int l2 = static_cast<int>(g.A2.rows());
  S.A = Eigen::MatrixXd::Zero(l1 + l2, n);
  S.A.topLeftCorner(l1, g.n1) = g.A1;
  S.A.bottomRightCorner(l2, g.n2) = g.A2;
  S.b.resize(l1 + l2);
  S.b << g.b1, g.b2;

  return AffineSvip(M0, m_xi, g.Q_map, g.q0, S);
}

MomentAmbiguity nominal_ambiguity(int m, double gamma1, double gamma2) {
  Eigen::MatrixXd sigma0 = Eigen::MatrixXd::Constant(m, m, 1.6);
  sigma0.diagonal().setConstant(2.0);
  return MomentAmbiguity(Eigen::VectorXd::Zero(m), sigma0, gamma1, gamma2);
}

MomentAmbiguity perturb_moments(const MomentAmbiguity& amb, std::uint64_t seed,
                                int max_retries, double scale) {
  const int m = amb.dim();
  Rng rng(seed);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Eigen::VectorXd mu = amb.mu0();
    for (int i = 0; i < m; ++i) mu[i] += scale * rng.uniform(-0.25, 0.25);
    Eigen::MatrixXd sigma = amb.sigma0();
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        const double u = scale * rng.uniform(-0.2, 0.2);
        sigma(i, j) += u;
        if (j != i) sigma(j, i) += u;
      }
    if (Eigen::LLT<Eigen::MatrixXd>(sigma).info() == Eigen::Success)
      return MomentAmbiguity(mu, sigma, amb.gamma1(), amb.gamma2());
  }
  throw std::runtime_error("perturb_moments: no positive definite perturbation found");
}

std::vector<Eigen::VectorXd> sample_realizations(const MomentAmbiguity& amb, int N,
                                                 std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("sample_realizations: N must be >= 1");
  const int m = amb.dim();
  Rng rng(seed);
  std::vector<Eigen::VectorXd> out;
  out.reserve(N);
  for (int j = 0; j < N; ++j) {
    Eigen::VectorXd g(m);
    for (int i = 0; i < m; ++i) g[i] = rng.gaussian();
    out.push_back(amb.mu0() + amb.factor() * g);
  }
  return out;
}

EvaluationSummary evaluate(const Eigen::VectorXd& x, const AffineSvip& inst,
                           double alpha, const std::vector<Eigen::VectorXd>& realizations) {
  if (realizations.empty()) throw std::invalid_argument("evaluate: no realizations");
  if (!inst.feasible().contains(x)) throw std::invalid_argument("evaluate: x not in S");
  EvaluationSummary s;
  s.count = static_cast<int>(realizations.size());
  s.gaps.reserve(s.count);
  for (const Eigen::VectorXd& xi : realizations)
    s.gaps.push_back(gap_value(inst, alpha, x, xi).value);

  std::vector<double> sorted = s.gaps;
  std::sort(sorted.begin(), sorted.end());
  const int N = s.count;
  s.min = sorted.front();
  s.max = sorted.back();
  s.median = (N % 2 == 1) ? sorted[N / 2]
                          : 0.5 * (sorted[N / 2 - 1] + sorted[N / 2]);
  double sum = 0.0;
  for (double g : s.gaps) sum += g;
  s.mean = sum / N;
  if (N > 1) {
    double ss = 0.0;
    for (double g : s.gaps) ss += (g - s.mean) * (g - s.mean);
    s.sd = std::sqrt(ss / (N - 1));
  }
  return s;
}

RcReport rc(const EvaluationSummary& drerm, const EvaluationSummary& erm) {
  const auto ratio = [](double d, double e) {
    if (e == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (d - e) / e;
  };
  RcReport r;
  r.rc_min = ratio(drerm.min, erm.min);
  r.rc_max = ratio(drerm.max, erm.max);
  r.rc_mean = ratio(drerm.mean, erm.mean);
  r.rc_median = ratio(drerm.median, erm.median);
  r.rc_sd = ratio(drerm.sd, erm.sd);
  return r;
}

namespace {

nlohmann::json manifest_json(const ExperimentConfig& cfg, const ExperimentResult& res,
                             const std::vector<std::string>& columns) {
  nlohmann::json j;
  j["mode"] = cfg.mode == ExperimentConfig::Mode::Compare ? "compare" : "sweep";
  j["seed"] = cfg.seed;
  j["instances"] = cfg.instances;
  j["nk"] = cfg.n_k;
  j["sampling"] = cfg.sampling == SamplingMode::PaperLiteral ? "paper-literal"
                                                             : "per-coordinate";
  j["realizations"] = cfg.realizations;
  j["gamma1"] = cfg.gamma1;
  j["gamma2"] = cfg.gamma2;
  j["tol"] = cfg.tol;
  j["game"] = {{"n1", cfg.game.n1}, {"n2", cfg.game.n2},
               {"l1", cfg.game.l1}, {"l2", cfg.game.l2}};
  j["csv"] = res.csv_path;
  j["columns"] = columns;
  j["rows"] = res.rows;
  j["failures"] = res.failures;
  return j;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult res;
  res.csv_path = cfg.out_prefix + ".csv";
  res.manifest_path = cfg.out_prefix + ".manifest.json";
  std::ofstream csv(res.csv_path);
  if (!csv) throw std::runtime_error("run_experiment: cannot open " + res.csv_path);

  ConicSettings settings;
  settings.tol = cfg.tol;
  std::vector<std::string> columns;

  if (cfg.mode == ExperimentConfig::Mode::Compare) {
    columns = {"instance", "rc_min", "rc_max", "rc_mean", "rc_median", "rc_sd",
               "v_drerm",  "v_erm",  "t_erm",  "t_drerm", "status_erm",
               "status_drerm"};
    for (size_t i = 0; i < columns.size(); ++i)
      csv << columns[i] << (i + 1 < columns.size() ? "," : "\n");

    for (int i = 0; i < cfg.instances; ++i) {
      const GameInstance game =
          generate_game(cfg.game, Rng::substream(cfg.seed, i, kGameSalt));
      const AffineSvip inst = to_svip(game);
      const double alpha = 1.0 / inst.beta0();
      const MomentAmbiguity amb = nominal_ambiguity(inst.m(), 0.0, 1.0);

      const ConicProgram prog = build(inst, alpha, amb, SupportSpec::full());
      const ConicResult drerm = solve_conic(prog, settings);

      const QmcSampleSet samples = qmc_samples(amb, cfg.n_k, cfg.sampling);
      const Eigen::VectorXd x0 =
          project(inst.feasible(), Eigen::VectorXd::Zero(inst.n())).point;
      const ErmResult erm = solve_erm(inst, alpha, samples, amb, x0, cfg.tol);

      const auto reals = sample_realizations(
          amb, cfg.realizations, Rng::substream(cfg.seed, i, kRealizationSalt));

      const bool ok = drerm.report.status == SolveStatus::Optimal &&
                      erm.report.status == SolveStatus::Optimal;
      RcReport r;
      const double nan = std::numeric_limits<double>::quiet_NaN();
      r.rc_min = r.rc_max = r.rc_mean = r.rc_median = r.rc_sd = nan;
      if (ok) {
        const EvaluationSummary sd = evaluate(drerm.point.x, inst, alpha, reals);
        const EvaluationSummary se = evaluate(erm.x, inst, alpha, reals);
        r = rc(sd, se);
      } else {
        ++res.failures;
      }
      csv << i << ',' << fmt(r.rc_min) << ',' << fmt(r.rc_max) << ','
          << fmt(r.rc_mean) << ',' << fmt(r.rc_median) << ',' << fmt(r.rc_sd)
          << ',' << fmt(drerm.report.objective) << ',' << fmt(erm.report.objective)
          << ',' << fmt(erm.report.wall_time) << ',' << fmt(drerm.report.wall_time)
          << ',' << to_string(erm.report.status) << ','
          << to_string(drerm.report.status) << '\n';
      ++res.rows;
    }
  } else {
    columns = {"gamma1", "gamma2", "objective", "gap_max",
               "gap_mean", "gap_sd", "t_solve",  "status"};
    for (size_t i = 0; i < columns.size(); ++i)
      csv << columns[i] << (i + 1 < columns.size() ? "," : "\n");

    const GameInstance game =
        generate_game(cfg.game, Rng::substream(cfg.seed, 0, kGameSalt));
    const AffineSvip inst = to_svip(game);
    const double alpha = 1.0 / inst.beta0();
    const MomentAmbiguity nominal = nominal_ambiguity(inst.m(), 0.0, 1.0);
    const MomentAmbiguity perturbed =
        perturb_moments(nominal, Rng::substream(cfg.seed, 0, kPerturbSalt));
    const auto reals = sample_realizations(
        perturbed, cfg.realizations, Rng::substream(cfg.seed, 0, kRealizationSalt));

    for (double g1 : cfg.gamma1)
      for (double g2 : cfg.gamma2) {
        const MomentAmbiguity amb(perturbed.mu0(), perturbed.sigma0(), g1, g2);
        const ConicProgram prog = build(inst, alpha, amb, SupportSpec::full());
        const ConicResult sol = solve_conic(prog, settings);
        const bool ok = sol.report.status == SolveStatus::Optimal;
        double gmax = std::numeric_limits<double>::quiet_NaN();
        double gmean = gmax, gsd = gmax;
        if (ok) {
          const EvaluationSummary s = evaluate(sol.point.x, inst, alpha, reals);
          gmax = s.max;
          gmean = s.mean;
          gsd = s.sd;
        } else {
          ++res.failures;
        }
        csv << fmt(g1) << ',' << fmt(g2) << ',' << fmt(sol.report.objective)
            << ',' << fmt(gmax) << ',' << fmt(gmean) << ',' << fmt(gsd) << ','
            << fmt(sol.report.wall_time) << ',' << to_string(sol.report.status)
            << '\n';
        ++res.rows;
      }
  }
  csv.close();

  std::ofstream manifest(res.manifest_path);
  if (!manifest)
    throw std::runtime_error("run_experiment: cannot open " + res.manifest_path);
  manifest << manifest_json(cfg, res, columns).dump(2) << '\n';
  return res;
}

}  // namespace drosvi
