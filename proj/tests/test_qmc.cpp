#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "drosvi/qmc.hpp"
#include "drosvi/rng.hpp"
#include "helpers.hpp"

using namespace drosvi;

namespace {

MomentAmbiguity unit_amb(int m) {
  return MomentAmbiguity(Eigen::VectorXd::Zero(m), Eigen::MatrixXd::Identity(m, m), 0.0, 1.0);
}

// Star discrepancy estimated on anchored boxes [0,u) with corners on a grid.
double star_discrepancy_2d(const std::vector<Eigen::VectorXd>& pts, int grid) {
  const double n = static_cast<double>(pts.size());
  double worst = 0.0;
  for (int a = 1; a <= grid; ++a)
    for (int b = 1; b <= grid; ++b) {
      const double u1 = static_cast<double>(a) / grid;
      const double u2 = static_cast<double>(b) / grid;
      int count = 0;
      for (const auto& p : pts) count += (p[0] < u1 && p[1] < u2) ? 1 : 0;
      worst = std::max(worst, std::abs(count / n - u1 * u2));
    }
  return worst;
}

}  // namespace

TEST_CASE("sobol basics") {
  CHECK(sobol(0, 3).empty());
  const auto one_d = sobol(2, 1);
  REQUIRE(one_d.size() == 2);
  CHECK(one_d[0][0] == doctest::Approx(0.5));
  CHECK(one_d[1][0] == doctest::Approx(0.75));
  CHECK_THROWS(sobol(1, 0));
  CHECK_THROWS(sobol(1, 33));

  // All coordinates stay in [0, 1) and no point is the origin.
  for (const auto& p : sobol(512, 8)) {
    CHECK(p.minCoeff() >= 0.0);
    CHECK(p.maxCoeff() < 1.0);
    CHECK(p.cwiseAbs().maxCoeff() > 0.0);
  }
}

TEST_CASE("sobol beats pseudo-random discrepancy") {
  const double qmc = star_discrepancy_2d(sobol(256, 2), 64);
  Rng rng(123);
  std::vector<Eigen::VectorXd> random_pts;
  for (int i = 0; i < 256; ++i) random_pts.push_back(testutil::random_vec(rng, 2, 0.0, 1.0));
  CHECK(qmc < star_discrepancy_2d(random_pts, 64));
}

TEST_CASE("sample transforms") {
  // PaperLiteral with mu0 = 0: every point is a multiple of the all-ones vector.
  const MomentAmbiguity amb = unit_amb(3);
  const QmcSampleSet lit = qmc_samples(amb, 16, SamplingMode::PaperLiteral);
  for (const auto& p : lit.points) {
    CHECK(p[0] == doctest::Approx(p[1]));
    CHECK(p[0] == doctest::Approx(p[2]));
  }
  // PerCoordinate with Sigma0 = I: the box is [-3, 3]^m.
  const QmcSampleSet per = qmc_samples(amb, 64, SamplingMode::PerCoordinate);
  for (const auto& p : per.points) {
    CHECK(p.minCoeff() >= -3.0);
    CHECK(p.maxCoeff() < 3.0);
  }
  // Gaussian density at the mean, m=1: 1/sqrt(2 pi).
  const MomentAmbiguity amb1 = unit_amb(1);
  CHECK(gaussian_density(amb1, Eigen::VectorXd::Zero(1)) ==
        doctest::Approx(0.3989422804014327));
}

TEST_CASE("erm objective hand value") {
  // Samples {-1, +1}, F(x, xi) = x - xi, alpha = 1, x = 0:
  // value = (0 + 0.5 e^{-1/2}) / 2.
  const AffineSvip inst = testutil::scalar_instance(1.0, -1.0, 0.0);
  QmcSampleSet set;
  set.points = {Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 1.0)};
  const MomentAmbiguity amb = unit_amb(1);
  set.weights.resize(2);
  set.weights << gaussian_density(amb, set.points[0]), gaussian_density(amb, set.points[1]);
  const double value = erm_objective(inst, 1.0, set, amb, Eigen::VectorXd::Zero(1));
  CHECK(value == doctest::Approx(0.25 * std::exp(-0.5)).epsilon(1e-12));
  CHECK(value == doctest::Approx(0.15163266492815836).epsilon(1e-10));

  // Gap 0 at every sample -> objective 0.
  const AffineSvip plain = testutil::scalar_instance(1.0, 0.0, 0.0);
  CHECK(erm_objective(plain, 1.0, set, amb, Eigen::VectorXd::Zero(1)) ==
        doctest::Approx(0.0));
}

TEST_CASE("erm gradient matches finite differences") {
  const AffineSvip inst = testutil::random_game_instance(23);
  const double alpha = 1.0 / inst.beta0();
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(inst.m(), inst.m(), 1.6);
  sigma.diagonal().setConstant(2.0);
  const MomentAmbiguity amb(Eigen::VectorXd::Zero(inst.m()), sigma, 0.0, 1.0);
  const QmcSampleSet set = qmc_samples(amb, 32);

  Rng rng(5);
  int checked = 0;
  for (int t = 0; t < 40 && checked < 20; ++t) {
    // Interior-ish points: step back from the projection of a random draw.
    const Eigen::VectorXd x =
        0.9 * testutil::random_feasible(inst.feasible(), rng, 1.0);
    if (!inst.feasible().contains(x, 1e-12)) continue;
    const Eigen::VectorXd g = erm_gradient(inst, alpha, set, amb, x);
    const double h = 1e-6;
    bool boundary = false;
    Eigen::VectorXd fd(inst.n());
    for (int i = 0; i < inst.n(); ++i) {
      Eigen::VectorXd xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      if (!inst.feasible().contains(xp, 1e-12) || !inst.feasible().contains(xm, 1e-12)) {
        boundary = true;
        break;
      }
      fd[i] = (erm_objective(inst, alpha, set, amb, xp) -
               erm_objective(inst, alpha, set, amb, xm)) / (2.0 * h);
    }
    if (boundary) continue;
    ++checked;
    CHECK((g - fd).norm() <= 1e-5 * (1.0 + fd.norm()));
  }
  CHECK(checked >= 10);
}

TEST_CASE("erm gradient single-sample closed form") {
  // n=1, F = x - xi, sample xi = 1, alpha = 1, x = 2: grad f = 1, weighted
  // by the density ratio p(1)/p(0) = e^{-1/2}.
  const AffineSvip inst = testutil::scalar_instance(1.0, -1.0, 0.0);
  const MomentAmbiguity amb = unit_amb(1);
  QmcSampleSet set;
  set.points = {Eigen::VectorXd::Ones(1)};
  set.weights = Eigen::VectorXd::Constant(1, gaussian_density(amb, set.points[0]));
  const Eigen::VectorXd g =
      erm_gradient(inst, 1.0, set, amb, Eigen::VectorXd::Constant(1, 2.0));
  CHECK(g[0] == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("solve_erm") {
  const MomentAmbiguity amb = unit_amb(1);
  // Single sample at the mean, F(x, xi) = x: minimum at 0.
  const AffineSvip plain = testutil::scalar_instance(1.0, 0.0, 0.0);
  QmcSampleSet at_mean;
  at_mean.points = {Eigen::VectorXd::Zero(1)};
  at_mean.weights = Eigen::VectorXd::Constant(1, gaussian_density(amb, at_mean.points[0]));
  const ErmResult r0 = solve_erm(plain, 1.0, at_mean, amb, Eigen::VectorXd::Ones(1));
  REQUIRE(r0.report.status == SolveStatus::Optimal);
  CHECK(std::abs(r0.x[0]) <= 1e-6);
  CHECK(std::abs(r0.report.objective) <= 1e-12);
  CHECK(r0.report.kkt_residual <= 1e-7);

  // Two-sample instance against a grid oracle over [0, 3].
  const AffineSvip inst = testutil::scalar_instance(1.0, -1.0, 0.0);
  QmcSampleSet set;
  set.points = {Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 1.0)};
  set.weights.resize(2);
  set.weights << gaussian_density(amb, set.points[0]), gaussian_density(amb, set.points[1]);
  double best_x = 0.0, best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 30000; ++i) {
    const double x = i * 1e-4;
    const double v = erm_objective(inst, 1.0, set, amb, Eigen::VectorXd::Constant(1, x));
    if (v < best_v) best_v = v, best_x = x;
  }
  const ErmResult r = solve_erm(inst, 1.0, set, amb, Eigen::VectorXd::Zero(1));
  REQUIRE(r.report.status == SolveStatus::Optimal);
  CHECK(std::abs(r.x[0] - best_x) <= 1e-3);
  CHECK(std::abs(r.report.objective - best_v) <= 1e-3);
}

TEST_CASE("objective and gradient are bitwise deterministic") {
  const AffineSvip inst = testutil::random_game_instance(29);
  const double alpha = 1.0 / inst.beta0();
  const MomentAmbiguity amb = unit_amb(inst.m());
  const QmcSampleSet set = qmc_samples(amb, 80);
  Rng rng(1);
  const Eigen::VectorXd x = testutil::random_feasible(inst.feasible(), rng);
  const double v1 = erm_objective(inst, alpha, set, amb, x);
  const double v2 = erm_objective(inst, alpha, set, amb, x);
  CHECK(std::memcmp(&v1, &v2, sizeof(double)) == 0);
  const Eigen::VectorXd g1 = erm_gradient(inst, alpha, set, amb, x);
  const Eigen::VectorXd g2 = erm_gradient(inst, alpha, set, amb, x);
  CHECK(std::memcmp(g1.data(), g2.data(), sizeof(double) * g1.size()) == 0);
}
