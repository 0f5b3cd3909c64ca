#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "drosvi/ambiguity.hpp"
#include "drosvi/rng.hpp"
#include "helpers.hpp"

using namespace drosvi;

namespace {

MomentAmbiguity offdiag_amb(int m, double g1, double g2) {
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(m, m, 1.6);
  sigma.diagonal().setConstant(2.0);
  return MomentAmbiguity(Eigen::VectorXd::Zero(m), sigma, g1, g2);
}

}  // namespace

TEST_CASE("dual objective hand values") {
  const MomentAmbiguity a(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2), 0.0, 1.0);
  CHECK(a.dual_objective(1.0, Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2), 0.0) ==
        doctest::Approx(3.0));

  const MomentAmbiguity b(Eigen::Vector2d(1.0, 0.0), Eigen::MatrixXd::Identity(2, 2), 0.0, 2.0);
  CHECK(b.dual_objective(0.0, Eigen::VectorXd::Ones(2), Eigen::MatrixXd::Zero(2, 2), 0.0) ==
        doctest::Approx(1.0));

  CHECK(a.dual_objective(0.0, Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Zero(2, 2), 0.0) ==
        doctest::Approx(0.0));
}

TEST_CASE("soc margin hand values") {
  const MomentAmbiguity zero_radius(Eigen::VectorXd::Zero(2),
                                    Eigen::MatrixXd::Identity(2, 2), 0.0, 1.0);
  CHECK(zero_radius.soc_margin(Eigen::Vector2d(9.0, -4.0),
                               Eigen::MatrixXd::Identity(2, 2), 7.5) == doctest::Approx(7.5));

  const MomentAmbiguity unit(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2), 1.0, 1.0);
  CHECK(unit.soc_margin(Eigen::Vector2d(3.0, 4.0), Eigen::MatrixXd::Zero(2, 2), 6.0) ==
        doctest::Approx(1.0));
  CHECK(unit.soc_margin(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Zero(2, 2), 0.0) ==
        doctest::Approx(0.0));
}

TEST_CASE("factor invariance of the soc margin") {
  Rng rng(9);
  const MomentAmbiguity amb = offdiag_amb(4, 1.3, 1.7);
  // Symmetric square root instead of the Cholesky factor.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(amb.sigma0());
  const Eigen::MatrixXd sqrt_sym = es.operatorSqrt();
  for (int t = 0; t < 50; ++t) {
    const Eigen::VectorXd y = testutil::random_vec(rng, 4, -2.0, 2.0);
    Eigen::MatrixXd Y(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) Y(i, j) = rng.uniform(-1.0, 1.0);
    Y = ((Y + Y.transpose()) / 2.0).eval();
    const double z0 = rng.uniform(-1.0, 5.0);
    const double via_sqrt =
        z0 - std::sqrt(amb.gamma1()) *
                 (sqrt_sym * (y + 2.0 * Y * amb.mu0())).norm();
    CHECK(amb.soc_margin(y, Y, z0) == doctest::Approx(via_sqrt).epsilon(1e-12));
  }
}

TEST_CASE("dual objective is linear in the block") {
  Rng rng(11);
  const MomentAmbiguity amb(testutil::random_vec(rng, 3, -1.0, 1.0),
                            2.0 * Eigen::MatrixXd::Identity(3, 3), 0.5, 1.5);
  for (int t = 0; t < 50; ++t) {
    const double y0a = rng.uniform(-2, 2), y0b = rng.uniform(-2, 2);
    const Eigen::VectorXd ya = testutil::random_vec(rng, 3, -2, 2);
    const Eigen::VectorXd yb = testutil::random_vec(rng, 3, -2, 2);
    Eigen::MatrixXd Ya = Eigen::MatrixXd::Random(3, 3), Yb = Eigen::MatrixXd::Random(3, 3);
    Ya = ((Ya + Ya.transpose()) / 2).eval();
    Yb = ((Yb + Yb.transpose()) / 2).eval();
    const double z0a = rng.uniform(-2, 2), z0b = rng.uniform(-2, 2);
    const double c = rng.uniform(-3, 3);
    const double lhs = amb.dual_objective(y0a + c * y0b, ya + c * yb, Ya + c * Yb, z0a + c * z0b);
    const double rhs = amb.dual_objective(y0a, ya, Ya, z0a) + c * amb.dual_objective(y0b, yb, Yb, z0b);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("monotonicity hooks in gamma") {
  Rng rng(13);
  for (int t = 0; t < 20; ++t) {
    const Eigen::VectorXd y = testutil::random_vec(rng, 3, -2, 2);
    Eigen::MatrixXd W = Eigen::MatrixXd::Random(3, 3);
    const Eigen::MatrixXd Y = (W * W.transpose()).eval();  // PSD
    const double y0 = rng.uniform(-2, 2), z0 = rng.uniform(-2, 2);
    const double lo = offdiag_amb(3, 0.2, 1.0).dual_objective(y0, y, Y, z0);
    const double hi = offdiag_amb(3, 0.2, 2.0).dual_objective(y0, y, Y, z0);
    CHECK(hi >= lo - 1e-12);
    const double wide = offdiag_amb(3, 2.0, 1.0).soc_margin(y, Y, z0);
    const double narrow = offdiag_amb(3, 0.5, 1.0).soc_margin(y, Y, z0);
    CHECK(wide <= narrow + 1e-12);
  }
}

TEST_CASE("constructor validation") {
  const Eigen::VectorXd mu = Eigen::VectorXd::Zero(2);
  const Eigen::MatrixXd I2 = Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS(MomentAmbiguity(mu, I2, -0.1, 1.0));      // gamma1 < 0
  CHECK_THROWS(MomentAmbiguity(mu, I2, 0.0, 0.9));       // gamma2 < 1
  CHECK_THROWS(MomentAmbiguity(mu, -I2, 0.0, 1.0));      // not PD
  Eigen::MatrixXd asym = I2;
  asym(0, 1) = 0.3;
  CHECK_THROWS(MomentAmbiguity(mu, asym, 0.0, 1.0));     // not symmetric
}
