#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "drosvi/harness.hpp"
#include "drosvi/model.hpp"
#include "drosvi/rng.hpp"
#include "helpers.hpp"

using namespace drosvi;

TEST_CASE("eval_F hand values") {
  // n=m=1, M == 1, q(xi) = xi
  const AffineSvip a = testutil::scalar_instance(1.0, 1.0, 0.0);
  CHECK(a.F(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1))[0] == doctest::Approx(0.0));

  // n=m=1, M == 1, q(xi) = -xi; x=2, xi=0.5 -> 1.5
  const AffineSvip b = testutil::scalar_instance(1.0, -1.0, 0.0);
  CHECK(b.F(Eigen::VectorXd::Constant(1, 2.0), Eigen::VectorXd::Constant(1, 0.5))[0] ==
        doctest::Approx(1.5));

  // n=2, m=1, M(xi) = [[1, xi], [-xi, 1]], q == 0; x=(1,1), xi=2 -> (3,-1)
  Eigen::MatrixXd M0 = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd Mk = Eigen::MatrixXd::Zero(2, 2);
  Mk(0, 1) = 1.0;
  Mk(1, 0) = -1.0;
  PolyhedralSet S;
  S.mode = FeasMode::Inequality;
  S.A = Eigen::MatrixXd::Zero(1, 2);
  S.b = Eigen::VectorXd::Ones(1);
  const AffineSvip c(M0, {Mk}, Eigen::MatrixXd::Zero(2, 1), Eigen::VectorXd::Zero(2), S);
  const Eigen::VectorXd F = c.F(Eigen::VectorXd::Ones(2), Eigen::VectorXd::Constant(1, 2.0));
  CHECK(F[0] == doctest::Approx(3.0));
  CHECK(F[1] == doctest::Approx(-1.0));
}

TEST_CASE("coeffs reconstruct F") {
  Rng rng(7);
  const AffineSvip inst = testutil::random_game_instance(11);

  // x = 0 -> (q^i, q^i_0)
  const AffineCoeffs at_zero = inst.coeffs(Eigen::VectorXd::Zero(inst.n()));
  CHECK((at_zero.C - inst.q_lin().transpose()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((at_zero.c0 - inst.q0()).cwiseAbs().maxCoeff() < 1e-14);

  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd x = testutil::random_vec(rng, inst.n(), -2.0, 2.0);
    const Eigen::VectorXd xi = testutil::random_vec(rng, inst.m(), -2.0, 2.0);
    const AffineCoeffs co = inst.coeffs(x);
    const Eigen::VectorXd rebuilt = co.C.transpose() * xi + co.c0;
    CHECK((rebuilt - inst.F(x, xi)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("constant-M coefficients ignore x") {
  const AffineSvip inst = testutil::scalar_instance(3.0, 2.0, 1.0);
  const AffineCoeffs a = inst.coeffs(Eigen::VectorXd::Zero(1));
  const AffineCoeffs b = inst.coeffs(Eigen::VectorXd::Constant(1, 5.0));
  CHECK(a.C(0, 0) == doctest::Approx(b.C(0, 0)));
}

TEST_CASE("beta0") {
  CHECK(testutil::scalar_instance(3.0, 0.0, 0.0).beta0() == doctest::Approx(3.0));

  // Identity game blocks -> 1.0
  GameInstance g;
  g.n1 = g.n2 = 2;
  g.M1 = g.M2 = Eigen::MatrixXd::Identity(2, 2);
  g.A1 = g.A2 = Eigen::MatrixXd::Ones(1, 2);
  g.b1 = g.b2 = Eigen::VectorXd::Ones(1);
  g.r_const = Eigen::MatrixXd::Zero(2, 2);
  g.x_star0 = Eigen::VectorXd::Zero(4);
  g.q0 = Eigen::VectorXd::Zero(4);
  g.Q_map = Eigen::MatrixXd::Zero(4, 6);
  CHECK(to_svip(g).beta0() == doctest::Approx(1.0));

  // Generated games: beta0 >= 1 since M_nu = L L' + I.
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const AffineSvip inst = testutil::random_game_instance(seed);
    CHECK(inst.beta0() >= 1.0 - 1e-12);
  }

  // xi-dependent symmetric part without override -> refused.
  Eigen::MatrixXd sym = Eigen::MatrixXd::Identity(1, 1);
  PolyhedralSet S;
  S.mode = FeasMode::Inequality;
  S.A = Eigen::MatrixXd::Ones(1, 1);
  S.b = Eigen::VectorXd::Ones(1);
  AffineSvip bad(Eigen::MatrixXd::Identity(1, 1), {sym},
                 Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Zero(1), S);
  CHECK_THROWS_AS((void)bad.beta0(), std::runtime_error);
  bad.set_beta0_override(0.5);
  CHECK(bad.beta0() == doctest::Approx(0.5));
}

TEST_CASE("game quadratic form is xi-independent") {
  Rng rng(3);
  const AffineSvip inst = testutil::random_game_instance(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd v = testutil::random_vec(rng, inst.n(), -1.0, 1.0);
    const Eigen::VectorXd xi = testutil::random_vec(rng, inst.m(), -5.0, 5.0);
    const double with_xi = v.dot(inst.M(xi) * v);
    const double at_zero = v.dot(inst.M(Eigen::VectorXd::Zero(inst.m())) * v);
    CHECK(std::abs(with_xi - at_zero) < 1e-10);
  }
}

TEST_CASE("polyhedral membership") {
  PolyhedralSet S;
  S.mode = FeasMode::Inequality;
  S.A = Eigen::MatrixXd::Ones(1, 2);
  S.b = Eigen::VectorXd::Constant(1, 2.0);
  CHECK(S.contains(Eigen::Vector2d(1.0, 1.0)));
  CHECK(!S.contains(Eigen::Vector2d(2.0, 1.0)));

  PolyhedralSet E;
  E.mode = FeasMode::EqualityNonneg;
  E.A = Eigen::MatrixXd::Ones(1, 2);
  E.b = Eigen::VectorXd::Constant(1, 2.0);
  CHECK(E.contains(Eigen::Vector2d(0.5, 1.5)));
  CHECK(!E.contains(Eigen::Vector2d(-0.5, 2.5)));  // negative coordinate
  CHECK(!E.contains(Eigen::Vector2d(1.0, 0.5)));   // equality violated
}
