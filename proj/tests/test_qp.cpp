#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "drosvi/rng.hpp"
#include "drosvi/solver.hpp"
#include "helpers.hpp"

using namespace drosvi;

namespace {
const Eigen::MatrixXd kNoRows2 = Eigen::MatrixXd(0, 2);
const Eigen::VectorXd kNoVals = Eigen::VectorXd(0);
}  // namespace

TEST_CASE("unconstrained minimum") {
  const QpResult r = solve_qp(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(1, 1),
                              kNoRows2, kNoVals, kNoRows2, kNoVals);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.x.isApprox(Eigen::Vector2d(-1, -1), 1e-10));
}

TEST_CASE("projection instance") {
  Eigen::MatrixXd A(3, 2);
  A << 1, 1, -1, 0, 0, -1;
  Eigen::VectorXd b(3);
  b << 2, 0, 0;
  const QpResult r = solve_qp(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(1, -3),
                              A, b, kNoRows2, kNoVals);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.x.isApprox(Eigen::Vector2d(0, 2), 1e-9));
  CHECK(r.ineq_mult[0] == doctest::Approx(1.0));
  CHECK(r.ineq_mult[1] == doctest::Approx(2.0));
  CHECK(r.ineq_mult[2] == doctest::Approx(0.0));
}

TEST_CASE("equality only") {
  Eigen::MatrixXd E(1, 2);
  E << 1, 1;
  const QpResult r = solve_qp(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d::Zero(),
                              kNoRows2, kNoVals, E, Eigen::VectorXd::Constant(1, 2.0));
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.x.isApprox(Eigen::Vector2d(1, 1), 1e-10));
}

TEST_CASE("nonnegativity bounds") {
  const QpResult r = solve_qp(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(3, -1),
                              kNoRows2, kNoVals, kNoRows2, kNoVals, {0, 1});
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.x.isApprox(Eigen::Vector2d(0, 1), 1e-10));
  CHECK(r.bound_mult[0] == doctest::Approx(3.0));
  CHECK(r.bound_mult[1] == doctest::Approx(0.0));
}

TEST_CASE("infeasible detection") {
  Eigen::MatrixXd E(2, 2);
  E << 1, 1, 1, 1;
  Eigen::VectorXd d(2);
  d << 1, 2;  // inconsistent
  const QpResult r = solve_qp(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d::Zero(),
                              kNoRows2, kNoVals, E, d);
  CHECK(r.status == SolveStatus::Infeasible);
}

TEST_CASE("stationarity holds on random problems") {
  Rng rng(2024);
  for (int t = 0; t < 100; ++t) {
    const int n = 3, li = 2, le = 1;
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) L(i, j) = rng.uniform(-1, 1);
    const Eigen::MatrixXd Q = L * L.transpose() + Eigen::MatrixXd::Identity(n, n);
    const Eigen::VectorXd c = testutil::random_vec(rng, n, -2, 2);
    Eigen::MatrixXd A(li, n), E(le, n);
    for (int i = 0; i < li; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = rng.uniform(-1, 1);
    for (int j = 0; j < n; ++j) E(0, j) = rng.uniform(-1, 1);
    const Eigen::VectorXd x_feas = testutil::random_vec(rng, n, 0.1, 1.0);
    const Eigen::VectorXd b = A * x_feas + testutil::random_vec(rng, li, 0.0, 1.0);
    const Eigen::VectorXd d = E * x_feas;

    const QpResult r = solve_qp(Q, c, A, b, E, d, {0});
    REQUIRE(r.status == SolveStatus::Optimal);
    Eigen::VectorXd stat = Q * r.x + c + A.transpose() * r.ineq_mult +
                           E.transpose() * r.eq_mult - r.bound_mult;
    CHECK(stat.cwiseAbs().maxCoeff() < 1e-8);
    CHECK((A * r.x - b).maxCoeff() < 1e-9);
    CHECK((E * r.x - d).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(r.x[0] >= -1e-10);
    CHECK(r.ineq_mult.minCoeff() >= -1e-10);
  }
}
