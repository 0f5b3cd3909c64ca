#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "drosvi/gap.hpp"
#include "drosvi/harness.hpp"
#include "drosvi/model.hpp"
#include "drosvi/rng.hpp"

namespace testutil {

// Feasible point of S obtained by projecting a random draw from [-r, r)^n.
inline Eigen::VectorXd random_feasible(const drosvi::PolyhedralSet& S, drosvi::Rng& rng,
                                       double r = 3.0) {
  Eigen::VectorXd z(S.dim());
  for (int i = 0; i < z.size(); ++i) z[i] = rng.uniform(-r, r);
  return drosvi::project(S, z).point;
}

inline Eigen::VectorXd random_vec(drosvi::Rng& rng, int n, double lo, double hi) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

// Small EqualityNonneg instance with a known interior point.
inline drosvi::AffineSvip random_equality_instance(drosvi::Rng& rng, int n, int l, int m) {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) L(i, j) = rng.uniform(-1.0, 1.0);
  const Eigen::MatrixXd M0 = L * L.transpose() + Eigen::MatrixXd::Identity(n, n);
  std::vector<Eigen::MatrixXd> m_xi(m);
  for (int k = 0; k < m; ++k) {
    Eigen::MatrixXd W(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) W(i, j) = rng.uniform(-1.0, 1.0);
    m_xi[k] = W - W.transpose();  // keep the symmetric part xi-free
  }
  Eigen::MatrixXd q_lin(n, m);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k) q_lin(i, k) = rng.uniform(-1.0, 1.0);
  const Eigen::VectorXd q0 = random_vec(rng, n, -1.0, 1.0);

  drosvi::PolyhedralSet S;
  S.mode = drosvi::FeasMode::EqualityNonneg;
  S.A.resize(l, n);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < n; ++j) S.A(i, j) = rng.uniform(-1.0, 1.0);
  S.b = S.A * random_vec(rng, n, 0.5, 1.5);  // interior point exists
  return drosvi::AffineSvip(M0, m_xi, q_lin, q0, S);
}

inline drosvi::AffineSvip random_game_instance(std::uint64_t seed) {
  return drosvi::to_svip(drosvi::generate_game(drosvi::GameConfig{}, seed));
}

// 1-D instance F(x, xi) = a x + c xi + d over S = {x >= 0} (EqualityNonneg
// with no equality rows).
inline drosvi::AffineSvip scalar_instance(double a, double c, double d) {
  drosvi::PolyhedralSet S;
  S.mode = drosvi::FeasMode::EqualityNonneg;
  S.A = Eigen::MatrixXd(0, 1);
  S.b = Eigen::VectorXd(0);
  const Eigen::MatrixXd M0 = Eigen::MatrixXd::Constant(1, 1, a);
  const std::vector<Eigen::MatrixXd> m_xi{Eigen::MatrixXd::Zero(1, 1)};
  const Eigen::MatrixXd q_lin = Eigen::MatrixXd::Constant(1, 1, c);
  const Eigen::VectorXd q0 = Eigen::VectorXd::Constant(1, d);
  return drosvi::AffineSvip(M0, m_xi, q_lin, q0, S);
}

// Spearman rank correlation; ties get mean ranks (adequate for smooth data).
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const int n = static_cast<int>(a.size());
  auto ranks = [n](const std::vector<double>& v) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return v[i] < v[j]; });
    std::vector<double> r(n);
    for (int pos = 0; pos < n; ++pos) r[idx[pos]] = pos + 1;
    return r;
  };
  const std::vector<double> ra = ranks(a), rb = ranks(b);
  double ma = 0, mb = 0;
  for (int i = 0; i < n; ++i) ma += ra[i], mb += rb[i];
  ma /= n, mb /= n;
  double num = 0, da = 0, db = 0;
  for (int i = 0; i < n; ++i) {
    num += (ra[i] - ma) * (rb[i] - mb);
    da += (ra[i] - ma) * (ra[i] - ma);
    db += (rb[i] - mb) * (rb[i] - mb);
  }
  return num / std::sqrt(da * db);
}

}  // namespace testutil
