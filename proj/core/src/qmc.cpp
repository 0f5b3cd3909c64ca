#include "drosvi/qmc.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "drosvi/gap.hpp"

namespace drosvi {

namespace {

constexpr int kMaxSobolDim = 32;
constexpr int kBits = 32;

// Joe-Kuo D6 initial direction numbers for dimensions 2..32 (dimension 1 is
// the degenerate van der Corput sequence) together with the degree and the
// encoded inner coefficients of the matching primitive polynomial over GF(2).
struct SobolDim {
  int degree;
  uint32_t poly;  // coefficients between the leading and trailing 1
  uint32_t init[7];
};

constexpr SobolDim kSobolDims[kMaxSobolDim - 1] = {
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
    {6, 19, {1, 1, 1, 15, 7, 5}},
    {6, 22, {1, 3, 1, 15, 13, 25}},
    {6, 25, {1, 1, 5, 5, 19, 61}},
    {7, 1, {1, 3, 7, 11, 23, 15, 103}},
    {7, 4, {1, 3, 7, 13, 13, 15, 69}},
    {7, 7, {1, 1, 3, 13, 7, 35, 63}},
    {7, 8, {1, 3, 5, 9, 1, 25, 53}},
    {7, 14, {1, 3, 1, 13, 9, 35, 107}},
    {7, 19, {1, 3, 1, 5, 27, 61, 31}},
    {7, 21, {1, 1, 5, 11, 19, 41, 61}},
    {7, 28, {1, 3, 5, 3, 3, 13, 69}},
    {7, 31, {1, 1, 7, 13, 1, 19, 1}},
    {7, 32, {1, 3, 7, 5, 13, 19, 59}},
    {7, 37, {1, 1, 3, 9, 25, 29, 41}},
    {7, 41, {1, 3, 5, 13, 23, 1, 55}},
    {7, 42, {1, 3, 7, 3, 13, 59, 17}},
};

// Full 32-bit direction integers for one dimension.
std::array<uint32_t, kBits> direction_integers(int dim_index) {
  std::array<uint32_t, kBits> v{};
  if (dim_index == 0) {
    for (int j = 0; j < kBits; ++j) v[j] = 1u << (kBits - 1 - j);
    return v;
  }
  const SobolDim& sd = kSobolDims[dim_index - 1];
  const int g = sd.degree;
  for (int j = 0; j < g; ++j) v[j] = sd.init[j] << (kBits - 1 - j);
  for (int l = g; l < kBits; ++l) {
    uint32_t n = v[l - g] >> g;
    for (int j = 1; j < g; ++j)
      if ((sd.poly >> (g - j - 1)) & 1u) n ^= v[l - j];
    n ^= v[l - g];
    v[l] = n;
  }
  return v;
}

// Pairwise-tree reduction of term(lo..hi) for bitwise-deterministic sums.
template <typename T>
T tree_sum(int lo, int hi, const std::function<T(int)>& term) {
  if (hi - lo == 1) return term(lo);
  const int mid = lo + (hi - lo) / 2;
  return tree_sum<T>(lo, mid, term) + tree_sum<T>(mid, hi, term);
}

}  // namespace

std::vector<Eigen::VectorXd> sobol(int count, int dim) {
  if (count < 0) throw std::invalid_argument("sobol: negative count");
  if (dim < 1 || dim > kMaxSobolDim)
    throw std::invalid_argument("sobol: dimension out of range [1, 32]");
  std::vector<std::array<uint32_t, kBits>> dirs(dim);
  for (int k = 0; k < dim; ++k) dirs[k] = direction_integers(k);

  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  std::vector<uint32_t> state(dim, 0u);
  constexpr double scale = 1.0 / 4294967296.0;  // 2^-32
  for (uint32_t i = 1; i <= static_cast<uint32_t>(count); ++i) {
    // Gray-code update: flip the direction of the lowest zero bit of i-1,
    // i.e. the number of trailing ones of i-1 == trailing zeros of i.
    int j = 0;
    for (uint32_t n = i; (n & 1u) == 0u; n >>= 1) ++j;
    Eigen::VectorXd p(dim);
    for (int k = 0; k < dim; ++k) {
      state[k] ^= dirs[k][j];
      p[k] = state[k] * scale;
    }
    out.push_back(std::move(p));
  }
  return out;
}

double gaussian_density(const MomentAmbiguity& amb, const Eigen::VectorXd& xi) {
  const int m = amb.dim();
  if (xi.size() != m) throw std::invalid_argument("gaussian_density: dimension mismatch");
  const Eigen::MatrixXd& L = amb.factor();
  const Eigen::VectorXd z =
      L.triangularView<Eigen::Lower>().solve(xi - amb.mu0());
  const double logdet_half = L.diagonal().array().log().sum();
  return std::exp(-0.5 * z.squaredNorm() - logdet_half -
                  0.5 * m * std::log(2.0 * std::numbers::pi));
}

QmcSampleSet qmc_samples(const MomentAmbiguity& amb, int n_k, SamplingMode mode) {
  if (n_k < 1) throw std::invalid_argument("qmc_samples: need at least one sample");
  const int m = amb.dim();
  QmcSampleSet set;
  set.mode = mode;
  set.points.reserve(n_k);
  if (mode == SamplingMode::PaperLiteral) {
    const double mu = amb.mu0()(0);
    const double lo = mu - 3.0 * std::sqrt(2.0);
    const double hi = mu + 3.0 * std::sqrt(2.0);
    for (const Eigen::VectorXd& z : sobol(n_k, 1))
      set.points.push_back((lo + hi * z[0]) * Eigen::VectorXd::Ones(m));
  } else {
    const Eigen::ArrayXd sd = amb.sigma0().diagonal().array().sqrt();
    const Eigen::ArrayXd lo = amb.mu0().array() - 3.0 * sd;
    for (const Eigen::VectorXd& z : sobol(n_k, m))
      set.points.push_back((lo + 6.0 * sd * z.array()).matrix());
  }
  set.weights.resize(n_k);
  for (int k = 0; k < n_k; ++k) set.weights[k] = gaussian_density(amb, set.points[k]);
  return set;
}

double erm_objective(const AffineSvip& inst, double alpha, const QmcSampleSet& samples,
                     const MomentAmbiguity& amb, const Eigen::VectorXd& x) {
  const int n_k = static_cast<int>(samples.points.size());
  if (n_k == 0) throw std::invalid_argument("erm_objective: empty sample set");
  const std::function<double(int)> term = [&](int k) {
    return gap_value(inst, alpha, x, samples.points[k]).value * samples.weights[k];
  };
  const double p_center = gaussian_density(amb, amb.mu0());
  return tree_sum<double>(0, n_k, term) / (n_k * p_center);
}

Eigen::VectorXd erm_gradient(const AffineSvip& inst, double alpha,
                             const QmcSampleSet& samples, const MomentAmbiguity& amb,
                             const Eigen::VectorXd& x) {
  const int n_k = static_cast<int>(samples.points.size());
  if (n_k == 0) throw std::invalid_argument("erm_gradient: empty sample set");
  const Eigen::MatrixXd scaled_id =
      (1.0 / alpha) * Eigen::MatrixXd::Identity(inst.n(), inst.n());
  const std::function<Eigen::VectorXd(int)> term = [&](int k) -> Eigen::VectorXd {
    const Eigen::VectorXd& xi = samples.points[k];
    const GapEval g = gap_value(inst, alpha, x, xi);
    const Eigen::VectorXd F = inst.F(x, xi);
    const Eigen::VectorXd grad =
        F - (inst.M(xi).transpose() - scaled_id) * (g.maximizer_y - x);
    return samples.weights[k] * grad;
  };
  const double p_center = gaussian_density(amb, amb.mu0());
  return tree_sum<Eigen::VectorXd>(0, n_k, term) / (n_k * p_center);
}

ErmResult solve_erm(const AffineSvip& inst, double alpha, const QmcSampleSet& samples,
                    const MomentAmbiguity& amb, const Eigen::VectorXd& start,
                    double tol, int max_iter) {
  const auto clock_start = std::chrono::steady_clock::now();
  ErmResult res;
  Eigen::VectorXd x = project(inst.feasible(), start).point;
  double fx = erm_objective(inst, alpha, samples, amb, x);
  res.report.status = SolveStatus::MaxIter;

  int it = 0;
  Eigen::VectorXd x_prev, g_prev;
  double eta0 = 1.0;
  for (; it < max_iter; ++it) {
    const Eigen::VectorXd g = erm_gradient(inst, alpha, samples, amb, x);
    const Eigen::VectorXd pg = x - project(inst.feasible(), x - g).point;
    res.report.kkt_residual = pg.norm();
    if (res.report.kkt_residual <= tol) {
      res.report.status = SolveStatus::Optimal;
      break;
    }
    // Barzilai-Borwein spectral step, safeguarded by the backtracking below;
    // a fixed unit step crawls on ill-conditioned instances.
    if (it > 0) {
      const Eigen::VectorXd s = x - x_prev;
      const double sy = s.dot(g - g_prev);
      eta0 = sy > 1e-16 ? std::min(s.squaredNorm() / sy, 1e8) : 1.0;
    }
    x_prev = x;
    g_prev = g;
    bool accepted = false;
    double eta = eta0;
    for (int bt = 0; bt < 60; ++bt, eta *= 0.5) {
      const Eigen::VectorXd trial = project(inst.feasible(), x - eta * g).point;
      const double ft = erm_objective(inst, alpha, samples, amb, trial);
      if (ft <= fx - (1e-4 / eta) * (trial - x).squaredNorm()) {
        x = trial;
        fx = ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.report.status = SolveStatus::NumericalFailure;
      break;
    }
  }
  res.x = x;
  res.report.objective = fx;
  res.report.iterations = it;
  res.report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start)
          .count();
  return res;
}

}  // namespace drosvi
