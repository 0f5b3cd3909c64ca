#include "drosvi/nsdp.hpp"

#include <sstream>
#include <stdexcept>

namespace drosvi {

Eigen::MatrixXd SupportQuadratic::augmented() const {
  const auto m = b_tilde.size();
  Eigen::MatrixXd out(m + 1, m + 1);
  out(0, 0) = c_tilde;
  out.block(0, 1, 1, m) = b_tilde.transpose();
  out.block(1, 0, m, 1) = b_tilde;
  out.block(1, 1, m, m) = A_tilde;
  return out;
}

bool SupportSpec::contains(const Eigen::VectorXd& xi, double tol) const {
  if (full_space) return true;
  for (const auto& q : quads)
    if (q.eval(xi) > tol) return false;
  return true;
}

SupportSpec SupportSpec::full() { return SupportSpec{}; }

SupportSpec SupportSpec::box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  if (lo.size() != hi.size()) throw std::invalid_argument("box: dimension mismatch");
  const auto m = lo.size();
  SupportSpec out;
  out.full_space = false;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(lo[i] < hi[i])) throw std::invalid_argument("box: requires lo < hi componentwise");
    SupportQuadratic q;
    q.A_tilde = Eigen::MatrixXd::Zero(m, m);
    q.A_tilde(i, i) = 1.0;
    q.b_tilde = Eigen::VectorXd::Zero(m);
    q.b_tilde[i] = -0.5 * (lo[i] + hi[i]);
    q.c_tilde = lo[i] * hi[i];
    out.quads.push_back(std::move(q));
  }
  return out;
}

SupportSpec SupportSpec::ellipsoids(const std::vector<Eigen::VectorXd>& centers,
                                    const std::vector<Eigen::MatrixXd>& shapes) {
  if (centers.size() != shapes.size())
    throw std::invalid_argument("ellipsoids: centers/shapes size mismatch");
  SupportSpec out;
  out.full_space = false;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    Eigen::LLT<Eigen::MatrixXd> llt(shapes[i]);
    if (llt.info() != Eigen::Success)
      throw std::invalid_argument("ellipsoids: shape matrix must be positive definite");
    SupportQuadratic q;
    q.A_tilde = llt.solve(Eigen::MatrixXd::Identity(centers[i].size(), centers[i].size()));
    q.b_tilde = -q.A_tilde * centers[i];
    q.c_tilde = centers[i].dot(q.A_tilde * centers[i]) - 1.0;
    out.quads.push_back(std::move(q));
  }
  return out;
}

Eigen::MatrixXd assemble_D(const AffineSvip& inst, double alpha, const DecisionBlock& w) {
  if (alpha <= 0.0) throw std::invalid_argument("assemble_D: alpha must be positive");
  const int n = inst.n();
  const int m = inst.m();
  const PolyhedralSet& S = inst.feasible();
  if (w.x.size() != n || w.y.size() != m || w.Y.rows() != m || w.Y.cols() != m ||
      w.lambda.size() != S.num_rows())
    throw std::invalid_argument("assemble_D: dimension mismatch");
  const bool has_mu = S.mode == FeasMode::EqualityNonneg;
  if (has_mu && w.mu.size() != n)
    throw std::invalid_argument("assemble_D: mu required in EqualityNonneg mode");

  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m + 1, m + 1);
  D(0, 0) = w.y0;
  D.block(0, 1, 1, m) = 0.5 * w.y.transpose();
  D.block(1, 0, m, 1) = 0.5 * w.y;
  D.block(1, 1, m, m) = w.Y;

  double g00 = (S.b - S.A * w.x).dot(w.lambda);
  if (has_mu) g00 += w.mu.dot(w.x);
  D(0, 0) -= g00;

  const AffineCoeffs cf = inst.coeffs(w.x);
  Eigen::VectorXd p0 = cf.c0 + S.A.transpose() * w.lambda;
  if (has_mu) p0 -= w.mu;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd h(m + 1);
    h[0] = p0[i];
    h.tail(m) = cf.C.col(i);
    D -= 0.5 * alpha * h * h.transpose();
  }
  return D;
}

Eigen::VectorXd VariableLayout::pack(const DecisionBlock& w) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(total);
  v.segment(off_x, n) = w.x;
  v.segment(off_lambda, l) = w.lambda;
  if (has_mu) v.segment(off_mu, n) = w.mu;
  v[off_y0] = w.y0;
  v.segment(off_y, m) = w.y;
  for (int j = 0; j < m; ++j)
    for (int i = j; i < m; ++i) v[off_Y + vech_index(i, j)] = w.Y(i, j);
  if (has_z0) v[off_z0] = w.z0;
  if (p > 0) v.segment(off_s, p) = w.s;
  return v;
}

DecisionBlock VariableLayout::unpack(const Eigen::VectorXd& v) const {
  DecisionBlock w;
  w.x = v.segment(off_x, n);
  w.lambda = v.segment(off_lambda, l);
  if (has_mu) w.mu = v.segment(off_mu, n);
  w.y0 = v[off_y0];
  w.y = v.segment(off_y, m);
  w.Y.resize(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = j; i < m; ++i) w.Y(i, j) = w.Y(j, i) = v[off_Y + vech_index(i, j)];
  w.z0 = has_z0 ? v[off_z0] : 0.0;
  if (p > 0) w.s = v.segment(off_s, p);
  return w;
}

Eigen::MatrixXd ConicProgram::lin_block(const Eigen::VectorXd& v) const {
  Eigen::MatrixXd L = d_aff0_;
  for (int k = 0; k < layout_.total; ++k)
    if (v[k] != 0.0) L += v[k] * d_aff_[k];
  for (const auto& [i, j, coef] : bilin00_) L(0, 0) += coef * v[i] * v[j];
  return L;
}

Eigen::MatrixXd ConicProgram::p_matrix(const Eigen::VectorXd& v) const {
  Eigen::MatrixXd P = p0_;
  for (int k = 0; k < layout_.total; ++k)
    if (v[k] != 0.0 && p_aff_[k].size() > 0) P += v[k] * p_aff_[k];
  return P;
}

Eigen::MatrixXd ConicProgram::d_block(const Eigen::VectorXd& v) const {
  const Eigen::MatrixXd P = p_matrix(v);
  return lin_block(v) - 0.5 * alpha_ * P * P.transpose();
}

Eigen::MatrixXd ConicProgram::lifted_block(const Eigen::VectorXd& v) const {
  const int r = layout_.m + 1;
  const int n = layout_.n;
  Eigen::MatrixXd K(r + n, r + n);
  K.topLeftCorner(r, r) = lin_block(v);
  K.topRightCorner(r, n) = p_matrix(v);
  K.bottomLeftCorner(n, r) = K.topRightCorner(r, n).transpose();
  K.bottomRightCorner(n, n) = (2.0 / alpha_) * Eigen::MatrixXd::Identity(n, n);
  return K;
}

Eigen::MatrixXd ConicProgram::d_block_derivative(int k, const Eigen::VectorXd& v) const {
  Eigen::MatrixXd G = d_aff_[k];
  for (const auto& [i, j, coef] : bilin00_) {
    if (i == k) G(0, 0) += coef * v[j];
    if (j == k) G(0, 0) += coef * v[i];
  }
  if (p_aff_[k].size() > 0) {
    const Eigen::MatrixXd P = p_matrix(v);
    const Eigen::MatrixXd cross = p_aff_[k] * P.transpose();
    G -= 0.5 * alpha_ * (cross + cross.transpose());
  }
  return G;
}

Eigen::MatrixXd ConicProgram::d_block_second(int k, int l) const {
  const int r = layout_.m + 1;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(r, r);
  for (const auto& [i, j, coef] : bilin00_) {
    if ((i == k && j == l) || (i == l && j == k)) G(0, 0) += coef;
    if (i == j && i == k && k == l) G(0, 0) += coef;  // squared-variable term
  }
  if (p_aff_[k].size() > 0 && p_aff_[l].size() > 0) {
    const Eigen::MatrixXd cross = p_aff_[k] * p_aff_[l].transpose();
    G -= 0.5 * alpha_ * (cross + cross.transpose());
  }
  return G;
}

Eigen::MatrixXd ConicProgram::y_block(const Eigen::VectorXd& v) const {
  const int m = layout_.m;
  Eigen::MatrixXd Y(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = j; i < m; ++i)
      Y(i, j) = Y(j, i) = v[layout_.off_Y + layout_.vech_index(i, j)];
  return Y;
}

double ConicProgram::soc_t(const Eigen::VectorXd& v) const { return v[layout_.off_z0]; }

Eigen::VectorXd ConicProgram::soc_u(const Eigen::VectorXd& v) const { return soc_A_ * v; }

namespace {

void append_matrix(std::ostringstream& os, const Eigen::MatrixXd& M) {
  os << "[";
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    if (i) os << ",";
    os << "[";
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) os << ",";
      os << M(i, j);
    }
    os << "]";
  }
  os << "]";
}

}  // namespace

std::string ConicProgram::to_json() const {
  std::ostringstream os;
  os << "{\"num_vars\":" << layout_.total << ",\"alpha\":" << alpha_
     << ",\"d_block_size\":" << layout_.m + 1
     << ",\"lifted_block_size\":" << layout_.m + 1 + layout_.n
     << ",\"y_block_size\":" << layout_.m << ",\"has_soc\":" << (layout_.has_z0 ? "true" : "false")
     << ",\"num_lin_ineq\":" << lin_G_.rows() << ",\"num_lin_eq\":" << lin_E_.rows()
     << ",\"num_nonneg\":" << nonneg_.size() << ",\"objective\":";
  append_matrix(os, c_.transpose());
  os << ",\"d_aff0\":";
  append_matrix(os, d_aff0_);
  os << ",\"p0\":";
  append_matrix(os, p0_);
  os << "}";
  return os.str();
}

ConicProgram build(const AffineSvip& inst, double alpha, const MomentAmbiguity& amb,
                   const SupportSpec& support) {
  if (alpha <= 0.0) throw std::invalid_argument("build: alpha must be positive");
  const int n = inst.n();
  const int m = inst.m();
  if (amb.dim() != m) throw std::invalid_argument("build: ambiguity dimension mismatch");
  const PolyhedralSet& S = inst.feasible();
  const int l = S.num_rows();
  const bool has_mu = S.mode == FeasMode::EqualityNonneg;
  const bool has_z0 = amb.gamma1() > 0.0;
  const int p = support.count();

  ConicProgram prog;
  prog.alpha_ = alpha;
  VariableLayout& lay = prog.layout_;
  lay.n = n;
  lay.l = l;
  lay.m = m;
  lay.p = p;
  lay.has_mu = has_mu;
  lay.has_z0 = has_z0;
  int off = 0;
  lay.off_x = off; off += n;
  lay.off_lambda = off; off += l;
  lay.off_mu = off; if (has_mu) off += n;
  lay.off_y0 = off; off += 1;
  lay.off_y = off; off += m;
  lay.off_Y = off; off += lay.vech_size();
  lay.off_z0 = off; if (has_z0) off += 1;
  lay.off_s = off; off += p;
  lay.total = off;

  const int r = m + 1;
  const int d = lay.total;

  // Objective: z0 + y0 + mu0'y + <gamma2 Sigma0 + mu0 mu0', Y>.
  prog.c_ = Eigen::VectorXd::Zero(d);
  prog.c_[lay.off_y0] = 1.0;
  prog.c_.segment(lay.off_y, m) = amb.mu0();
  const Eigen::MatrixXd W = amb.gamma2() * amb.sigma0() + amb.mu0() * amb.mu0().transpose();
  for (int j = 0; j < m; ++j)
    for (int i = j; i < m; ++i)
      prog.c_[lay.off_Y + lay.vech_index(i, j)] = (i == j) ? W(i, j) : 2.0 * W(i, j);
  if (has_z0) prog.c_[lay.off_z0] = 1.0;

  // D-block, affine part.
  prog.d_aff0_ = Eigen::MatrixXd::Zero(r, r);
  prog.d_aff_.assign(d, Eigen::MatrixXd::Zero(r, r));
  prog.d_aff_[lay.off_y0](0, 0) = 1.0;
  for (int k = 0; k < m; ++k) {
    prog.d_aff_[lay.off_y + k](0, k + 1) = 0.5;
    prog.d_aff_[lay.off_y + k](k + 1, 0) = 0.5;
  }
  for (int j = 0; j < m; ++j)
    for (int i = j; i < m; ++i) {
      auto& Fk = prog.d_aff_[lay.off_Y + lay.vech_index(i, j)];
      Fk(i + 1, j + 1) = 1.0;
      Fk(j + 1, i + 1) = 1.0;  // overwrites the same entry when i == j
    }
  // -G(x, lambda, mu) on the (0,0) entry: affine -b'lambda plus the
  // bilinear terms x'A'lambda and -mu'x.
  for (int j = 0; j < l; ++j) prog.d_aff_[lay.off_lambda + j](0, 0) = -S.b[j];
  for (int j = 0; j < l; ++j)
    for (int i = 0; i < n; ++i)
      if (S.A(j, i) != 0.0)
        prog.bilin00_.emplace_back(lay.off_x + i, lay.off_lambda + j, S.A(j, i));
  if (has_mu)
    for (int i = 0; i < n; ++i)
      prog.bilin00_.emplace_back(lay.off_x + i, lay.off_mu + i, -1.0);
  // Support terms s_i * [[c~, b~'], [b~, A~]].
  for (int i = 0; i < p; ++i) prog.d_aff_[lay.off_s + i] = support.quads[i].augmented();

  // P(v): column i = [p^i_0; c^i(x)], affine in (x, lambda, mu).
  prog.p0_ = Eigen::MatrixXd::Zero(r, n);
  prog.p0_.row(0) = inst.q0().transpose();
  prog.p0_.bottomRows(m) = inst.q_lin().transpose();
  prog.p_aff_.assign(d, Eigen::MatrixXd());
  for (int j = 0; j < n; ++j) {
    Eigen::MatrixXd Pk = Eigen::MatrixXd::Zero(r, n);
    Pk.row(0) = inst.m0().col(j).transpose();
    for (int k = 0; k < m; ++k) Pk.row(k + 1) = inst.m_xi()[k].col(j).transpose();
    prog.p_aff_[lay.off_x + j] = std::move(Pk);
  }
  for (int j = 0; j < l; ++j) {
    Eigen::MatrixXd Pk = Eigen::MatrixXd::Zero(r, n);
    Pk.row(0) = S.A.row(j);
    prog.p_aff_[lay.off_lambda + j] = std::move(Pk);
  }
  if (has_mu)
    for (int i = 0; i < n; ++i) {
      Eigen::MatrixXd Pk = Eigen::MatrixXd::Zero(r, n);
      Pk(0, i) = -1.0;
      prog.p_aff_[lay.off_mu + i] = std::move(Pk);
    }

  // Second-order cone u(v) = sqrt(gamma1) L'(y + 2 Y mu0), t = z0.
  if (has_z0) {
    const double root_g1 = std::sqrt(amb.gamma1());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, d);  // y + 2 Y mu0 as a map of v
    for (int k = 0; k < m; ++k) J(k, lay.off_y + k) = 1.0;
    for (int j = 0; j < m; ++j)
      for (int i = j; i < m; ++i) {
        const int idx = lay.off_Y + lay.vech_index(i, j);
        J(i, idx) += 2.0 * amb.mu0()[j];
        if (i != j) J(j, idx) += 2.0 * amb.mu0()[i];
      }
    prog.soc_A_ = root_g1 * amb.factor().transpose() * J;
  } else {
    prog.soc_A_.resize(0, d);
  }

  // x in S and the nonnegative variables.
  if (S.mode == FeasMode::Inequality) {
    prog.lin_G_ = Eigen::MatrixXd::Zero(l, d);
    prog.lin_G_.block(0, lay.off_x, l, n) = S.A;
    prog.lin_h_ = S.b;
    prog.lin_E_.resize(0, d);
    prog.lin_d_.resize(0);
    for (int j = 0; j < l; ++j) prog.nonneg_.push_back(lay.off_lambda + j);
  } else {
    prog.lin_E_ = Eigen::MatrixXd::Zero(l, d);
    prog.lin_E_.block(0, lay.off_x, l, n) = S.A;
    prog.lin_d_ = S.b;
    prog.lin_G_.resize(0, d);
    prog.lin_h_.resize(0);
    for (int i = 0; i < n; ++i) prog.nonneg_.push_back(lay.off_x + i);
    for (int i = 0; i < n; ++i) prog.nonneg_.push_back(lay.off_mu + i);
  }
  for (int i = 0; i < p; ++i) prog.nonneg_.push_back(lay.off_s + i);

  try {
    prog.convexity_certified_ = alpha >= 1.0 / (2.0 * inst.beta0()) - 1e-12;
  } catch (const std::exception&) {
    prog.convexity_certified_ = false;
  }
  return prog;
}

}  // namespace drosvi
