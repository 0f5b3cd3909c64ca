#include "drosvi/json_io.hpp"

#include <stdexcept>

namespace drosvi {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& A) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < A.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < A.cols(); ++j) row.push_back(A(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("matrix_from_json: expected array");
  const int rows = static_cast<int>(j.size());
  const int cols = rows > 0 ? static_cast<int>(j.at(0).size()) : 0;
  Eigen::MatrixXd A(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j.at(i).size()) != cols)
      throw std::invalid_argument("matrix_from_json: ragged rows");
    for (int k = 0; k < cols; ++k) A(i, k) = j.at(i).at(k).get<double>();
  }
  return A;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("vector_from_json: expected array");
  Eigen::VectorXd v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) v[i] = j.at(i).get<double>();
  return v;
}

nlohmann::json to_json(const AffineSvip& inst) {
  const int n = inst.n();
  const int m = inst.m();
  nlohmann::json j;
  j["n"] = n;
  j["m"] = m;
  j["mode"] = inst.feasible().mode == FeasMode::Inequality ? "inequality"
                                                           : "equality-nonneg";
  j["A"] = matrix_to_json(inst.feasible().A);
  j["b"] = vector_to_json(inst.feasible().b);

  nlohmann::json m_lin = nlohmann::json::array();
  nlohmann::json m_const = nlohmann::json::array();
  for (int i = 0; i < n; ++i) {
    nlohmann::json lin_row = nlohmann::json::array();
    nlohmann::json const_row = nlohmann::json::array();
    for (int c = 0; c < n; ++c) {
      nlohmann::json coef = nlohmann::json::array();
      for (int k = 0; k < m; ++k) coef.push_back(inst.m_xi()[k](i, c));
      lin_row.push_back(std::move(coef));
      const_row.push_back(inst.m0()(i, c));
    }
    m_lin.push_back(std::move(lin_row));
    m_const.push_back(std::move(const_row));
  }
  j["m_lin"] = std::move(m_lin);
  j["m_const"] = std::move(m_const);

  nlohmann::json q_lin = nlohmann::json::array();
  for (int i = 0; i < n; ++i)
    q_lin.push_back(vector_to_json(inst.q_lin().row(i).transpose()));
  j["q_lin"] = std::move(q_lin);
  j["q_const"] = vector_to_json(inst.q0());
  return j;
}

AffineSvip svip_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  const int m = j.at("m").get<int>();
  PolyhedralSet S;
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "inequality")
    S.mode = FeasMode::Inequality;
  else if (mode == "equality-nonneg")
    S.mode = FeasMode::EqualityNonneg;
  else
    throw std::invalid_argument("svip_from_json: unknown mode " + mode);
  S.A = matrix_from_json(j.at("A"));
  S.b = vector_from_json(j.at("b"));

  const auto& m_lin = j.at("m_lin");
  Eigen::MatrixXd M0 = matrix_from_json(j.at("m_const"));
  std::vector<Eigen::MatrixXd> m_xi(m, Eigen::MatrixXd::Zero(n, n));
  if (static_cast<int>(m_lin.size()) != n)
    throw std::invalid_argument("svip_from_json: m_lin must have n rows");
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c) {
      const Eigen::VectorXd coef = vector_from_json(m_lin.at(i).at(c));
      if (coef.size() != m)
        throw std::invalid_argument("svip_from_json: m_lin entry length != m");
      for (int k = 0; k < m; ++k) m_xi[k](i, c) = coef[k];
    }

  const auto& q_lin_json = j.at("q_lin");
  Eigen::MatrixXd q_lin(n, m);
  for (int i = 0; i < n; ++i)
    q_lin.row(i) = vector_from_json(q_lin_json.at(i)).transpose();
  Eigen::VectorXd q0 = vector_from_json(j.at("q_const"));
  return AffineSvip(M0, m_xi, q_lin, q0, S);
}

nlohmann::json to_json(const MomentAmbiguity& amb) {
  nlohmann::json j;
  j["mu0"] = vector_to_json(amb.mu0());
  j["sigma0"] = matrix_to_json(amb.sigma0());
  j["gamma1"] = amb.gamma1();
  j["gamma2"] = amb.gamma2();
  return j;
}

MomentAmbiguity ambiguity_from_json(const nlohmann::json& j) {
  return MomentAmbiguity(vector_from_json(j.at("mu0")),
                         matrix_from_json(j.at("sigma0")),
                         j.at("gamma1").get<double>(), j.at("gamma2").get<double>());
}

}  // namespace drosvi
