#pragma once

#include <json.hpp>

#include "drosvi/ambiguity.hpp"
#include "drosvi/model.hpp"

namespace drosvi {

/// Instance schema:
///   { n, m, mode: "inequality" | "equality-nonneg", A: [[..]], b: [..],
///     m_lin: [n][n][m], m_const: [n][n], q_lin: [n][m], q_const: [n] }
/// where M(xi)_{ij} = m_const[i][j] + <m_lin[i][j], xi> and
/// q(xi)_i = q_const[i] + <q_lin[i], xi>.
nlohmann::json to_json(const AffineSvip& inst);
AffineSvip svip_from_json(const nlohmann::json& j);

/// { mu0: [..], sigma0: [[..]], gamma1, gamma2 }
nlohmann::json to_json(const MomentAmbiguity& amb);
MomentAmbiguity ambiguity_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const Eigen::MatrixXd& A);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const nlohmann::json& j);

}  // namespace drosvi
