#pragma once

#include "qdeform/deform.hpp"

// vendored single-header nlohmann/json lives at vendor/json.hpp
#include <json.hpp>

namespace qdeform {

inline constexpr const char* kSchemaTag = "qdeform/1";

nlohmann::json params_to_json(const QGroupParams& p);
QGroupParams params_from_json(const nlohmann::json& j);

nlohmann::json monomial_to_json(const PBWMonomial& m);
PBWMonomial monomial_from_json(const nlohmann::json& j, const QGroup& ctx);

nlohmann::json element_to_json(const AlgebraElement& x);
nlohmann::json tensor_to_json(const TensorElement& x);

nlohmann::json gram_to_json(const GramMatrix& g);

nlohmann::json twist_to_json(const TwistElement& f);
TwistElement twist_from_json(const nlohmann::json& j, std::shared_ptr<const QGroup> ctx);

nlohmann::json report_to_json(const CheckReport& r);

/// Basis, sparse product table and generator action table of an algebra.
nlohmann::json algebra_to_json(const ModuleAlgebra& a);

}  // namespace qdeform
