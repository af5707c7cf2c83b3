#pragma once

#include <json.hpp>
#include <string>

#include "tdre/asymptotics.hpp"
#include "tdre/estimator.hpp"
#include "tdre/inference.hpp"
#include "tdre/mle.hpp"

namespace tdre {

nlohmann::json to_json(const ParamVector& p);
nlohmann::json to_json(const EstimateReport& r);
nlohmann::json to_json(const AsymptoticTable& t);
nlohmann::json to_json(const TestReport& t);
nlohmann::json to_json(const MleResult& m);

ParamVector param_vector_from_json(const nlohmann::json& j);
ParamVector load_params(const std::string& path);
void save_json(const nlohmann::json& j, const std::string& path);

nlohmann::json error_json(const Error& e);

}  // namespace tdre
