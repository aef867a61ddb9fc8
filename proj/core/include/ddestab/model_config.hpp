#pragma once

// JSON documents describing systems, histories and controllers. The schema
// is documented in docs/config-schema.md; unknown keys are rejected with a
// ConfigError.

#include <json.hpp>

#include "ddestab/model.hpp"

namespace ddestab {

using json = nlohmann::json;

DelayFn delay_from_json(const json& j);
json to_json(const DelayFn& d);

SecondOrderDDE system_from_json(const json& j);
json to_json(const SecondOrderDDE& sys);

History history_from_json(const json& j);
json to_json(const History& h);

Controller controller_from_json(const json& j);
json to_json(const Controller& c);

/// A full model document: the system keys plus an optional "history".
/// Missing history defaults to x = x*, x' = 0 from t0 = 0.
BuiltinModel model_from_json(const json& j);

/// Reads a number or a constant expression string ("2*3").
double real_from_json(const json& j, std::string_view what);
/// Reads a number or an expression in t.
ScalarFn function_from_json(const json& j, std::string_view what);

}  // namespace ddestab
