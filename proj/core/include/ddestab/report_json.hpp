#pragma once

// JSON serialization of criterion verdicts, gain designs and convergence
// reports, using the field names the command-line tool documents.

#include <json.hpp>

#include "ddestab/criteria.hpp"
#include "ddestab/design.hpp"
#include "ddestab/metrics.hpp"

namespace ddestab {

nlohmann::json to_json(const CriterionReport& r);
nlohmann::json to_json(const GainInterval& interval);
nlohmann::json to_json(const BoundsEstimate& b);
nlohmann::json to_json(const GainDesign& g);
nlohmann::json to_json(const ProportionalGain& p);
nlohmann::json to_json(const ConvergenceReport& r);

const char* relation_symbol(Relation rel);

}  // namespace ddestab
