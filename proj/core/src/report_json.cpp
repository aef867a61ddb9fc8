#include "ddestab/report_json.hpp"

#include <cmath>

#include "ddestab/model_config.hpp"

namespace ddestab {

namespace {

template <class T>
nlohmann::json optional_value(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

// JSON has no infinity; unbounded interval ends are written as null.
nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

const char* relation_symbol(Relation rel) {
    switch (rel) {
        case Relation::Less: return "<";
        case Relation::LessEqual: return "<=";
        case Relation::Greater: return ">";
        case Relation::GreaterEqual: return ">=";
    }
    return "?";
}

nlohmann::json to_json(const CriterionReport& r) {
    nlohmann::json margins = nlohmann::json::array();
    for (const auto& m : r.margins)
        margins.push_back({{"name", m.name},
                           {"left", m.left},
                           {"relation", relation_symbol(m.relation)},
                           {"right", m.right},
                           {"holds", m.holds}});
    return {{"criterion", r.criterion},
            {"satisfied", r.satisfied},
            {"which_case", optional_value(r.which_case)},
            {"holding_cases", r.holding_cases},
            {"margins", margins},
            {"notes", r.notes}};
}

nlohmann::json to_json(const GainInterval& interval) {
    return {{"case", interval.label},
            {"lo", interval.lo},
            {"lo_closed", interval.lo_closed},
            {"hi", finite_or_null(interval.hi)},
            {"hi_closed", interval.hi_closed}};
}

nlohmann::json to_json(const BoundsEstimate& b) {
    return {{"alpha", b.alpha}, {"beta", b.beta}, {"t_lo", b.t_lo}, {"t_hi", b.t_hi}, {"samples", b.samples}};
}

nlohmann::json to_json(const GainDesign& g) {
    return {{"delta", g.delta},
            {"lambda_threshold", g.lambda_threshold},
            {"lambda", g.lambda},
            {"margin", g.margin},
            {"alpha", g.bounds_used.alpha},
            {"beta", g.bounds_used.beta},
            {"bounds", to_json(g.bounds_used)},
            {"controller", to_json(g.controller)}};
}

nlohmann::json to_json(const ProportionalGain& p) {
    return {{"K", p.K}, {"chosen_case", p.chosen_case}, {"report", to_json(p.report)}};
}

nlohmann::json to_json(const ConvergenceReport& r) {
    return {{"settled", r.settled},
            {"settling_time", optional_value(r.settling_time)},
            {"max_deviation_tail", r.max_deviation_tail},
            {"decay_rate", optional_value(r.decay_rate)},
            {"fit_quality", r.fit_quality},
            {"diverged", r.diverged},
            {"truncation_time", optional_value(r.truncation_time)},
            {"extrapolation_used", r.extrapolation_used}};
}

}  // namespace ddestab
