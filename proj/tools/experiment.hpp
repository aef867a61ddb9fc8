#pragma once

// Experiment documents for the command-line tool: which model, which
// controller (given or designed), the simulation horizon and output files.
// Schema in docs/config-schema.md.

#include <optional>
#include <string>
#include <variant>

#include "ddestab/design.hpp"
#include "ddestab/integrator.hpp"
#include "ddestab/model_config.hpp"

namespace ddestab::cli {

/// Accepts a number, the aliases pi, sqrt2 and e, or a constant expression.
double parse_number(const std::string& text);

/// Parses KEY=VALUE into params; throws ConfigError.
void parse_param(const std::string& text, ParamMap& params);

struct ModelSpec {
    std::string builtin;              // empty for inline models
    ParamMap params;
    std::optional<json> inline_model;  // model_from_json document

    bool is_builtin() const { return !inline_model; }
    BuiltinModel resolve() const;
};

inline constexpr double kDefaultHorizon = 62.83185307179586;  // 20 pi
inline constexpr int kDefaultSamples = 20001;

struct DesignDirective {
    DeltaPolicy policy = FixedDelta{1.4142135623730951};
    std::optional<double> margin;
    std::optional<double> lambda;
    double t_lo = 0.0;
    double t_hi = kDefaultHorizon;
    int samples = kDefaultSamples;

    GainDesign run(const SecondOrderDDE& sys) const;
};

struct CheckSpec {
    std::string criterion;  // lemma1, lemma2, theorem3, theorem4
    ParamMap scalars;
};

struct ExperimentConfig {
    std::optional<ModelSpec> model;
    std::variant<Controller, DesignDirective> controller = Controller::none();
    std::optional<CheckSpec> check;
    double t_end = 60.0;
    double dt = kDefaultStep;
    double tol = 1e-3;
    std::string csv_path;
    std::string report_path;
    bool plot_script = false;
};

ExperimentConfig experiment_from_json(const json& j);
json to_json(const ExperimentConfig& config);
ExperimentConfig load_experiment(const std::string& path);
json load_json(const std::string& path);

}  // namespace ddestab::cli
