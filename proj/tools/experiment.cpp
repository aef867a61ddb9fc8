#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "ddestab/errors.hpp"

namespace ddestab::cli {

namespace {

void only_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view what) {
    if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("unknown key '" + key + "' in " + std::string(what));
}

ModelSpec model_spec_from_json(const json& j) {
    only_keys(j, {"builtin", "params", "inline"}, "model");
    ModelSpec spec;
    const bool has_builtin = j.contains("builtin");
    if (has_builtin == j.contains("inline")) throw ConfigError("model needs exactly one of 'builtin' and 'inline'");
    if (has_builtin) {
        if (!j["builtin"].is_string()) throw ConfigError("model.builtin must be a string");
        spec.builtin = j["builtin"].get<std::string>();
        if (auto it = j.find("params"); it != j.end()) {
            if (!it->is_object()) throw ConfigError("model.params must be a JSON object");
            for (const auto& [key, value] : it->items()) spec.params[key] = real_from_json(value, key);
        }
    } else {
        if (j.contains("params")) throw ConfigError("model.params only applies to builtin models");
        spec.inline_model = j["inline"];
    }
    return spec;
}

DesignDirective design_from_json(const json& j) {
    only_keys(j, {"delta", "optimize_delta", "margin", "lambda", "horizon", "samples"}, "controller.design");
    DesignDirective d;
    if (j.contains("delta") && j.contains("optimize_delta"))
        throw ConfigError("controller.design takes 'delta' or 'optimize_delta', not both");
    if (j.contains("delta")) d.policy = FixedDelta{real_from_json(j["delta"], "delta")};
    if (j.contains("optimize_delta")) d.policy = OptimizeDelta{real_from_json(j["optimize_delta"], "optimize_delta")};
    if (j.contains("margin") && j.contains("lambda"))
        throw ConfigError("controller.design takes 'margin' or 'lambda', not both");
    if (j.contains("margin")) d.margin = real_from_json(j["margin"], "margin");
    if (j.contains("lambda")) d.lambda = real_from_json(j["lambda"], "lambda");
    if (auto it = j.find("horizon"); it != j.end()) {
        if (!it->is_array() || it->size() != 2) throw ConfigError("controller.design.horizon must be [t_lo, t_hi]");
        d.t_lo = real_from_json((*it)[0], "horizon");
        d.t_hi = real_from_json((*it)[1], "horizon");
    }
    if (auto it = j.find("samples"); it != j.end()) {
        if (!it->is_number_integer()) throw ConfigError("controller.design.samples must be an integer");
        d.samples = it->get<int>();
    }
    return d;
}

json design_to_json(const DesignDirective& d) {
    json out;
    if (const auto* fixed = std::get_if<FixedDelta>(&d.policy))
        out["delta"] = fixed->delta;
    else
        out["optimize_delta"] = std::get<OptimizeDelta>(d.policy).epsilon;
    if (d.margin) out["margin"] = *d.margin;
    if (d.lambda) out["lambda"] = *d.lambda;
    out["horizon"] = {d.t_lo, d.t_hi};
    out["samples"] = d.samples;
    return out;
}

}  // namespace

double parse_number(const std::string& text) {
    if (text == "pi") return std::numbers::pi;
    if (text == "sqrt2") return std::numbers::sqrt2;
    if (text == "e") return std::numbers::e;
    const ScalarFn f = ScalarFn::parse(text);
    if (!f.is_constant()) throw ConfigError("'" + text + "' is not a constant");
    return f(0.0);
}

void parse_param(const std::string& text, ParamMap& params) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("parameter '" + text + "' is not KEY=VALUE");
    params[text.substr(0, eq)] = parse_number(text.substr(eq + 1));
}

BuiltinModel ModelSpec::resolve() const {
    if (inline_model) return model_from_json(*inline_model);
    return ddestab::builtin(builtin, params);
}

GainDesign DesignDirective::run(const SecondOrderDDE& sys) const {
    if (lambda) return synthesize_damping_controller_for_lambda(sys, policy, *lambda, t_lo, t_hi, samples);
    return synthesize_damping_controller(sys, policy, margin.value_or(kDefaultMargin), t_lo, t_hi, samples);
}

ExperimentConfig experiment_from_json(const json& j) {
    only_keys(j, {"model", "controller", "check", "simulation", "outputs"}, "experiment");
    ExperimentConfig c;
    if (auto it = j.find("model"); it != j.end()) c.model = model_spec_from_json(*it);
    if (auto it = j.find("controller"); it != j.end()) {
        if (it->is_object() && it->contains("design")) {
            only_keys(*it, {"design"}, "controller");
            c.controller = design_from_json((*it)["design"]);
        } else {
            c.controller = controller_from_json(*it);
        }
    }
    if (auto it = j.find("check"); it != j.end()) {
        if (!it->is_object()) throw ConfigError("check must be a JSON object");
        CheckSpec spec;
        for (const auto& [key, value] : it->items()) {
            if (key == "criterion") {
                if (!value.is_string()) throw ConfigError("check.criterion must be a string");
                spec.criterion = value.get<std::string>();
            } else {
                spec.scalars[key] = real_from_json(value, key);
            }
        }
        if (spec.criterion.empty()) throw ConfigError("check is missing 'criterion'");
        c.check = std::move(spec);
    }
    if (auto it = j.find("simulation"); it != j.end()) {
        only_keys(*it, {"t_end", "dt", "tol"}, "simulation");
        if (it->contains("t_end")) c.t_end = real_from_json((*it)["t_end"], "t_end");
        if (it->contains("dt")) c.dt = real_from_json((*it)["dt"], "dt");
        if (it->contains("tol")) c.tol = real_from_json((*it)["tol"], "tol");
    }
    if (auto it = j.find("outputs"); it != j.end()) {
        only_keys(*it, {"csv_path", "report_path", "plot_script"}, "outputs");
        auto text = [&](const char* key) {
            const json& v = (*it)[key];
            if (!v.is_string()) throw ConfigError(std::string("outputs.") + key + " must be a string");
            return v.get<std::string>();
        };
        if (it->contains("csv_path")) c.csv_path = text("csv_path");
        if (it->contains("report_path")) c.report_path = text("report_path");
        if (it->contains("plot_script")) {
            if (!(*it)["plot_script"].is_boolean()) throw ConfigError("outputs.plot_script must be a boolean");
            c.plot_script = (*it)["plot_script"].get<bool>();
        }
    }
    return c;
}

json to_json(const ExperimentConfig& c) {
    json out;
    if (c.model) {
        if (c.model->is_builtin()) {
            out["model"] = {{"builtin", c.model->builtin}, {"params", json::object()}};
            for (const auto& [key, value] : c.model->params) out["model"]["params"][key] = value;
        } else {
            out["model"] = {{"inline", *c.model->inline_model}};
        }
    }
    if (const auto* d = std::get_if<DesignDirective>(&c.controller))
        out["controller"] = {{"design", design_to_json(*d)}};
    else
        out["controller"] = ddestab::to_json(std::get<Controller>(c.controller));
    if (c.check) {
        json check{{"criterion", c.check->criterion}};
        for (const auto& [key, value] : c.check->scalars) check[key] = value;
        out["check"] = check;
    }
    out["simulation"] = {{"t_end", c.t_end}, {"dt", c.dt}, {"tol", c.tol}};
    out["outputs"] = {{"csv_path", c.csv_path}, {"report_path", c.report_path}, {"plot_script", c.plot_script}};
    return out;
}

json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open '" + path + "'");
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
    }
}

ExperimentConfig load_experiment(const std::string& path) { return experiment_from_json(load_json(path)); }

}  // namespace ddestab::cli
