#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <future>
#include <optional>

#include "ddestab/criteria.hpp"
#include "ddestab/design.hpp"
#include "ddestab/errors.hpp"
#include "ddestab/integrator.hpp"
#include "ddestab/metrics.hpp"
#include "ddestab/report_json.hpp"
#include "experiment.hpp"
#include "output.hpp"

namespace ddestab::cli {

namespace {

namespace fs = std::filesystem;

CLI::Validator number_alias() {
    return CLI::Validator(
        [](std::string& s) {
            try {
                s = format_number(parse_number(s), 17);
                return std::string();
            } catch (const Error& e) {
                return std::string(e.what());
            }
        },
        "NUMBER");
}

CLI::Option* add_number(CLI::App* app, const std::string& name, std::optional<double>& target, const std::string& desc) {
    return app->add_option(name, target, desc)->transform(number_alias());
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

// Model selection shared by check, design and simulate.
struct ModelOptions {
    std::string builtin;
    std::vector<std::string> params;
    std::string model_file;

    void attach(CLI::App* app) {
        auto* m = app->add_option("--model", builtin, "Builtin model name (see `ddestab models`)");
        app->add_option("--param", params, "Builtin parameter override KEY=VALUE (repeatable)")->needs(m);
        app->add_option("--model-file", model_file, "Inline model JSON document")->excludes(m);
    }

    std::optional<ModelSpec> spec(const std::optional<ModelSpec>& from_config) const {
        if (!builtin.empty()) {
            ModelSpec s;
            s.builtin = builtin;
            for (const auto& p : params) parse_param(p, s.params);
            return s;
        }
        if (!model_file.empty()) {
            ModelSpec s;
            s.inline_model = load_json(model_file);
            return s;
        }
        return from_config;
    }
};

struct HorizonOptions {
    std::optional<double> t_lo;
    std::optional<double> t_hi;
    std::optional<int> samples;

    void attach(CLI::App* app) {
        add_number(app, "--t-lo", t_lo, "Start of the bounds horizon (default 0)");
        add_number(app, "--t-hi", t_hi, "End of the bounds horizon (default 20 pi)");
        app->add_option("--samples", samples, "Grid points for the sampled bounds (default 20001)");
    }

    void apply(DesignDirective& d) const {
        if (t_lo) d.t_lo = *t_lo;
        if (t_hi) d.t_hi = *t_hi;
        if (samples) d.samples = *samples;
    }
};

void bounds_note(std::ostream& err, const BoundsEstimate& b, bool builtin_model) {
    err << "note: alpha, beta are a sampled sup over [" << format_number(b.t_lo) << ", " << format_number(b.t_hi)
        << "] with " << b.samples
        << " samples; exact for constant or periodic coefficients, an estimate of the limsup otherwise\n";
    if (!builtin_model) err << "note: term envelopes are taken as declared in the model and not verified\n";
}

void print_report(std::ostream& out, const CriterionReport& r) {
    out << "criterion: " << r.criterion << '\n';
    out << "satisfied: " << yes_no(r.satisfied) << '\n';
    if (r.which_case) out << "case: " << *r.which_case << '\n';
    if (!r.holding_cases.empty()) {
        out << "holding cases:";
        for (const auto& c : r.holding_cases) out << ' ' << c;
        out << '\n';
    }
    out << "margins:\n";
    for (const auto& m : r.margins)
        out << "  " << m.name << ": " << format_number(m.left) << ' ' << relation_symbol(m.relation) << ' '
            << format_number(m.right) << "  [" << (m.holds ? "holds" : "fails") << "]\n";
    if (!r.notes.empty()) out << "note: " << r.notes << '\n';
}

void emit_json(std::ostream& out, const json& j, const std::string& report_path, bool to_stdout) {
    if (!report_path.empty()) write_text(report_path, j.dump(2) + "\n");
    if (to_stdout) out << j.dump(2) << '\n';
}

// check ----------------------------------------------------------------------

struct CheckOptions {
    std::optional<int> lemma;
    std::optional<int> theorem;
    std::map<std::string, std::optional<double>> scalars{{"a", {}},  {"b", {}},  {"C", {}},  {"K", {}}, {"alpha", {}},
                                                         {"beta", {}}, {"a0", {}}, {"A", {}}, {"b0", {}}, {"B", {}}};
    ModelOptions model;
    HorizonOptions horizon;
    std::string config;
    std::string report_path;
    bool json_out = false;
};

int cmd_check(const CheckOptions& o, std::ostream& out, std::ostream& err) {
    std::optional<ExperimentConfig> config;
    if (!o.config.empty()) config = load_experiment(o.config);

    std::string criterion;
    ParamMap s;
    if (config && config->check) {
        criterion = config->check->criterion;
        s = config->check->scalars;
    }
    if (o.lemma) criterion = "lemma" + std::to_string(*o.lemma);
    if (o.theorem) criterion = "theorem" + std::to_string(*o.theorem);
    if (criterion.empty()) throw ConfigError("check needs --lemma or --theorem (or a config with a check section)");
    for (const auto& [name, value] : o.scalars)
        if (value) s[name] = *value;

    const auto spec = o.model.spec(config ? config->model : std::nullopt);
    if (spec) {
        const BuiltinModel m = spec->resolve();
        DesignDirective d;
        o.horizon.apply(d);
        const BoundsEstimate b = envelope_bounds(m.system, d.t_lo, d.t_hi, d.samples);
        if (criterion == "lemma1") {
            s.try_emplace("alpha", b.alpha);
            s.try_emplace("beta", b.beta);
        } else if (criterion == "theorem3" || criterion == "theorem4") {
            if (s.try_emplace("C", b.beta).second) err << "note: C taken as the model's state-term bound beta\n";
        }
        bounds_note(err, b, spec->is_builtin());
    }

    auto need = [&](const char* name) {
        auto it = s.find(name);
        if (it == s.end()) throw ConfigError("check " + criterion + " needs " + name);
        return it->second;
    };
    CriterionReport r;
    if (criterion == "lemma1")
        r = lemma1_check(need("a"), need("b"), need("alpha"), need("beta"));
    else if (criterion == "lemma2")
        r = lemma2_check(need("a0"), need("A"), need("b0"), need("B"), need("C"));
    else if (criterion == "theorem3")
        r = theorem3_check(need("a"), need("b"), need("C"));
    else if (criterion == "theorem4")
        r = theorem4_check(need("a"), need("K"), need("C"));
    else
        throw ConfigError("unknown criterion '" + criterion + "' (lemma1, lemma2, theorem3, theorem4)");

    if (o.json_out)
        emit_json(out, to_json(r), o.report_path, true);
    else {
        print_report(out, r);
        emit_json(out, to_json(r), o.report_path, false);
    }
    return r.satisfied ? kExitOk : kExitNegative;
}

// design ---------------------------------------------------------------------

struct DesignOptions {
    ModelOptions model;
    HorizonOptions horizon;
    std::string config;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> delta;
    std::optional<double> optimize_delta;
    std::optional<double> margin;
    std::optional<double> lambda;
    std::string report_path;
    bool json_out = false;
};

void apply_design_flags(DesignDirective& d, const std::optional<double>& delta, const std::optional<double>& optimize,
                        const std::optional<double>& margin, const std::optional<double>& lambda) {
    if (delta) d.policy = FixedDelta{*delta};
    if (optimize) d.policy = OptimizeDelta{*optimize};
    if (margin) {
        d.margin = margin;
        d.lambda.reset();
    }
    if (lambda) {
        d.lambda = lambda;
        d.margin.reset();
    }
}

int cmd_design(const DesignOptions& o, std::ostream& out, std::ostream& err) {
    std::optional<ExperimentConfig> config;
    if (!o.config.empty()) config = load_experiment(o.config);
    DesignDirective d;
    if (config)
        if (const auto* from = std::get_if<DesignDirective>(&config->controller)) d = *from;
    o.horizon.apply(d);
    apply_design_flags(d, o.delta, o.optimize_delta, o.margin, o.lambda);

    GainDesign g;
    const auto spec = o.model.spec(config ? config->model : std::nullopt);
    if (o.alpha || o.beta) {
        if (spec) throw ConfigError("design takes either a model or --alpha/--beta, not both");
        if (!o.alpha || !o.beta) throw ConfigError("design needs both --alpha and --beta");
        const double delta = std::holds_alternative<FixedDelta>(d.policy)
                                 ? std::get<FixedDelta>(d.policy).delta
                                 : optimal_delta(*o.alpha, *o.beta, std::get<OptimizeDelta>(d.policy).epsilon).delta;
        g = d.lambda ? damping_gain_for_lambda(*o.alpha, *o.beta, delta, *d.lambda)
                     : damping_gain(*o.alpha, *o.beta, delta, d.margin.value_or(kDefaultMargin));
        g.bounds_used.alpha = *o.alpha;
        g.bounds_used.beta = *o.beta;
    } else {
        if (!spec) throw ConfigError("design needs --model, --model-file, --config or --alpha/--beta");
        const BuiltinModel m = spec->resolve();
        g = d.run(m.system);
        bounds_note(err, g.bounds_used, spec->is_builtin());
    }

    const json j = to_json(g);
    if (o.json_out) {
        emit_json(out, j, o.report_path, true);
    } else {
        const auto& c = std::get<Controller::Damping>(g.controller.variant);
        out << "alpha: " << format_number(g.bounds_used.alpha) << '\n';
        out << "beta: " << format_number(g.bounds_used.beta) << '\n';
        out << "delta: " << format_number(g.delta) << '\n';
        out << "mu(delta): " << format_number(g.lambda_threshold) << '\n';
        out << "lambda: " << format_number(g.lambda) << '\n';
        out << "margin: " << format_number(g.margin) << '\n';
        out << "controller: u = -" << format_number(c.delta * c.lambda) << " x' - " << format_number(c.lambda * c.lambda)
            << " (x - " << format_number(c.xstar) << ")\n";
        emit_json(out, j, o.report_path, false);
    }
    return kExitOk;
}

// simulate -------------------------------------------------------------------

struct SimulateOptions {
    ModelOptions model;
    HorizonOptions horizon;
    std::string config;
    std::string control;
    std::optional<double> delta;
    std::optional<double> optimize_delta;
    std::optional<double> lambda;
    std::optional<double> margin;
    std::optional<double> b;
    std::optional<double> lag;
    std::optional<double> K;
    std::optional<double> xstar;
    std::optional<double> t_end;
    std::optional<double> dt;
    std::optional<double> tol;
    std::string csv;
    std::string report_path;
    bool plot = false;
    bool expect_settle = false;
};

fs::path plot_path_for(const fs::path& csv) {
    fs::path p = csv;
    p.replace_extension(".gp");
    return p;
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
    ExperimentConfig c;
    if (!o.config.empty()) c = load_experiment(o.config);
    const auto spec = o.model.spec(c.model);
    if (!spec) throw ConfigError("simulate needs --model, --model-file or a config with a model");
    if (o.t_end) c.t_end = *o.t_end;
    if (o.dt) c.dt = *o.dt;
    if (o.tol) c.tol = *o.tol;
    if (!o.csv.empty()) c.csv_path = o.csv;
    if (!o.report_path.empty()) c.report_path = o.report_path;
    if (o.plot) c.plot_script = true;
    if (c.plot_script && c.csv_path.empty()) throw ConfigError("a plot script needs a CSV path (--csv)");

    const BuiltinModel m = spec->resolve();
    const double xstar = o.xstar.value_or(m.system.equilibrium);

    auto need = [](const std::optional<double>& v, const char* flag) {
        if (!v) throw ConfigError(std::string("this controller needs ") + flag);
        return *v;
    };
    if (o.control == "none")
        c.controller = Controller::none();
    else if (o.control == "damping")
        c.controller = Controller::damping(o.delta.value_or(std::numbers::sqrt2), need(o.lambda, "--lambda"), xstar);
    else if (o.control == "delayed")
        c.controller = Controller::delayed_proportional(need(o.b, "-b"),
                                                        DelayFn::constant_lag(o.lag.value_or(m.system.max_known_lag())));
    else if (o.control == "proportional")
        c.controller = Controller::proportional_state(need(o.K, "-K"), xstar);
    else if (o.control == "design")
        c.controller = DesignDirective{};
    if (auto* d = std::get_if<DesignDirective>(&c.controller)) {
        o.horizon.apply(*d);
        apply_design_flags(*d, o.delta, o.optimize_delta, o.margin, o.lambda);
    }

    json design_json;
    Controller ctrl;
    if (const auto* d = std::get_if<DesignDirective>(&c.controller)) {
        const GainDesign g = d->run(m.system);
        bounds_note(err, g.bounds_used, spec->is_builtin());
        design_json = to_json(g);
        ctrl = g.controller;
    } else {
        ctrl = std::get<Controller>(c.controller);
    }

    const Trajectory traj = integrate(m.system, ctrl, m.history, c.t_end, c.dt);
    ConvergenceOptions opts;
    opts.tol = c.tol;
    const ConvergenceReport report = assess_convergence(traj, xstar, opts);

    json j = to_json(report);
    j["xstar"] = xstar;
    j["t_end"] = c.t_end;
    j["dt"] = c.dt;
    j["final_x"] = traj.nodes.back().x;
    j["controller"] = to_json(ctrl);
    if (!design_json.is_null()) j["design"] = design_json;

    if (!c.csv_path.empty()) write_csv(c.csv_path, traj);
    if (c.plot_script) {
        const fs::path csv(c.csv_path);
        write_plot_script(plot_path_for(csv), "x(t), " + std::string(ctrl.name()) + " control",
                          {{csv.filename().string(), std::string(ctrl.name())}}, xstar);
    }
    if (report.extrapolation_used) err << "note: a lag shorter than dt forced extrapolated lookups\n";
    emit_json(out, j, c.report_path, true);
    if (!o.expect_settle) return kExitOk;
    return report.settled ? kExitOk : kExitNegative;
}

// demo -----------------------------------------------------------------------

struct DemoOptions {
    std::string figure;
    std::string out_dir = ".";
    std::optional<double> dt;
};

struct Scenario {
    std::string name;
    BuiltinModel model;
    Controller controller;
    double t_end;
    double xstar;
};

struct ScenarioResult {
    std::string name;
    std::string control;
    std::string csv;
    ConvergenceReport report;
    double xstar;
};

std::vector<Scenario> fig2_scenarios() {
    std::vector<Scenario> out;
    for (const char* x0 : {"6", "3", "0.1"}) {
        const BuiltinModel m = builtin("sunflower", {{"x0", parse_number(x0)}, {"v0", 1.0}});
        const double xs = m.system.equilibrium;
        out.push_back({std::string("fig2_x0_") + x0 + "_uncontrolled", m, Controller::none(), 200.0, xs});
        out.push_back({std::string("fig2_x0_") + x0 + "_controlled", m,
                       Controller::damping(std::numbers::sqrt2, 4.0, xs), 60.0, xs});
    }
    return out;
}

// The controlled run decays like exp(-0.0186 t) and first stays within 1e-3
// of 0 near t = 336, so it gets a longer horizon than the uncontrolled one.
std::vector<Scenario> fig3_scenarios() {
    const BuiltinModel m = builtin("saturating_feedback", {{"n", 8.0}, {"tau", 10.0}});
    return {
        {"fig3_uncontrolled", m, Controller::none(), 200.0, 0.0},
        {"fig3_controlled", m, Controller::delayed_proportional(1.0, DelayFn::constant_lag(10.0)), 400.0, 0.0},
    };
}

std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v, 6) : "-"; }

int cmd_demo(const DemoOptions& o, std::ostream& out) {
    const auto scenarios = o.figure == "fig2" ? fig2_scenarios() : fig3_scenarios();
    const double dt = o.dt.value_or(kDefaultStep);
    const fs::path dir(o.out_dir);
    fs::create_directories(dir);

    std::vector<std::future<ScenarioResult>> jobs;
    for (const auto& s : scenarios) {
        jobs.push_back(std::async(std::launch::async, [&s, dt, dir] {
            const Trajectory traj = integrate(s.model.system, s.controller, s.model.history, s.t_end, dt);
            const std::string csv = s.name + ".csv";
            write_csv(dir / csv, traj);
            return ScenarioResult{s.name, std::string(s.controller.name()), csv, assess_convergence(traj, s.xstar),
                                  s.xstar};
        }));
    }
    std::vector<ScenarioResult> results;
    for (auto& job : jobs) results.push_back(job.get());

    std::vector<PlotCurve> curves;
    for (const auto& r : results) curves.push_back({r.csv, r.name});
    const std::string title = o.figure == "fig2" ? "sunflower equation, damping control"
                                                 : "saturating feedback, delayed proportional control";
    write_plot_script(dir / (o.figure + ".gp"), title, curves, results.front().xstar);

    char line[256];
    std::snprintf(line, sizeof line, "%-26s %-20s %-8s %-10s %-14s %-12s %-12s %s\n", "curve", "control", "settled",
                  "x*", "settling_time", "max_dev_tail", "decay_rate", "diverged");
    out << line;
    for (const auto& r : results) {
        std::snprintf(line, sizeof line, "%-26s %-20s %-8s %-10s %-14s %-12s %-12s %s\n", r.name.c_str(),
                      r.control.c_str(), yes_no(r.report.settled).c_str(), format_number(r.xstar, 6).c_str(),
                      format_optional(r.report.settling_time).c_str(),
                      format_number(r.report.max_deviation_tail, 4).c_str(),
                      format_optional(r.report.decay_rate).c_str(), yes_no(r.report.diverged).c_str());
        out << line;
    }
    out << "wrote " << results.size() << " CSV files and " << o.figure << ".gp to " << dir.string() << '\n';
    return kExitOk;
}

int cmd_models(std::ostream& out) {
    for (const auto& name : builtin_names()) {
        out << name;
        for (const auto& [key, value] : builtin_defaults(name)) out << ' ' << key << '=' << format_number(value, 17);
        out << '\n';
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stability criteria, gain design and simulation for second-order delay equations", "ddestab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "ddestab 0.1.0");

    CheckOptions check;
    auto* c = app.add_subcommand("check", "Evaluate a stability criterion; exit 0 if satisfied, 2 if not");
    c->add_option("--lemma", check.lemma, "Lemma number (1 or 2)")->check(CLI::IsMember({1, 2}));
    c->add_option("--theorem", check.theorem, "Theorem number (3 or 4)")->check(CLI::IsMember({3, 4}));
    add_number(c, "-a", check.scalars["a"], "Damping coefficient a");
    add_number(c, "-b", check.scalars["b"], "Stiffness or feedback gain b");
    add_number(c, "-C", check.scalars["C"], "Bound C on the nonlinear state terms");
    add_number(c, "-K", check.scalars["K"], "Proportional gain K");
    add_number(c, "--alpha", check.scalars["alpha"], "Bound on the delayed damping coefficients");
    add_number(c, "--beta", check.scalars["beta"], "Bound on the delayed state coefficients");
    add_number(c, "--a0", check.scalars["a0"], "Lower bound a0 of the damping coefficient");
    add_number(c, "--A", check.scalars["A"], "Upper bound A of the damping coefficient");
    add_number(c, "--b0", check.scalars["b0"], "Lower bound b0 of the state coefficient");
    add_number(c, "--B", check.scalars["B"], "Upper bound B of the state coefficient");
    check.model.attach(c);
    check.horizon.attach(c);
    c->add_option("--config", check.config, "Experiment JSON with a check section");
    c->add_option("--report", check.report_path, "Write the JSON report to this file");
    c->add_flag("--json", check.json_out, "Print the JSON report instead of text");

    DesignOptions design;
    auto* d = app.add_subcommand("design", "Synthesize a damping controller u = -delta lambda x' - lambda^2 (x - x*)");
    design.model.attach(d);
    design.horizon.attach(d);
    d->add_option("--config", design.config, "Experiment JSON");
    add_number(d, "--alpha", design.alpha, "Delayed damping bound (instead of a model)");
    add_number(d, "--beta", design.beta, "Delayed state bound (instead of a model)");
    auto* fixed = add_number(d, "--delta", design.delta, "Fixed delta in (0, 2) (default sqrt2)");
    add_number(d, "--optimize-delta", design.optimize_delta, "Minimize the threshold over delta in [eps, 2 - eps]")
        ->excludes(fixed);
    auto* margin = add_number(d, "--margin", design.margin, "Relative margin: lambda = (1 + margin) mu (default 0.1)");
    add_number(d, "--lambda", design.lambda, "Explicit gain lambda")->excludes(margin);
    d->add_option("--report", design.report_path, "Write the JSON design to this file");
    d->add_flag("--json", design.json_out, "Print the JSON design instead of text");

    SimulateOptions sim;
    auto* s = app.add_subcommand("simulate", "Integrate a model and report convergence");
    sim.model.attach(s);
    sim.horizon.attach(s);
    s->add_option("--config", sim.config, "Experiment JSON");
    s->add_option("--control", sim.control, "Controller: none, damping, delayed, proportional, design")
        ->check(CLI::IsMember({"none", "damping", "delayed", "proportional", "design"}));
    add_number(s, "--delta", sim.delta, "Damping control delta (default sqrt2)");
    add_number(s, "--optimize-delta", sim.optimize_delta, "Design: minimize the threshold over delta");
    add_number(s, "--lambda", sim.lambda, "Damping control gain lambda");
    add_number(s, "--margin", sim.margin, "Design: relative margin");
    add_number(s, "-b", sim.b, "Delayed proportional gain b");
    add_number(s, "--lag", sim.lag, "Delayed proportional lag (default: the model's largest lag)");
    add_number(s, "-K", sim.K, "Proportional state gain K");
    add_number(s, "--xstar", sim.xstar, "Target equilibrium (default: the model's)");
    add_number(s, "--t-end", sim.t_end, "Final time (default 60)");
    add_number(s, "--dt", sim.dt, "Step size (default 0.005)");
    add_number(s, "--tol", sim.tol, "Settling tolerance (default 1e-3)");
    s->add_option("--csv", sim.csv, "Write the trajectory as CSV");
    s->add_option("--report", sim.report_path, "Write the JSON report to this file");
    s->add_flag("--plot", sim.plot, "Write a gnuplot script next to the CSV");
    s->add_flag("--expect-settle", sim.expect_settle, "Exit 2 unless the trajectory settles");

    DemoOptions demo;
    auto* dm = app.add_subcommand("demo", "Reproduce a figure scenario: fig2 or fig3");
    dm->add_option("figure", demo.figure, "fig2 or fig3")->required()->check(CLI::IsMember({"fig2", "fig3"}));
    dm->add_option("--out-dir", demo.out_dir, "Output directory (default .)");
    add_number(dm, "--dt", demo.dt, "Step size (default 0.005)");

    auto* models = app.add_subcommand("models", "List builtin models and their default parameters");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return kExitOk;
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help("", CLI::AppFormatMode::Normal) : subs.front()->help());
        return kExitError;
    }

    try {
        if (c->parsed()) return cmd_check(check, out, err);
        if (d->parsed()) return cmd_design(design, out, err);
        if (s->parsed()) return cmd_simulate(sim, out, err);
        if (dm->parsed()) return cmd_demo(demo, out);
        if (models->parsed()) return cmd_models(out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

}  // namespace ddestab::cli
