#pragma once

// Command-line front end: plan, confidence, estimate, optimize, verify.
//
// Exit status: 0 success, 1 validation or domain error, 2 I/O error,
// 3 verification-suite failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "probcert/chernoff_opt.hpp"
#include "probcert/errors.hpp"
#include "probcert/estimator.hpp"
#include "probcert/json_io.hpp"
#include "probcert/models.hpp"
#include "probcert/tail_bounds.hpp"
#include "probcert/text_io.hpp"
#include "probcert/verification.hpp"

namespace probcert {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int validation = 1;
inline constexpr int io = 2;
inline constexpr int verification_failed = 3;
}  // namespace exit_code

/// Result of an optimize run plus what it was run with.
struct OptimizeRun {
    OptimizeConfig config;
    OptimizationOutcome outcome;
};

/// Runs the full pipeline for a parsed configuration: build or load the
/// scenario set, minimize the empirical moment and, when certify_spec is
/// present, certify p(theta*) on fresh draws.
///
/// Scenario seed derive_seed(seed, 0); certification seed derive_seed(seed, 1).
/// Relative scenario and trace paths resolve against base_dir.
inline OptimizeRun run_optimize(const OptimizeConfig& config, const std::filesystem::path& base_dir = {}) {
    const PerformanceModel model = make_registry_model(config.model, config.model_params);
    if (config.settings.theta0.size() != model.dim_theta()) {
        throw SchemaError("settings.theta0", "expected length " + std::to_string(model.dim_theta()));
    }

    ScenarioSet scenarios;
    if (config.scenarios.file) {
        scenarios = read_scenario_file((base_dir / *config.scenarios.file).string());
    } else {
        const std::uint64_t n = config.n_scenarios ? *config.n_scenarios : scenario_sample_size(*config.spec);
        DistributionSource source(config.scenarios.distribution, model.dim_delta(), derive_seed(config.seed, 0));
        scenarios = ScenarioSet::draw(source, static_cast<std::size_t>(n));
    }
    const ChernoffObjective<PerformanceModel> objective(model, std::move(scenarios));

    OptimizeRun run{config, minimize(objective, config.settings)};
    if (config.certify_spec) {
        DistributionSource fresh(config.scenarios.distribution, model.dim_delta(), derive_seed(config.seed, 1));
        run.outcome.certificate = certify_probability(model, run.outcome.theta_star, *config.certify_spec, fresh);
    }
    if (config.trace_csv) {
        const auto path = (base_dir / *config.trace_csv).string();
        std::ofstream trace(path);
        if (!trace) throw IoError("cannot open '" + path + "' for writing");
        trace << std::setprecision(17) << "iteration,objective,lambda\n";
        for (std::size_t i = 0; i < run.outcome.objective_trace.size(); ++i) {
            trace << i << ',' << run.outcome.objective_trace[i] << ',' << run.outcome.lambda_trace[i] << '\n';
        }
        if (!trace) throw IoError("write to '" + path + "' failed");
    }
    return run;
}

/// Named verification suites: lemmas, coverage, domination, all.
struct VerifyOptions {
    std::string suite = "lemmas";
    std::size_t trials = 2000;
    std::size_t points = 20;
    std::uint64_t seed = default_seed;
    std::string model = "quadratic_well";
    ErrorSpec spec{0.05, 0.2, 0.05};
};

inline const std::vector<double>& coverage_mu_grid() {
    static const std::vector<double> grid{0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95};
    return grid;
}

inline std::vector<ScanReport> run_verify_suite(const VerifyOptions& opt) {
    const bool all = opt.suite == "all";
    if (!all && opt.suite != "lemmas" && opt.suite != "coverage" && opt.suite != "domination") {
        throw std::invalid_argument("unknown suite '" + opt.suite + "' (expected lemmas, coverage, domination or all)");
    }
    std::vector<ScanReport> reports;
    if (all || opt.suite == "lemmas") {
        reports.push_back(lemma1_check(1000, 200, opt.seed));
        reports.push_back(lemma_scan(LemmaId::L2, {{0.05, 0.1, 0.2, 0.3}}));
        reports.push_back(lemma_scan(LemmaId::L3, {{0.05, 0.1, 0.2, 0.3}}));
        reports.push_back(lemma_scan(LemmaId::L4, {{0.1, 0.3, 0.5, 0.9}}));
        const std::uint64_t n = minimum_sample_size(opt.spec).n;
        for (LemmaId id : {LemmaId::L5, LemmaId::L6}) {
            reports.push_back(lemma56_check(opt.spec, id, lemma56_grid(opt.spec, id, 10), n));
        }
    }
    if (all || opt.suite == "coverage") {
        reports.push_back(coverage_experiment(opt.spec, coverage_mu_grid(), opt.trials, opt.seed));
    }
    if (all || opt.suite == "domination") {
        ModelParams params;
        if (opt.model == "affine") params = ModelParams{{1.0, -0.5}, {1.0, 0.5}, 0.5};
        reports.push_back(domination_experiment(opt.model, opt.spec, opt.points, opt.seed, params));
    }
    return reports;
}

namespace detail {

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write to '" + path + "' failed");
}

inline std::string summarize(const OptimizationOutcome& o) {
    std::ostringstream os;
    os.precision(10);
    os << "theta_star      = [";
    for (std::size_t i = 0; i < o.theta_star.size(); ++i) os << (i ? ", " : "") << o.theta_star[i];
    os << "]\nlambda_star     = " << o.lambda_star << "\n"
       << "objective       = " << o.objective_trace.front() << " -> " << o.objective_trace.back() << "\n"
       << "iterations      = " << o.iterations << " (" << to_string(o.termination) << ")\n"
       << "scenarios       = " << o.n_scenarios << " (seed " << o.scenario_seed << ")\n";
    if (o.finite_difference) os << "theta-gradient  = central finite differences\n";
    if (o.certificate) os << "certificate of p(theta_star):\n" << describe(*o.certificate);
    return os.str();
}

}  // namespace detail

/// Entry point shared by the probcert binary and the tests.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"probcert: certified probability estimation and Chernoff-bound probability minimization"};
    app.require_subcommand(1);

    bool as_json = false;
    std::string output_path;
    double eps_a = 0.0;
    double eps_r = 0.0;
    double delta = 0.0;
    std::uint64_t n = 0;
    std::string input_path;
    std::string config_path;
    VerifyOptions verify;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_flag("--json", as_json, "Print machine-readable JSON");
        cmd->add_option("--output", output_path, "Also write the JSON result to this path");
    };

    auto* plan = app.add_subcommand("plan", "Minimum sample size for (eps_a, eps_r, delta)");
    plan->add_option("--eps-a", eps_a, "Absolute error tolerance")->required();
    plan->add_option("--eps-r", eps_r, "Relative error tolerance")->required();
    plan->add_option("--delta", delta, "Risk")->required();
    add_common(plan);

    auto* confidence = app.add_subcommand("confidence", "Risk certified by n samples");
    confidence->add_option("--n", n, "Sample count")->required();
    confidence->add_option("--eps-a", eps_a, "Absolute error tolerance")->required();
    confidence->add_option("--eps-r", eps_r, "Relative error tolerance")->required();
    add_common(confidence);

    auto* estimate = app.add_subcommand("estimate", "Certify the mean of a sample file (one value per line)");
    estimate->add_option("--input", input_path, "Sample file")->required();
    estimate->add_option("--eps-a", eps_a, "Absolute error tolerance")->required();
    estimate->add_option("--eps-r", eps_r, "Relative error tolerance")->required();
    add_common(estimate);

    auto* optimize = app.add_subcommand("optimize", "Minimize the empirical Chernoff objective from a JSON config");
    optimize->add_option("--config", config_path, "Run configuration (JSON)")->required();
    add_common(optimize);

    auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
    verify_cmd->add_option("--suite", verify.suite, "lemmas | coverage | domination | all")->required();
    verify_cmd->add_option("--trials", verify.trials, "Coverage trials per mean");
    verify_cmd->add_option("--points", verify.points, "Domination (lambda, theta) points");
    verify_cmd->add_option("--seed", verify.seed, "Base seed");
    verify_cmd->add_option("--model", verify.model, "Domination model");
    add_common(verify_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_code::ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_code::ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return exit_code::validation;
    }

    const auto emit = [&](const json& j, const std::string& text) {
        if (!output_path.empty()) detail::write_json_file(output_path, j);
        if (as_json) {
            out << j.dump(2) << '\n';
        } else {
            out << text;
        }
    };

    out << std::setprecision(10);
    try {
        if (plan->parsed()) {
            const SamplePlan p = minimum_sample_size(validate_spec(eps_a, eps_r, delta));
            std::ostringstream text;
            text.precision(12);
            text << "n = " << p.n << "\n"
                 << "bound = " << sample_size_bound(p.spec) << " (n is the least integer above it)\n"
                 << "worst_case_exponent = " << p.worst_case_exponent << "\n";
            emit(json(p), text.str());
        } else if (confidence->parsed()) {
            if (n == 0) throw DomainError("--n must be positive");
            const Confidence c = achieved_confidence(n, eps_a, eps_r);
            std::ostringstream text;
            text.precision(10);
            text << "delta = " << c.delta << (c.guaranteed ? "" : "  (no guarantee)") << "\n";
            emit(json{{"n", n}, {"eps_a", eps_a}, {"eps_r", eps_r}, {"delta", c.delta}, {"raw", c.raw},
                      {"guaranteed", c.guaranteed}},
                 text.str());
        } else if (estimate->parsed()) {
            validate_tolerances(eps_a, eps_r);
            const auto values = read_sample_file(input_path);
            const Certificate c = estimate_from_batch(values, eps_a, eps_r);
            emit(json(c), describe(c));
        } else if (optimize->parsed()) {
            std::ifstream in(config_path);
            if (!in) throw IoError("cannot open '" + config_path + "' for reading");
            json raw;
            try {
                raw = json::parse(in);
            } catch (const json::parse_error& e) {
                throw SchemaError("<root>", std::string("malformed JSON: ") + e.what());
            }
            const OptimizeConfig config = parse_optimize_config(raw);
            const auto base = std::filesystem::path(config_path).parent_path();
            const OptimizeRun run = run_optimize(config, base);
            json j = run.outcome;
            j["model"] = config.model;
            emit(j, detail::summarize(run.outcome));
        } else if (verify_cmd->parsed()) {
            const auto reports = run_verify_suite(verify);
            bool passed = true;
            std::string text;
            for (const auto& r : reports) {
                passed = passed && r.passed();
                text += describe(r);
            }
            text += passed ? "suite " + verify.suite + ": PASSED\n" : "suite " + verify.suite + ": FAILED\n";
            emit(json{{"suite", verify.suite}, {"passed", passed}, {"reports", reports}}, text);
            return passed ? exit_code::ok : exit_code::verification_failed;
        }
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return exit_code::io;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::validation;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::validation;
    } catch (const std::overflow_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::validation;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::io;
    }
    return exit_code::ok;
}

}  // namespace probcert
