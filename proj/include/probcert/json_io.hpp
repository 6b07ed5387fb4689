#pragma once

// JSON encoding of plans, certificates, optimization outcomes and scan
// reports, plus the optimize run configuration.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "probcert/chernoff_opt.hpp"
#include "probcert/estimator.hpp"
#include "probcert/models.hpp"
#include "probcert/sample_source.hpp"
#include "probcert/tail_bounds.hpp"
#include "probcert/verification.hpp"

namespace probcert {

using json = nlohmann::json;

/// A configuration field is missing or has the wrong type or value.
class SchemaError : public std::invalid_argument {
public:
    SchemaError(std::string field, const std::string& problem)
        : std::invalid_argument("config field '" + field + "': " + problem), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// --- plain records ---------------------------------------------------------

inline void to_json(json& j, const ErrorSpec& s) {
    j = json{{"eps_a", s.eps_a}, {"eps_r", s.eps_r}, {"delta", s.delta}};
}

inline void from_json(const json& j, ErrorSpec& s) {
    s = validate_spec(j.at("eps_a").get<double>(), j.at("eps_r").get<double>(), j.at("delta").get<double>());
}

inline void to_json(json& j, const SamplePlan& p) {
    j = json{{"n", p.n}, {"spec", p.spec}, {"worst_case_exponent", p.worst_case_exponent}};
}

inline void from_json(const json& j, SamplePlan& p) {
    p.n = j.at("n").get<std::uint64_t>();
    p.spec = j.at("spec").get<ErrorSpec>();
    p.worst_case_exponent = j.at("worst_case_exponent").get<double>();
}

inline void to_json(json& j, const Certificate& c) {
    j = json{{"mu_hat", c.mu_hat},
             {"n", c.n},
             {"eps_a", c.eps_a},
             {"eps_r", c.eps_r},
             {"delta_achieved", c.delta_achieved},
             {"guaranteed", c.guaranteed},
             {"kind", std::string(to_string(c.kind))}};
}

inline void from_json(const json& j, Certificate& c) {
    c.mu_hat = j.at("mu_hat").get<double>();
    c.n = j.at("n").get<std::uint64_t>();
    c.eps_a = j.at("eps_a").get<double>();
    c.eps_r = j.at("eps_r").get<double>();
    c.delta_achieved = j.at("delta_achieved").get<double>();
    c.guaranteed = j.at("guaranteed").get<bool>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "planned") {
        c.kind = CertificateKind::planned;
    } else if (kind == "post_hoc") {
        c.kind = CertificateKind::post_hoc;
    } else {
        throw SchemaError("kind", "unknown certificate kind '" + kind + "'");
    }
}

inline void to_json(json& j, const OptimizationOutcome& o) {
    j = json{{"theta_star", o.theta_star},
             {"lambda_star", o.lambda_star},
             {"iterations", o.iterations},
             {"termination", std::string(to_string(o.termination))},
             {"finite_difference", o.finite_difference},
             {"n_scenarios", o.n_scenarios},
             {"scenario_seed", o.scenario_seed},
             {"objective_trace", o.objective_trace},
             {"lambda_trace", o.lambda_trace},
             {"certificate", o.certificate ? json(*o.certificate) : json(nullptr)}};
}

inline void from_json(const json& j, OptimizationOutcome& o) {
    o.theta_star = j.at("theta_star").get<std::vector<double>>();
    o.lambda_star = j.at("lambda_star").get<double>();
    o.iterations = j.at("iterations").get<std::uint64_t>();
    const auto t = j.at("termination").get<std::string>();
    if (t == "gradient_tol") {
        o.termination = Termination::gradient_tol;
    } else if (t == "max_iters") {
        o.termination = Termination::max_iters;
    } else if (t == "step_underflow") {
        o.termination = Termination::step_underflow;
    } else {
        throw SchemaError("termination", "unknown value '" + t + "'");
    }
    o.finite_difference = j.at("finite_difference").get<bool>();
    o.n_scenarios = j.at("n_scenarios").get<std::size_t>();
    o.scenario_seed = j.at("scenario_seed").get<std::uint64_t>();
    o.objective_trace = j.at("objective_trace").get<std::vector<double>>();
    o.lambda_trace = j.at("lambda_trace").get<std::vector<double>>();
    if (j.at("certificate").is_null()) {
        o.certificate.reset();
    } else {
        o.certificate = j.at("certificate").get<Certificate>();
    }
}

inline void to_json(json& j, const ScanPoint& p) {
    j = json{{"point", p.point}, {"values", p.values}, {"check", p.check}};
}

inline void from_json(const json& j, ScanPoint& p) {
    p.point = j.at("point").get<std::vector<double>>();
    p.values = j.at("values").get<std::vector<double>>();
    p.check = j.at("check").get<std::string>();
}

inline void to_json(json& j, const ScanReport& r) {
    j = json{{"lemma_id", std::string(to_string(r.lemma_id))},
             {"grid", r.grid_description},
             {"points_checked", r.points_checked},
             // JSON has no infinity; an empty scan has no margin
             {"min_margin", std::isfinite(r.min_margin) ? json(r.min_margin) : json(nullptr)},
             {"violations", r.violations},
             {"measurements", r.measurements},
             {"passed", r.passed()}};
}

inline void from_json(const json& j, ScanReport& r) {
    const auto id = j.at("lemma_id").get<std::string>();
    bool known = false;
    for (LemmaId candidate : {LemmaId::L1, LemmaId::L2, LemmaId::L3, LemmaId::L4, LemmaId::L5, LemmaId::L6,
                              LemmaId::coverage, LemmaId::domination}) {
        if (id == to_string(candidate)) {
            r.lemma_id = candidate;
            known = true;
        }
    }
    if (!known) throw SchemaError("lemma_id", "unknown value '" + id + "'");
    r.grid_description = j.at("grid").get<std::string>();
    r.points_checked = j.at("points_checked").get<std::size_t>();
    const auto& m = j.at("min_margin");
    r.min_margin = m.is_null() ? std::numeric_limits<double>::infinity() : m.get<double>();
    r.violations = j.at("violations").get<std::vector<ScanPoint>>();
    r.measurements = j.at("measurements").get<std::vector<ScanPoint>>();
}

// --- optimize run configuration -------------------------------------------

/// Where optimization scenarios come from.
struct ScenarioConfig {
    std::optional<std::string> file;  ///< CSV path; otherwise drawn from `distribution`
    ScenarioDistribution distribution;
};

struct OptimizeConfig {
    std::string model;
    ModelParams model_params;
    ScenarioConfig scenarios;
    std::optional<std::uint64_t> n_scenarios;
    std::optional<ErrorSpec> spec;  ///< scenario count via minimum_sample_size
    std::uint64_t seed = 0;
    OptimizationSettings settings;
    std::optional<ErrorSpec> certify_spec;
    std::optional<std::string> trace_csv;
};

/// Seed used when a configuration or command does not name one.
inline constexpr std::uint64_t default_seed = 20080201;

namespace detail {

inline const json* find_field(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

inline double number_field(const json& v, const std::string& path) {
    if (!v.is_number()) throw SchemaError(path, "expected a number");
    return v.get<double>();
}

inline std::uint64_t count_field(const json& v, const std::string& path) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw SchemaError(path, "expected a non-negative integer");
}

inline std::vector<double> vector_field(const json& v, const std::string& path) {
    if (!v.is_array()) throw SchemaError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number_field(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline ErrorSpec spec_field(const json& v, const std::string& path) {
    if (!v.is_object()) throw SchemaError(path, "expected an object {eps_a, eps_r, delta}");
    double vals[3];
    const char* keys[3] = {"eps_a", "eps_r", "delta"};
    for (int k = 0; k < 3; ++k) {
        const json* f = find_field(v, keys[k]);
        if (!f) throw SchemaError(path + "." + keys[k], "missing");
        vals[k] = number_field(*f, path + "." + keys[k]);
    }
    try {
        return validate_spec(vals[0], vals[1], vals[2]);
    } catch (const SpecError& e) {
        throw SchemaError(path, e.what());
    }
}

inline void check_known_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : keys) ok = ok || key == k;
        if (!ok) throw SchemaError(path.empty() ? key : path + "." + key, "unknown field");
    }
}

}  // namespace detail

/// Parses and validates an optimize configuration. Every problem is
/// reported as a SchemaError naming the offending field.
inline OptimizeConfig parse_optimize_config(const json& j) {
    using detail::find_field;
    if (!j.is_object()) throw SchemaError("<root>", "expected a JSON object");
    detail::check_known_keys(j, "", {"model", "model_params", "scenarios", "n_scenarios", "spec", "seed",
                                     "settings", "certify_spec", "trace_csv"});
    OptimizeConfig c;

    const json* model = find_field(j, "model");
    if (!model) throw SchemaError("model", "missing");
    if (!model->is_string()) throw SchemaError("model", "expected a string");
    c.model = model->get<std::string>();
    bool registered = false;
    for (auto name : registry_model_names()) registered = registered || c.model == name;
    if (!registered) throw SchemaError("model", "unknown model '" + c.model + "' (expected affine, quadratic_well or uniform_gap)");

    if (const json* mp = find_field(j, "model_params"); mp && !mp->is_null()) {
        if (!mp->is_object()) throw SchemaError("model_params", "expected an object");
        detail::check_known_keys(*mp, "model_params", {"a", "b", "c"});
        if (const json* a = find_field(*mp, "a")) c.model_params.a = detail::vector_field(*a, "model_params.a");
        if (const json* b = find_field(*mp, "b")) c.model_params.b = detail::vector_field(*b, "model_params.b");
        if (const json* cc = find_field(*mp, "c")) c.model_params.c = detail::number_field(*cc, "model_params.c");
    }
    if (c.model == "affine") {
        if (c.model_params.a.empty()) throw SchemaError("model_params.a", "affine model needs a non-empty array");
        if (c.model_params.b.empty()) throw SchemaError("model_params.b", "affine model needs a non-empty array");
    }

    c.scenarios.distribution = default_distribution(c.model);
    if (const json* sc = find_field(j, "scenarios"); sc && !sc->is_null()) {
        if (!sc->is_object()) throw SchemaError("scenarios", "expected an object");
        detail::check_known_keys(*sc, "scenarios", {"file", "distribution", "mean", "stddev", "lo", "hi"});
        if (const json* f = find_field(*sc, "file")) {
            if (!f->is_string()) throw SchemaError("scenarios.file", "expected a path string");
            c.scenarios.file = f->get<std::string>();
        }
        if (const json* d = find_field(*sc, "distribution")) {
            if (!d->is_string()) throw SchemaError("scenarios.distribution", "expected \"normal\" or \"uniform\"");
            const auto kind = d->get<std::string>();
            if (kind == "normal") {
                const json* m = find_field(*sc, "mean");
                const json* s = find_field(*sc, "stddev");
                const double mean = m ? detail::number_field(*m, "scenarios.mean") : 0.0;
                const double sd = s ? detail::number_field(*s, "scenarios.stddev") : 1.0;
                if (!(sd > 0.0)) throw SchemaError("scenarios.stddev", "must be positive");
                c.scenarios.distribution = ScenarioDistribution::normal(mean, sd);
            } else if (kind == "uniform") {
                const json* l = find_field(*sc, "lo");
                const json* h = find_field(*sc, "hi");
                const double lo = l ? detail::number_field(*l, "scenarios.lo") : 0.0;
                const double hi = h ? detail::number_field(*h, "scenarios.hi") : 1.0;
                if (!(hi > lo)) throw SchemaError("scenarios.hi", "must exceed scenarios.lo");
                c.scenarios.distribution = ScenarioDistribution::uniform(lo, hi);
            } else {
                throw SchemaError("scenarios.distribution", "expected \"normal\" or \"uniform\", got \"" + kind + "\"");
            }
        }
    }

    const json* ns = find_field(j, "n_scenarios");
    const json* sp = find_field(j, "spec");
    if (ns && sp) throw SchemaError("n_scenarios", "give either n_scenarios or spec, not both");
    if (ns) {
        c.n_scenarios = detail::count_field(*ns, "n_scenarios");
        if (*c.n_scenarios == 0) throw SchemaError("n_scenarios", "must be positive");
    } else if (sp) {
        c.spec = detail::spec_field(*sp, "spec");
    } else if (!c.scenarios.file) {
        throw SchemaError("n_scenarios", "missing (give n_scenarios, spec or scenarios.file)");
    }

    c.seed = default_seed;
    if (const json* s = find_field(j, "seed")) c.seed = detail::count_field(*s, "seed");

    const std::size_t dim_theta = c.model == "affine" ? c.model_params.a.size() : 1;
    c.settings.theta0.assign(dim_theta, 0.0);
    if (const json* st = find_field(j, "settings"); st && !st->is_null()) {
        if (!st->is_object()) throw SchemaError("settings", "expected an object");
        detail::check_known_keys(*st, "settings", {"theta0", "nu0", "max_iters", "grad_tol", "backtrack_shrink",
                                                   "armijo_c", "initial_step", "max_move", "lambda_cap"});
        auto& s = c.settings;
        if (const json* v = find_field(*st, "theta0")) s.theta0 = detail::vector_field(*v, "settings.theta0");
        if (const json* v = find_field(*st, "nu0")) s.nu0 = detail::number_field(*v, "settings.nu0");
        if (const json* v = find_field(*st, "max_iters")) s.max_iters = detail::count_field(*v, "settings.max_iters");
        if (const json* v = find_field(*st, "grad_tol")) s.grad_tol = detail::number_field(*v, "settings.grad_tol");
        if (const json* v = find_field(*st, "backtrack_shrink")) {
            s.backtrack_shrink = detail::number_field(*v, "settings.backtrack_shrink");
        }
        if (const json* v = find_field(*st, "armijo_c")) s.armijo_c = detail::number_field(*v, "settings.armijo_c");
        if (const json* v = find_field(*st, "initial_step")) {
            s.initial_step = detail::number_field(*v, "settings.initial_step");
        }
        if (const json* v = find_field(*st, "max_move")) s.max_move = detail::number_field(*v, "settings.max_move");
        if (const json* v = find_field(*st, "lambda_cap")) s.lambda_cap = detail::number_field(*v, "settings.lambda_cap");
    }
    try {
        validate_settings(c.settings, dim_theta);
    } catch (const SpecError& e) {
        throw SchemaError("settings", e.what());
    }

    if (const json* cs = find_field(j, "certify_spec"); cs && !cs->is_null()) {
        c.certify_spec = detail::spec_field(*cs, "certify_spec");
    }
    if (const json* t = find_field(j, "trace_csv"); t && !t->is_null()) {
        if (!t->is_string()) throw SchemaError("trace_csv", "expected a path string");
        c.trace_csv = t->get<std::string>();
    }
    return c;
}

}  // namespace probcert
