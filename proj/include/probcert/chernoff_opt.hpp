#pragma once

// Probability minimization through the empirical Chernoff objective.
//
// For a failure probability p(theta) = Pr{Y(theta, Delta) <= 0} and any
// lambda > 0, the pointwise inequality exp(-lambda y) >= 1{y <= 0} gives
// p(theta) <= E[exp(-lambda Y)]. The expectation is replaced by an average
// over a fixed scenario set and minimized jointly in (lambda, theta) by
// gradient descent; the resulting design is then certified on fresh draws.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "probcert/errors.hpp"
#include "probcert/estimator.hpp"
#include "probcert/models.hpp"
#include "probcert/sample_source.hpp"
#include "probcert/summation.hpp"
#include "probcert/tail_bounds.hpp"

namespace probcert {

/// Immutable n x d matrix of scenario draws, row-major.
class ScenarioSet {
public:
    ScenarioSet() = default;

    ScenarioSet(std::vector<double> data, std::size_t dimension, std::uint64_t seed)
        : data_(std::move(data)), dimension_(dimension), seed_(seed) {
        if (dimension_ == 0) throw std::invalid_argument("ScenarioSet: zero dimension");
        if (data_.empty() || data_.size() % dimension_ != 0) {
            throw std::invalid_argument("ScenarioSet: data size is not a positive multiple of the dimension");
        }
    }

    static ScenarioSet from_rows(const std::vector<std::vector<double>>& rows, std::uint64_t seed = 0) {
        if (rows.empty()) throw std::invalid_argument("ScenarioSet: no rows");
        const std::size_t d = rows.front().size();
        std::vector<double> data;
        data.reserve(rows.size() * d);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != d) {
                throw std::invalid_argument("ScenarioSet: row " + std::to_string(i) + " has " +
                                            std::to_string(rows[i].size()) + " entries, expected " +
                                            std::to_string(d));
            }
            data.insert(data.end(), rows[i].begin(), rows[i].end());
        }
        return ScenarioSet(std::move(data), d, seed);
    }

    template <scenario_source Source>
    static ScenarioSet draw(Source& source, std::size_t n) {
        if (n == 0) throw std::invalid_argument("ScenarioSet: n must be positive");
        const std::size_t d = source.dimension();
        std::vector<double> data;
        data.reserve(n * d);
        for (std::size_t i = 0; i < n; ++i) {
            auto row = source.next();
            if (!row) throw SourceExhausted(n, i);
            if (row->size() != d) throw std::invalid_argument("ScenarioSet: source row has wrong dimension");
            data.insert(data.end(), row->begin(), row->end());
        }
        return ScenarioSet(std::move(data), d, source.seed());
    }

    std::size_t size() const noexcept { return dimension_ ? data_.size() / dimension_ : 0; }
    std::size_t dimension() const noexcept { return dimension_; }
    std::uint64_t seed() const noexcept { return seed_; }

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(data_).subspan(i * dimension_, dimension_);
    }

    friend bool operator==(const ScenarioSet&, const ScenarioSet&) = default;

private:
    std::vector<double> data_;
    std::size_t dimension_ = 0;
    std::uint64_t seed_ = 0;
};

template <performance_model Model>
struct ChernoffObjective {
    ChernoffObjective(Model m, ScenarioSet s) : model(std::move(m)), scenarios(std::move(s)) {
        if (scenarios.dimension() != model.dim_delta()) {
            throw std::invalid_argument("ChernoffObjective: scenario dimension " +
                                        std::to_string(scenarios.dimension()) +
                                        " does not match model dim_delta " +
                                        std::to_string(model.dim_delta()));
        }
    }

    Model model;
    ScenarioSet scenarios;
};

namespace detail {

/// Largest argument for which std::exp stays finite.
inline const double max_exp_arg = std::log(std::numeric_limits<double>::max());

inline void check_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DomainError("lambda = " + fmt(lambda) + " must be positive and finite");
    }
}

template <class Model>
void check_theta(const Model& model, std::span<const double> theta) {
    if (theta.size() != model.dim_theta()) {
        throw std::invalid_argument("theta has length " + std::to_string(theta.size()) +
                                    ", model expects " + std::to_string(model.dim_theta()));
    }
}

/// exp(-lambda y), or OverflowError naming the scenario.
inline double chernoff_kernel(double lambda, double y, std::size_t scenario) {
    if (!std::isfinite(y)) {
        throw DomainError("model returned non-finite Y at scenario " + std::to_string(scenario));
    }
    const double arg = -lambda * y;
    if (arg > max_exp_arg) {
        throw OverflowError("exp(-lambda Y) overflows at scenario " + std::to_string(scenario) +
                                " (lambda = " + fmt(lambda) + ", Y = " + fmt(y) + ")",
                            scenario);
    }
    return std::exp(arg);
}

inline double finite_sum_or_throw(const CompensatedSum& acc, std::size_t scenario) {
    const double v = acc.value();
    if (!std::isfinite(v)) {
        throw OverflowError("scenario sum overflows at scenario " + std::to_string(scenario), scenario);
    }
    return v;
}

}  // namespace detail

/// Per-scenario values Y(theta, Delta_i).
template <performance_model Model>
std::vector<double> performance_values(const ChernoffObjective<Model>& obj,
                                       std::span<const double> theta) {
    detail::check_theta(obj.model, theta);
    std::vector<double> y(obj.scenarios.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = obj.model.evaluate(theta, obj.scenarios.row(i));
    return y;
}

/// (1/n) sum_i exp(-lambda Y(theta, Delta_i)), summed in scenario order.
template <performance_model Model>
double empirical_moment(const ChernoffObjective<Model>& obj, double lambda,
                        std::span<const double> theta) {
    detail::check_lambda(lambda);
    detail::check_theta(obj.model, theta);
    const std::size_t n = obj.scenarios.size();
    CompensatedSum acc;
    for (std::size_t i = 0; i < n; ++i) {
        acc.add(detail::chernoff_kernel(lambda, obj.model.evaluate(theta, obj.scenarios.row(i)), i));
    }
    return detail::finite_sum_or_throw(acc, n - 1) / static_cast<double>(n);
}

struct MomentGradient {
    double d_lambda = 0.0;
    std::vector<double> d_theta;
    bool finite_difference = false;  ///< theta part came from central differences of Y
};

/// Central-difference step used when a model has no analytic gradient.
inline double fallback_step(double component) noexcept { return 1e-6 * (1.0 + std::abs(component)); }

/// Partials of the empirical moment:
///   d/dlambda  = -(1/n) sum Y_i exp(-lambda Y_i)
///   d/dtheta_j = -(lambda/n) sum dY_i/dtheta_j exp(-lambda Y_i)
/// Models without an analytic gradient fall back to central differences of
/// Y when allow_fallback is set.
template <performance_model Model>
MomentGradient empirical_moment_gradient(const ChernoffObjective<Model>& obj, double lambda,
                                         std::span<const double> theta, bool allow_fallback = true) {
    detail::check_lambda(lambda);
    detail::check_theta(obj.model, theta);
    const bool analytic = provides_gradient(obj.model);
    if (!analytic && !allow_fallback) {
        throw std::invalid_argument("model has no analytic theta-gradient and finite differences are disabled");
    }

    const std::size_t n = obj.scenarios.size();
    const std::size_t d = obj.model.dim_theta();
    CompensatedSum d_lambda;
    std::vector<CompensatedSum> d_theta(d);
    std::vector<double> dy(d);
    std::vector<double> probe(theta.begin(), theta.end());

    for (std::size_t i = 0; i < n; ++i) {
        const auto row = obj.scenarios.row(i);
        const double y = obj.model.evaluate(theta, row);
        const double w = detail::chernoff_kernel(lambda, y, i);
        d_lambda.add(-y * w);

        if constexpr (differentiable_model<Model>) {
            if (analytic) obj.model.gradient_theta(theta, row, dy);
        }
        if (!analytic) {
            for (std::size_t j = 0; j < d; ++j) {
                const double h = fallback_step(theta[j]);
                probe[j] = theta[j] + h;
                const double up = obj.model.evaluate(probe, row);
                probe[j] = theta[j] - h;
                const double down = obj.model.evaluate(probe, row);
                probe[j] = theta[j];
                dy[j] = (up - down) / (2.0 * h);
            }
        }
        for (std::size_t j = 0; j < d; ++j) d_theta[j].add(-lambda * dy[j] * w);
    }

    MomentGradient g;
    const double inv_n = 1.0 / static_cast<double>(n);
    g.d_lambda = detail::finite_sum_or_throw(d_lambda, n - 1) * inv_n;
    g.d_theta.resize(d);
    for (std::size_t j = 0; j < d; ++j) g.d_theta[j] = detail::finite_sum_or_throw(d_theta[j], n - 1) * inv_n;
    g.finite_difference = !analytic;
    return g;
}

/// Scenario count for the empirical objective: each summand exp(-lambda Y)
/// with Y > 0 lies in (0,1), so the estimation sample-size rule applies.
inline std::uint64_t scenario_sample_size(const ErrorSpec& spec) {
    return minimum_sample_size(validate_spec(spec.eps_a, spec.eps_r, spec.delta)).n;
}

/// Minimum of the empirical moment over a grid of lambda values.
template <performance_model Model>
double chernoff_upper_bound(const ChernoffObjective<Model>& obj, std::span<const double> theta,
                            std::span<const double> lambda_grid) {
    if (lambda_grid.empty()) throw std::invalid_argument("chernoff_upper_bound: empty lambda grid");
    double best = std::numeric_limits<double>::infinity();
    for (double lambda : lambda_grid) best = std::min(best, empirical_moment(obj, lambda, theta));
    return best;
}

struct OptimizationSettings {
    std::vector<double> theta0;
    double nu0 = 0.0;  ///< initial log(lambda)
    std::uint64_t max_iters = 1000;
    double grad_tol = 1e-7;
    double backtrack_shrink = 0.5;
    double armijo_c = 1e-4;
    double initial_step = 1.0;
    double max_move = 1.0;  ///< longest trial move in (nu, theta)
    double lambda_cap = 50.0;

    friend bool operator==(const OptimizationSettings&, const OptimizationSettings&) = default;
};

inline void validate_settings(const OptimizationSettings& s, std::size_t dim_theta) {
    std::vector<std::string> bad;
    if (s.theta0.size() != dim_theta) {
        bad.push_back("theta0 has length " + std::to_string(s.theta0.size()) + ", expected " +
                      std::to_string(dim_theta));
    }
    for (double t : s.theta0) {
        if (!std::isfinite(t)) {
            bad.push_back("theta0 has a non-finite entry");
            break;
        }
    }
    if (!std::isfinite(s.nu0)) bad.push_back("nu0 must be finite");
    if (!(s.grad_tol > 0.0)) bad.push_back("grad_tol must be positive");
    if (!(s.backtrack_shrink > 0.0 && s.backtrack_shrink < 1.0)) bad.push_back("backtrack_shrink must be in (0,1)");
    if (!(s.armijo_c > 0.0 && s.armijo_c < 1.0)) bad.push_back("armijo_c must be in (0,1)");
    if (!(s.initial_step > 0.0) || !std::isfinite(s.initial_step)) bad.push_back("initial_step must be positive");
    if (!(s.max_move > 0.0)) bad.push_back("max_move must be positive");
    if (!(s.lambda_cap > 0.0) || !std::isfinite(s.lambda_cap)) bad.push_back("lambda_cap must be positive");
    if (bad.empty() && std::exp(s.nu0) > s.lambda_cap) bad.push_back("exp(nu0) exceeds lambda_cap");
    if (!bad.empty()) throw SpecError(std::move(bad));
}

enum class Termination { gradient_tol, max_iters, step_underflow };

constexpr std::string_view to_string(Termination t) noexcept {
    switch (t) {
        case Termination::gradient_tol: return "gradient_tol";
        case Termination::max_iters: return "max_iters";
        case Termination::step_underflow: return "step_underflow";
    }
    return "unknown";
}

struct OptimizationOutcome {
    std::vector<double> theta_star;
    double lambda_star = 1.0;
    std::vector<double> objective_trace;  ///< one entry per iterate, starting point first
    std::vector<double> lambda_trace;
    std::uint64_t iterations = 0;
    Termination termination = Termination::max_iters;
    bool finite_difference = false;  ///< theta-gradient from central differences of Y
    std::size_t n_scenarios = 0;
    std::uint64_t scenario_seed = 0;
    std::optional<Certificate> certificate;

    friend bool operator==(const OptimizationOutcome&, const OptimizationOutcome&) = default;
};

namespace detail {

/// lambda never drops below exp(min_log_lambda) so that it stays a
/// positive normal double.
inline constexpr double min_log_lambda = -700.0;

/// Backtracking gives up once the step falls below initial_step times this.
inline constexpr double min_relative_step = 1e-20;

}  // namespace detail

/// Gradient descent on x = (nu, theta) with lambda = exp(nu), nu projected
/// onto [-700, log(lambda_cap)], and a backtracking line search that accepts
/// a trial point x+ only if
///
///   f(x+) <= f(x) + armijo_c * grad f(x) . (x+ - x).
///
/// The first trial step is shortened so that it moves x by at most max_move.
/// Without this cap a steep start can jump straight onto the lambda -> 0
/// plateau, where the objective tends to 1 and the gradient vanishes.
///
/// Since every accepted step is a projected descent step, the objective
/// trace is non-increasing.
template <performance_model Model>
OptimizationOutcome minimize(const ChernoffObjective<Model>& obj, const OptimizationSettings& settings) {
    validate_settings(settings, obj.model.dim_theta());
    const std::size_t d = obj.model.dim_theta();
    const double nu_max = std::log(settings.lambda_cap);
    const double nu_min = detail::min_log_lambda;
    const auto project_nu = [&](double nu) { return std::clamp(nu, nu_min, nu_max); };

    double nu = project_nu(settings.nu0);
    std::vector<double> theta = settings.theta0;

    const double f0 = empirical_moment(obj, std::exp(nu), theta);
    if (!std::isfinite(f0)) throw DomainError("objective is not finite at the starting point");

    OptimizationOutcome out;
    out.n_scenarios = obj.scenarios.size();
    out.scenario_seed = obj.scenarios.seed();
    out.finite_difference = !provides_gradient(obj.model);
    out.objective_trace.push_back(f0);
    out.lambda_trace.push_back(std::exp(nu));

    double f = f0;
    std::vector<double> trial_theta(d);
    while (true) {
        const double lambda = std::exp(nu);
        const MomentGradient g = empirical_moment_gradient(obj, lambda, theta);
        // chain rule through lambda = exp(nu)
        double g_nu = lambda * g.d_lambda;

        // Projected gradient: a component pushing nu past a bound is inactive.
        double pg_nu = g_nu;
        if ((nu >= nu_max && g_nu < 0.0) || (nu <= nu_min && g_nu > 0.0)) pg_nu = 0.0;
        double norm2 = pg_nu * pg_nu;
        for (double v : g.d_theta) norm2 += v * v;

        if (std::sqrt(norm2) <= settings.grad_tol) {
            out.termination = Termination::gradient_tol;
            break;
        }
        if (out.iterations >= settings.max_iters) {
            out.termination = Termination::max_iters;
            break;
        }

        double step = settings.initial_step;
        const double full_norm = std::sqrt(g_nu * g_nu + norm2 - pg_nu * pg_nu);
        if (step * full_norm > settings.max_move) step = settings.max_move / full_norm;
        const double min_step = settings.initial_step * detail::min_relative_step;
        bool accepted = false;
        bool last_overflow = false;
        double trial_nu = nu;
        double trial_f = f;
        while (step >= min_step) {
            trial_nu = project_nu(nu - step * g_nu);
            bool moved = trial_nu != nu;
            for (std::size_t j = 0; j < d; ++j) {
                trial_theta[j] = theta[j] - step * g.d_theta[j];
                moved = moved || trial_theta[j] != theta[j];
            }
            if (!moved) break;

            double directional = g_nu * (trial_nu - nu);
            for (std::size_t j = 0; j < d; ++j) directional += g.d_theta[j] * (trial_theta[j] - theta[j]);

            try {
                trial_f = empirical_moment(obj, std::exp(trial_nu), trial_theta);
                last_overflow = false;
            } catch (const OverflowError&) {
                last_overflow = true;
                step *= settings.backtrack_shrink;
                continue;
            }
            if (trial_f <= f + settings.armijo_c * directional) {
                accepted = true;
                break;
            }
            step *= settings.backtrack_shrink;
        }

        if (!accepted) {
            if (last_overflow) {
                std::string where = "nu = " + detail::fmt(nu) + ", theta = [";
                for (std::size_t j = 0; j < d; ++j) where += (j ? ", " : "") + detail::fmt(theta[j]);
                throw OverflowError("line search overflowed on every backtracking attempt at " + where + "]",
                                    0);
            }
            out.termination = Termination::step_underflow;
            break;
        }

        nu = trial_nu;
        theta = trial_theta;
        f = trial_f;
        ++out.iterations;
        out.objective_trace.push_back(f);
        out.lambda_trace.push_back(std::exp(nu));
    }

    out.theta_star = std::move(theta);
    out.lambda_star = std::exp(nu);
    return out;
}

/// Adapts a scenario source into a {0,1} sample source of failure
/// indicators 1{Y(theta, Delta) <= 0}.
template <performance_model Model, scenario_source Source>
class FailureIndicatorSource {
public:
    FailureIndicatorSource(const Model& model, std::vector<double> theta, Source& source)
        : model_(&model), theta_(std::move(theta)), source_(&source) {}

    std::optional<double> next() {
        auto delta = source_->next();
        if (!delta) return std::nullopt;
        ++draws_;
        return model_->evaluate(theta_, *delta) <= 0.0 ? 1.0 : 0.0;
    }

    std::size_t draws_made() const noexcept { return draws_; }

private:
    const Model* model_;
    std::vector<double> theta_;
    Source* source_;
    std::size_t draws_ = 0;
};

/// Certified estimate of p(theta) = Pr{Y(theta, Delta) <= 0} from
/// minimum_sample_size(spec).n fresh draws of source. The source must be
/// independent of any scenarios the design was optimized on.
template <performance_model Model, scenario_source Source>
Certificate certify_probability(const Model& model, std::span<const double> theta,
                                const ErrorSpec& spec, Source& source) {
    if (theta.size() != model.dim_theta()) throw std::invalid_argument("certify_probability: theta has wrong length");
    if (source.dimension() != model.dim_delta()) {
        throw std::invalid_argument("certify_probability: source dimension does not match the model");
    }
    FailureIndicatorSource<Model, Source> indicators(model, std::vector<double>(theta.begin(), theta.end()),
                                                     source);
    return estimate_with_plan(indicators, spec);
}

}  // namespace probcert
