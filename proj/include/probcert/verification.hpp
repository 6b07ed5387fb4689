#pragma once

// Executable checks of the tail-bound machinery:
//
//  * exact binomial tails against the Hoeffding bounds (L1),
//  * grid scans of the monotonicity and domination properties of the
//    Hoeffding exponent (L2, L3, L4),
//  * the uniform worst-case-mean bounds against exact tails (L5, L6),
//  * Monte Carlo coverage of the mixed error criterion (coverage),
//  * the Chernoff kernel inequality exp(-lambda y) >= 1{y <= 0} (domination).
//
// Bernoulli variables are the test case throughout because their tails
// can be computed exactly.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "probcert/chernoff_opt.hpp"
#include "probcert/errors.hpp"
#include "probcert/estimator.hpp"
#include "probcert/models.hpp"
#include "probcert/sample_source.hpp"
#include "probcert/summation.hpp"
#include "probcert/tail_bounds.hpp"

namespace probcert {

// ---------------------------------------------------------------------------
// Exact binomial tails
// ---------------------------------------------------------------------------

namespace detail {

/// Largest n for which every C(n, j) is an integer below 2^53.
inline constexpr std::uint64_t exact_coefficient_limit = 56;

/// sum_{j=lo}^{hi} C(n,j) mu^j (1-mu)^(n-j), ascending j.
///
/// Small n multiplies exact integer coefficients by powers (exact for
/// dyadic mu); larger n works in log space.
inline double binomial_range_sum(std::uint64_t n, double mu, std::uint64_t lo, std::uint64_t hi) {
    if (!(mu > 0.0 && mu < 1.0)) throw DomainError("binomial tail: mu = " + fmt(mu) + " is not in (0,1)");
    if (lo > hi) return 0.0;
    CompensatedSum acc;
    if (n <= exact_coefficient_limit) {
        std::uint64_t c = 1;  // C(n, j)
        for (std::uint64_t j = 0; j <= hi; ++j) {
            if (j > 0) c = c * (n - j + 1) / j;
            if (j >= lo) {
                acc.add(static_cast<double>(c) * std::pow(mu, static_cast<double>(j)) *
                        std::pow(1.0 - mu, static_cast<double>(n - j)));
            }
        }
    } else {
        const double log_mu = std::log(mu);
        const double log_q = std::log1p(-mu);
        const double log_n_fact = std::lgamma(static_cast<double>(n) + 1.0);
        for (std::uint64_t j = lo; j <= hi; ++j) {
            const double jd = static_cast<double>(j);
            const double log_c = log_n_fact - std::lgamma(jd + 1.0) -
                                 std::lgamma(static_cast<double>(n - j) + 1.0);
            acc.add(std::exp(log_c + jd * log_mu + static_cast<double>(n - j) * log_q));
        }
    }
    return std::min(acc.value(), 1.0);
}

/// Slack used when turning a real threshold into an integer count, always
/// in the direction that enlarges the exact tail being checked.
inline constexpr double threshold_slack = 1e-9;

}  // namespace detail

/// Pr{S <= k} for S ~ Binomial(n, mu).
inline double binomial_tail_exact(std::uint64_t n, double mu, std::int64_t k) {
    if (n == 0) throw DomainError("binomial_tail_exact: n must be positive");
    if (k < 0 || static_cast<std::uint64_t>(k) > n) {
        throw DomainError("binomial_tail_exact: k = " + std::to_string(k) + " outside [0, " +
                          std::to_string(n) + "]");
    }
    if (static_cast<std::uint64_t>(k) == n) {
        if (!(mu > 0.0 && mu < 1.0)) throw DomainError("binomial tail: mu = " + detail::fmt(mu) + " is not in (0,1)");
        return 1.0;
    }
    return detail::binomial_range_sum(n, mu, 0, static_cast<std::uint64_t>(k));
}

/// Pr{S >= k} for S ~ Binomial(n, mu), summed directly (no complement).
inline double binomial_upper_tail_exact(std::uint64_t n, double mu, std::int64_t k) {
    if (n == 0) throw DomainError("binomial_upper_tail_exact: n must be positive");
    if (k < 0 || static_cast<std::uint64_t>(k) > n) {
        throw DomainError("binomial_upper_tail_exact: k = " + std::to_string(k) + " outside [0, " +
                          std::to_string(n) + "]");
    }
    if (k == 0) {
        if (!(mu > 0.0 && mu < 1.0)) throw DomainError("binomial tail: mu = " + detail::fmt(mu) + " is not in (0,1)");
        return 1.0;
    }
    return detail::binomial_range_sum(n, mu, static_cast<std::uint64_t>(k), n);
}

/// Pr{S/n >= x}; zero when x > 1.
inline double binomial_mean_at_least(std::uint64_t n, double mu, double x) {
    const double t = std::ceil(static_cast<double>(n) * x - detail::threshold_slack);
    if (t > static_cast<double>(n)) return 0.0;
    return binomial_upper_tail_exact(n, mu, std::max<std::int64_t>(0, static_cast<std::int64_t>(t)));
}

/// Pr{S/n <= x}; zero when x < 0.
inline double binomial_mean_at_most(std::uint64_t n, double mu, double x) {
    const double t = std::floor(static_cast<double>(n) * x + detail::threshold_slack);
    if (t < 0.0) return 0.0;
    return binomial_tail_exact(n, mu, std::min<std::int64_t>(static_cast<std::int64_t>(n),
                                                             static_cast<std::int64_t>(t)));
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

enum class LemmaId { L1, L2, L3, L4, L5, L6, coverage, domination };

constexpr std::string_view to_string(LemmaId id) noexcept {
    switch (id) {
        case LemmaId::L1: return "L1";
        case LemmaId::L2: return "L2";
        case LemmaId::L3: return "L3";
        case LemmaId::L4: return "L4";
        case LemmaId::L5: return "L5";
        case LemmaId::L6: return "L6";
        case LemmaId::coverage: return "coverage";
        case LemmaId::domination: return "domination";
    }
    return "unknown";
}

/// One evaluated point: its coordinates, the compared values and what was
/// being checked.
struct ScanPoint {
    std::vector<double> point;
    std::vector<double> values;
    std::string check;

    friend bool operator==(const ScanPoint&, const ScanPoint&) = default;
};

struct ScanReport {
    LemmaId lemma_id = LemmaId::L1;
    std::string grid_description;
    std::size_t points_checked = 0;
    /// Smallest signed margin seen; positive means every inequality held
    /// strictly.
    double min_margin = std::numeric_limits<double>::infinity();
    std::vector<ScanPoint> violations;
    /// Per-point results kept for statistical checks (empty for grid scans).
    std::vector<ScanPoint> measurements;

    bool passed() const noexcept { return violations.empty(); }

    friend bool operator==(const ScanReport&, const ScanReport&) = default;
};

namespace detail {

/// Records one inequality check. margin is lhs - rhs of "lhs > rhs" (or
/// "lhs >= rhs"); the point is a violation when margin < -tolerance or NaN.
inline void record(ScanReport& r, double margin, double tolerance, std::vector<double> point,
                   std::vector<double> values, std::string_view check) {
    ++r.points_checked;
    r.min_margin = std::min(r.min_margin, margin);
    if (!(margin >= -tolerance)) {
        r.violations.push_back(ScanPoint{std::move(point), std::move(values), std::string(check)});
    }
}

/// Points lo + offset, lo + offset + step, ... up to hi - offset.
inline std::vector<double> open_interval_grid(double lo, double hi, double step, double offset) {
    std::vector<double> pts;
    const double first = lo + offset;
    const double last = hi - offset;
    if (last < first) return pts;
    const auto count = static_cast<std::size_t>(std::floor((last - first) / step + 1e-9)) + 1;
    pts.reserve(count);
    for (std::size_t k = 0; k < count; ++k) pts.push_back(first + static_cast<double>(k) * step);
    return pts;
}

inline std::string describe_grid(std::string_view what, std::span<const double> eps, double step,
                                 double offset) {
    std::ostringstream os;
    os << what << "; eps in {";
    for (std::size_t i = 0; i < eps.size(); ++i) os << (i ? ", " : "") << eps[i];
    os << "}; mu step " << step << ", endpoint offset " << offset;
    return os.str();
}

/// Monotonicity of f on a grid, checked by consecutive differences and by
/// the sign of the supplied derivative. sign = +1 for increasing, -1 for
/// decreasing.
inline void scan_monotone(ScanReport& r, double eps, const std::vector<double>& grid, int sign,
                          const std::function<double(double)>& f,
                          const std::function<double(double)>& df, double tolerance,
                          std::string_view label) {
    if (grid.empty()) return;
    double prev = f(grid[0]);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double mu = grid[k];
        const double slope = df(mu);
        record(r, sign * slope, tolerance, {eps, mu}, {slope}, std::string(label) + " derivative sign");
        if (k > 0) {
            const double cur = f(mu);
            record(r, sign * (cur - prev), tolerance, {eps, grid[k - 1], mu}, {prev, cur},
                   std::string(label) + " consecutive difference");
            prev = cur;
        }
    }
}

}  // namespace detail

/// Grid for the L2/L3/L4 scans.
struct GridSpec {
    std::vector<double> eps_values;
    double step = 1e-3;
    double offset = 1e-3;
    double tolerance = 1e-12;
};

/// Scans one of the Hoeffding-exponent properties over a grid:
///
///   L2: g(eps,.) increases on (0, 1/2-eps), decreases on (1/2, 1-eps);
///       g(-eps,.) increases on (eps, 1/2), decreases on (1/2+eps, 1).
///   L3: g(eps,mu) > g(-eps,mu) on (eps, 1/2); the reverse on (1/2, 1-eps).
///   L4: mu -> g(eps mu, mu) decreases on (0, 1/(1+eps));
///       mu -> g(-eps mu, mu) decreases on (0, 1).
inline ScanReport lemma_scan(LemmaId id, const GridSpec& grid) {
    if (!(grid.step > 0.0) || !(grid.offset > 0.0) || !(grid.tolerance >= 0.0) || grid.eps_values.empty()) {
        throw std::invalid_argument("lemma_scan: malformed grid (need step > 0, offset > 0, eps values)");
    }
    ScanReport r;
    r.lemma_id = id;
    const double step = grid.step;
    const double off = grid.offset;
    const double tol = grid.tolerance;

    switch (id) {
        case LemmaId::L2:
        case LemmaId::L3:
            for (double eps : grid.eps_values) {
                if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("lemma_scan: L2/L3 need eps in (0, 1/2)");
            }
            break;
        case LemmaId::L4:
            for (double eps : grid.eps_values) {
                if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("lemma_scan: L4 needs eps in (0, 1)");
            }
            break;
        default:
            throw std::invalid_argument("lemma_scan: only L2, L3 and L4 are grid scans");
    }

    using detail::open_interval_grid;
    using detail::scan_monotone;
    if (id == LemmaId::L2) {
        r.grid_description = detail::describe_grid("monotonicity of g(+-eps, mu) in mu", grid.eps_values, step, off);
        for (double eps : grid.eps_values) {
            auto gp = [eps](double mu) { return hoeffding_exponent(eps, mu); };
            auto dgp = [eps](double mu) { return hoeffding_exponent_dmu(eps, mu); };
            auto gm = [eps](double mu) { return hoeffding_exponent(-eps, mu); };
            auto dgm = [eps](double mu) { return hoeffding_exponent_dmu(-eps, mu); };
            scan_monotone(r, eps, open_interval_grid(0.0, 0.5 - eps, step, off), +1, gp, dgp, tol,
                          "g(eps,mu) increasing on (0,1/2-eps)");
            scan_monotone(r, eps, open_interval_grid(0.5, 1.0 - eps, step, off), -1, gp, dgp, tol,
                          "g(eps,mu) decreasing on (1/2,1-eps)");
            scan_monotone(r, eps, open_interval_grid(eps, 0.5, step, off), +1, gm, dgm, tol,
                          "g(-eps,mu) increasing on (eps,1/2)");
            scan_monotone(r, eps, open_interval_grid(0.5 + eps, 1.0, step, off), -1, gm, dgm, tol,
                          "g(-eps,mu) decreasing on (1/2+eps,1)");
        }
    } else if (id == LemmaId::L3) {
        r.grid_description = detail::describe_grid("g(eps,mu) versus g(-eps,mu)", grid.eps_values, step, off);
        for (double eps : grid.eps_values) {
            for (double mu : open_interval_grid(eps, 0.5, step, off)) {
                const double a = hoeffding_exponent(eps, mu);
                const double b = hoeffding_exponent(-eps, mu);
                detail::record(r, a - b, tol, {eps, mu}, {a, b}, "g(eps,mu) > g(-eps,mu) on (eps,1/2)");
            }
            for (double mu : open_interval_grid(0.5, 1.0 - eps, step, off)) {
                const double a = hoeffding_exponent(eps, mu);
                const double b = hoeffding_exponent(-eps, mu);
                detail::record(r, b - a, tol, {eps, mu}, {a, b}, "g(eps,mu) < g(-eps,mu) on (1/2,1-eps)");
            }
        }
    } else {
        r.grid_description = detail::describe_grid("monotonicity of g(+-eps mu, mu)", grid.eps_values, step, off);
        for (double eps : grid.eps_values) {
            auto up = [eps](double mu) { return hoeffding_exponent(eps * mu, mu); };
            auto dup = [eps](double mu) {
                return hoeffding_exponent_dmu(eps * mu, mu) + eps * hoeffding_exponent_deps(eps * mu, mu);
            };
            auto down = [eps](double mu) { return hoeffding_exponent(-eps * mu, mu); };
            auto ddown = [eps](double mu) {
                return hoeffding_exponent_dmu(-eps * mu, mu) - eps * hoeffding_exponent_deps(-eps * mu, mu);
            };
            scan_monotone(r, eps, open_interval_grid(0.0, 1.0 / (1.0 + eps), step, off), -1, up, dup, tol,
                          "g(eps mu,mu) decreasing on (0,1/(1+eps))");
            scan_monotone(r, eps, open_interval_grid(0.0, 1.0, step, off), -1, down, ddown, tol,
                          "g(-eps mu,mu) decreasing on (0,1)");
        }
    }
    return r;
}

/// Hoeffding bounds against exact binomial tails at `count` random
/// (n <= max_n, mu, eps) triples. No tolerance: the bound must dominate.
inline ScanReport lemma1_check(std::size_t count, std::uint64_t max_n, std::uint64_t seed) {
    if (count == 0 || max_n == 0) throw std::invalid_argument("lemma1_check: count and max_n must be positive");
    ScanReport r;
    r.lemma_id = LemmaId::L1;
    r.grid_description = std::to_string(count) + " random triples, n in [1, " + std::to_string(max_n) +
                         "], mu in (0.001, 0.999), seed " + std::to_string(seed);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> pick_n(1, max_n);
    std::uniform_real_distribution<double> pick_mu(0.001, 0.999);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t n = pick_n(rng);
        const double mu = pick_mu(rng);
        const double eps = unit(rng) * std::max(mu, 1.0 - mu);
        const double nd = static_cast<double>(n);
        if (eps > 0.0 && eps < 1.0 - mu) {
            const double bound = upper_tail_bound(n, eps, mu);
            const double tail = binomial_mean_at_least(n, mu, mu + eps);
            detail::record(r, bound - tail, 0.0, {nd, mu, eps}, {bound, tail}, "exp(n g(eps,mu)) >= Pr{mu_hat >= mu+eps}");
        }
        if (eps > 0.0 && eps < mu) {
            const double bound = lower_tail_bound(n, eps, mu);
            const double tail = binomial_mean_at_most(n, mu, mu - eps);
            detail::record(r, bound - tail, 0.0, {nd, mu, eps}, {bound, tail}, "exp(n g(-eps,mu)) >= Pr{mu_hat <= mu-eps}");
        }
    }
    return r;
}

/// Uniform worst-case bounds against exact binomial tails:
///   L5: Pr{mu_hat <= mu - eps_a}         <= exp(n g(-eps_a, eps_a/eps_r)), 0 < mu <= eps_a/eps_r;
///   L6: Pr{mu_hat >= (1 + eps_r) mu}     <= exp(n g( eps_a, eps_a/eps_r)), eps_a/eps_r < mu < 1.
inline ScanReport lemma56_check(const ErrorSpec& spec, LemmaId which, std::span<const double> mu_grid,
                                std::uint64_t n) {
    if (which != LemmaId::L5 && which != LemmaId::L6) throw std::invalid_argument("lemma56_check: expected L5 or L6");
    if (n == 0) throw std::invalid_argument("lemma56_check: n must be positive");
    if (mu_grid.empty()) throw std::invalid_argument("lemma56_check: empty mu grid");
    validate_spec(spec.eps_a, spec.eps_r, spec.delta);
    const double pivot = spec.worst_case_mean();

    ScanReport r;
    r.lemma_id = which;
    std::ostringstream os;
    os << (which == LemmaId::L5 ? "lower tail at mu <= eps_a/eps_r" : "relative upper tail at mu > eps_a/eps_r")
       << "; eps_a " << spec.eps_a << ", eps_r " << spec.eps_r << ", n " << n << ", " << mu_grid.size()
       << " mu points";
    r.grid_description = os.str();

    const double nd = static_cast<double>(n);
    if (which == LemmaId::L5) {
        const double bound = std::exp(nd * hoeffding_exponent(-spec.eps_a, pivot));
        for (double mu : mu_grid) {
            if (!(mu > 0.0 && mu <= pivot)) {
                throw std::invalid_argument("lemma56_check: L5 point mu = " + detail::fmt(mu) + " outside (0, eps_a/eps_r]");
            }
            const double tail = binomial_mean_at_most(n, mu, mu - spec.eps_a);
            detail::record(r, bound - tail, 0.0, {mu}, {bound, tail}, "Pr{mu_hat <= mu - eps_a} <= uniform bound");
        }
    } else {
        const double bound = std::exp(nd * hoeffding_exponent(spec.eps_a, pivot));
        for (double mu : mu_grid) {
            if (!(mu > pivot && mu < 1.0)) {
                throw std::invalid_argument("lemma56_check: L6 point mu = " + detail::fmt(mu) + " outside (eps_a/eps_r, 1)");
            }
            const double tail = binomial_mean_at_least(n, mu, (1.0 + spec.eps_r) * mu);
            detail::record(r, bound - tail, 0.0, {mu}, {bound, tail}, "Pr{mu_hat >= (1+eps_r) mu} <= uniform bound");
        }
    }
    return r;
}

/// `count` evenly spaced points inside each lemma's mu range: for L5,
/// (eps_a/eps_r) k/count for k = 1..count (the right endpoint is included);
/// for L6, eps_a/eps_r + (1 - eps_a/eps_r) k/(count+1).
inline std::vector<double> lemma56_grid(const ErrorSpec& spec, LemmaId which, std::size_t count) {
    if (which != LemmaId::L5 && which != LemmaId::L6) throw std::invalid_argument("lemma56_grid: expected L5 or L6");
    const double pivot = spec.worst_case_mean();
    std::vector<double> grid;
    for (std::size_t k = 1; k <= count; ++k) {
        const double t = static_cast<double>(k);
        grid.push_back(which == LemmaId::L5 ? pivot * t / static_cast<double>(count)
                                            : pivot + (1.0 - pivot) * t / static_cast<double>(count + 1));
    }
    return grid;
}

/// Three-sigma allowance above delta for an observed violation rate.
inline double coverage_slack(double delta, std::size_t trials) {
    return 3.0 * std::sqrt(delta * (1.0 - delta) / static_cast<double>(trials));
}

/// Runs `trials` planned estimates on Bernoulli(mu) sources for each mu and
/// counts misses of the mixed error criterion. Passes when every miss rate
/// is at most delta + coverage_slack(delta, trials).
///
/// Trial t at grid index m uses seed derive_seed(derive_seed(seed, m), t).
inline ScanReport coverage_experiment(const ErrorSpec& spec, std::span<const double> mu_grid,
                                      std::size_t trials, std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("coverage_experiment: trials must be positive");
    if (mu_grid.empty()) throw std::invalid_argument("coverage_experiment: empty mu grid");
    for (double mu : mu_grid) {
        if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("coverage_experiment: mu outside (0,1)");
    }
    const SamplePlan plan = minimum_sample_size(validate_spec(spec.eps_a, spec.eps_r, spec.delta));
    const double limit = spec.delta + coverage_slack(spec.delta, trials);

    ScanReport r;
    r.lemma_id = LemmaId::coverage;
    std::ostringstream os;
    os << "Bernoulli coverage; eps_a " << spec.eps_a << ", eps_r " << spec.eps_r << ", delta " << spec.delta
       << ", n " << plan.n << ", " << trials << " trials per mu, seed " << seed;
    r.grid_description = os.str();

    for (std::size_t m = 0; m < mu_grid.size(); ++m) {
        const double mu = mu_grid[m];
        const std::uint64_t mu_seed = derive_seed(seed, m);
        std::size_t misses = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            BernoulliSource source(mu, derive_seed(mu_seed, t));
            const Certificate c = estimate_with_plan(source, spec);
            if (!within_mixed_criterion(c.mu_hat, mu, spec.eps_a, spec.eps_r)) ++misses;
        }
        const double rate = static_cast<double>(misses) / static_cast<double>(trials);
        ScanPoint p{{mu}, {rate, limit, static_cast<double>(misses)}, "miss rate <= delta + 3 sigma"};
        r.measurements.push_back(p);
        detail::record(r, limit - rate, 0.0, p.point, p.values, p.check);
    }
    return r;
}

/// Default scenario distribution for each registry model.
inline ScenarioDistribution default_distribution(std::string_view model_name) {
    if (model_name == "quadratic_well") return ScenarioDistribution::normal(0.0, 0.5);
    if (model_name == "uniform_gap") return ScenarioDistribution::uniform(0.0, 1.0);
    return ScenarioDistribution::normal(0.0, 1.0);
}

struct DominationSettings {
    double log_lambda_min = std::log(1e-3);
    double log_lambda_max = std::log(5.0);
    double theta_min = -1.5;
    double theta_max = 1.5;
};

/// At `points` random (lambda, theta): every scenario satisfies
/// exp(-lambda Y) >= 1{Y <= 0} exactly, and the empirical moment is at least
/// the fresh-sample failure fraction minus three binomial standard errors.
/// Both the scenario set and each fresh sample hold minimum_sample_size(spec)
/// draws.
template <performance_model Model>
ScanReport domination_experiment(const Model& model, const ScenarioDistribution& dist, const ErrorSpec& spec,
                                 std::size_t points, std::uint64_t seed, const DominationSettings& ds = {}) {
    if (points == 0) throw std::invalid_argument("domination_experiment: points must be positive");
    const std::size_t n = static_cast<std::size_t>(scenario_sample_size(spec));
    DistributionSource scenario_source(dist, model.dim_delta(), derive_seed(seed, 0));
    const ChernoffObjective<Model> obj(model, ScenarioSet::draw(scenario_source, n));

    ScanReport r;
    r.lemma_id = LemmaId::domination;
    std::ostringstream os;
    os << "Chernoff kernel domination; " << to_string(dist.kind) << "(" << dist.p1 << ", " << dist.p2 << ") scenarios, n "
       << n << ", " << points << " random (lambda, theta), seed " << seed;
    r.grid_description = os.str();

    std::mt19937_64 rng(derive_seed(seed, 1));
    std::uniform_real_distribution<double> pick_log_lambda(ds.log_lambda_min, ds.log_lambda_max);
    std::uniform_real_distribution<double> pick_theta(ds.theta_min, ds.theta_max);
    for (std::size_t k = 0; k < points; ++k) {
        const double lambda = std::exp(pick_log_lambda(rng));
        std::vector<double> theta(model.dim_theta());
        for (double& t : theta) t = pick_theta(rng);

        std::vector<double> point{lambda};
        point.insert(point.end(), theta.begin(), theta.end());

        // pointwise kernel inequality, exact
        const std::vector<double> y = performance_values(obj, theta);
        std::size_t kernel_failures = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double kernel = detail::chernoff_kernel(lambda, y[i], i);
            const double indicator = y[i] <= 0.0 ? 1.0 : 0.0;
            if (!(kernel >= indicator)) {
                ++kernel_failures;
                r.violations.push_back(ScanPoint{point, {kernel, indicator, static_cast<double>(i)},
                                                 "exp(-lambda Y_i) >= 1{Y_i <= 0}"});
            }
        }
        r.points_checked += y.size();

        // statistical domination against a fresh sample
        DistributionSource fresh(dist, model.dim_delta(), derive_seed(seed, 2 + k));
        std::size_t failures = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (model.evaluate(theta, *fresh.next()) <= 0.0) ++failures;
        }
        const double p_hat = static_cast<double>(failures) / static_cast<double>(n);
        const double se = std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
        const double moment = empirical_moment(obj, lambda, theta);
        ScanPoint p{point, {moment, p_hat, se, static_cast<double>(kernel_failures)},
                    "empirical moment >= p_hat - 3 se"};
        r.measurements.push_back(p);
        detail::record(r, moment - (p_hat - 3.0 * se), 0.0, p.point, p.values, p.check);
    }
    return r;
}

/// Registry-model convenience overload using default_distribution().
inline ScanReport domination_experiment(std::string_view model_name, const ErrorSpec& spec, std::size_t points,
                                        std::uint64_t seed, const ModelParams& params = {}) {
    const PerformanceModel model = make_registry_model(model_name, params);
    return domination_experiment(model, default_distribution(model_name), spec, points, seed);
}

/// Text rendering of a report.
inline std::string describe(const ScanReport& r) {
    std::ostringstream os;
    os.precision(10);
    os << "[" << (r.passed() ? "PASS" : "FAIL") << "] " << to_string(r.lemma_id) << ": " << r.grid_description
       << "\n  points checked: " << r.points_checked << ", min margin: " << r.min_margin
       << ", violations: " << r.violations.size() << "\n";
    for (const auto& m : r.measurements) {
        os << "  " << m.check << " at (";
        for (std::size_t i = 0; i < m.point.size(); ++i) os << (i ? ", " : "") << m.point[i];
        os << "): ";
        for (std::size_t i = 0; i < m.values.size(); ++i) os << (i ? ", " : "") << m.values[i];
        os << "\n";
    }
    const std::size_t shown = std::min<std::size_t>(r.violations.size(), 10);
    for (std::size_t k = 0; k < shown; ++k) {
        const auto& v = r.violations[k];
        os << "  violation: " << v.check << " at (";
        for (std::size_t i = 0; i < v.point.size(); ++i) os << (i ? ", " : "") << v.point[i];
        os << ")\n";
    }
    return os.str();
}

}  // namespace probcert
