// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Tolerances and seeds are fixed below.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "probcert/chernoff_opt.hpp"
#include "probcert/json_io.hpp"
#include "probcert/verification.hpp"

using namespace probcert;

namespace {

constexpr std::uint64_t kSeed = 20080201;
constexpr double kScanTolerance = 1e-12;
constexpr double kGradientRelTol = 1e-5;
constexpr std::size_t kCoverageTrials = 2000;
constexpr std::size_t kDominationPoints = 20;
constexpr std::size_t kOptimizerScenarios = 5000;
constexpr std::size_t kCertificationRuns = 100;
constexpr std::size_t kCertificationRequired = 95;

struct Outcome {
    bool passed = false;
    std::string detail;
};

const ErrorSpec kSpec{0.05, 0.2, 0.05};

// 1 -------------------------------------------------------------------------
Outcome sample_size_formula() {
    std::ostringstream os;
    bool ok = true;
    for (const auto& [a, r, d, expected] : {std::tuple{"0.05", "0.2", "0.05", 577ull},
                                            std::tuple{"0.02", "0.2", "0.05", 1755ull}}) {
        const oracle::hp ha(a), hr(r), hd(d);
        const std::uint64_t direct = oracle::least_integer_above(oracle::sample_size_rhs(ha, hr, hd));
        const std::uint64_t via_g = oracle::least_integer_above(oracle::sample_size_rhs_via_exponent(ha, hr, hd));
        const std::uint64_t n = minimum_sample_size(validate_spec(std::stod(a), std::stod(r), std::stod(d))).n;
        ok = ok && n == expected && direct == expected && via_g == expected;
        os << "(" << a << "," << r << "," << d << "): n=" << n << " oracle " << direct << "/" << via_g << "; ";
    }
    return {ok, os.str()};
}

// 2 -------------------------------------------------------------------------
Outcome plan_tightness() {
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t failures = 0;
    for (int i = 0; i < 100; ++i) {
        const double eps_r = 0.02 + 0.96 * unit(rng);
        const double eps_a = 0.5 / (1.0 / eps_r + 1.0) * (0.05 + 0.95 * unit(rng));
        const double delta = 0.999 * std::exp(std::log(1e-6) * unit(rng));
        const SamplePlan plan = minimum_sample_size(validate_spec(eps_a, eps_r, delta));
        const bool below = achieved_confidence(plan.n, eps_a, eps_r).raw < delta;
        const bool tight = plan.n == 1 || achieved_confidence(plan.n - 1, eps_a, eps_r).raw >= delta;
        if (!(below && tight)) ++failures;
    }
    return {failures == 0, "100 random specs, " + std::to_string(failures) + " failures"};
}

// 3 -------------------------------------------------------------------------
ScanReport coverage_run() {
    const std::vector<double> grid{0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95};
    return coverage_experiment(kSpec, grid, kCoverageTrials, kSeed);
}

Outcome coverage(const ScanReport& r) {
    std::ostringstream os;
    os << "limit " << (kSpec.delta + coverage_slack(kSpec.delta, kCoverageTrials)) << ", rates";
    for (const auto& m : r.measurements) os << " " << m.values[0];
    return {r.passed() && r.measurements.size() == 7, os.str()};
}

// 4 -------------------------------------------------------------------------
Outcome lemma1() {
    const ScanReport r = lemma1_check(1000, 200, kSeed);
    std::ostringstream os;
    os << r.points_checked << " tail comparisons, min margin " << r.min_margin;
    return {r.passed(), os.str()};
}

// 5 -------------------------------------------------------------------------
Outcome scans() {
    std::ostringstream os;
    bool ok = true;
    const std::vector<double> eps23{0.05, 0.1, 0.2, 0.3};
    const std::vector<double> eps4{0.1, 0.3, 0.5, 0.9};
    for (auto [id, eps] : {std::pair{LemmaId::L2, eps23}, {LemmaId::L3, eps23}, {LemmaId::L4, eps4}}) {
        GridSpec g{eps};
        g.step = 1e-3;
        g.offset = 1e-3;
        g.tolerance = kScanTolerance;
        const ScanReport r = lemma_scan(id, g);
        ok = ok && r.passed();
        os << to_string(id) << ": " << r.points_checked << " checks, " << r.violations.size() << " violations; ";
    }
    return {ok, os.str()};
}

// 6 -------------------------------------------------------------------------
Outcome uniform_bounds() {
    std::ostringstream os;
    bool ok = true;
    for (LemmaId id : {LemmaId::L5, LemmaId::L6}) {
        const ScanReport r = lemma56_check(kSpec, id, lemma56_grid(kSpec, id, 10), 577);
        ok = ok && r.passed() && r.points_checked == 10;
        os << to_string(id) << " min margin " << r.min_margin << "; ";
    }
    return {ok, os.str()};
}

// 7 -------------------------------------------------------------------------
ScanReport domination_run() { return domination_experiment("quadratic_well", kSpec, kDominationPoints, kSeed); }

Outcome domination(const ScanReport& r) {
    std::ostringstream os;
    os << r.measurements.size() << " (lambda, theta) points, " << r.points_checked << " checks, min margin "
       << r.min_margin;
    return {r.passed() && r.measurements.size() == kDominationPoints, os.str()};
}

// 8 -------------------------------------------------------------------------
double relative_gap(double analytic, double fd) {
    const double scale = std::max({std::abs(analytic), std::abs(fd), 1e-300});
    return std::abs(analytic - fd) / scale;
}

template <class Model>
double worst_gradient_gap(const Model& model, const ScenarioDistribution& dist, std::mt19937_64& rng, int points) {
    DistributionSource src(dist, model.dim_delta(), rng());
    const ChernoffObjective<Model> obj(model, ScenarioSet::draw(src, 500));
    std::uniform_real_distribution<double> log_lambda(std::log(0.05), std::log(3.0));
    std::uniform_real_distribution<double> pick_theta(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < points; ++k) {
        const double lambda = std::exp(log_lambda(rng));
        std::vector<double> theta(model.dim_theta());
        for (double& t : theta) t = pick_theta(rng);
        const MomentGradient g = empirical_moment_gradient(obj, lambda, theta, false);

        const double hl = 1e-6 * lambda;
        const double fd_l = (empirical_moment(obj, lambda + hl, theta) - empirical_moment(obj, lambda - hl, theta)) /
                            (2 * hl);
        worst = std::max(worst, relative_gap(g.d_lambda, fd_l));
        for (std::size_t j = 0; j < theta.size(); ++j) {
            const double h = 1e-6 * (1.0 + std::abs(theta[j]));
            std::vector<double> up = theta, down = theta;
            up[j] += h;
            down[j] -= h;
            const double fd = (empirical_moment(obj, lambda, up) - empirical_moment(obj, lambda, down)) / (2 * h);
            worst = std::max(worst, relative_gap(g.d_theta[j], fd));
        }
    }
    return worst;
}

Outcome gradient_fidelity() {
    std::mt19937_64 rng(kSeed);
    const double qw = worst_gradient_gap(make_registry_model("quadratic_well"),
                                         default_distribution("quadratic_well"), rng, 20);
    const double ug =
        worst_gradient_gap(make_registry_model("uniform_gap"), default_distribution("uniform_gap"), rng, 15);
    const double af = worst_gradient_gap(make_registry_model("affine", ModelParams{{1.0, -0.5}, {1.0, 0.5}, 0.5}),
                                         default_distribution("affine"), rng, 15);
    std::ostringstream os;
    os << "50 points, worst relative gap: quadratic_well " << qw << ", uniform_gap " << ug << ", affine " << af;
    return {qw <= kGradientRelTol && ug <= kGradientRelTol && af <= kGradientRelTol, os.str()};
}

// 9 -------------------------------------------------------------------------
struct OptimizerRun {
    OptimizationOutcome outcome;
    std::vector<Certificate> certificates;
};

OptimizerRun optimizer_run() {
    NormalScenarioSource scen(0.0, 0.5, 1, derive_seed(kSeed, 0));
    const ChernoffObjective obj(QuadraticWellModel{}, ScenarioSet::draw(scen, kOptimizerScenarios));
    OptimizationSettings s;
    s.theta0 = {0.5};
    OptimizerRun run{minimize(obj, s), {}};
    const std::uint64_t cert_base = derive_seed(kSeed, 1);
    for (std::size_t k = 0; k < kCertificationRuns; ++k) {
        NormalScenarioSource fresh(0.0, 0.5, 1, derive_seed(cert_base, k));
        run.certificates.push_back(certify_probability(QuadraticWellModel{}, run.outcome.theta_star, kSpec, fresh));
    }
    return run;
}

Outcome optimizer(const OptimizerRun& run) {
    const auto& o = run.outcome;
    bool monotone = true;
    for (std::size_t k = 1; k < o.objective_trace.size(); ++k) {
        monotone = monotone && o.objective_trace[k] <= o.objective_trace[k - 1];
    }
    const double p0 = 2.0 * oracle::phi(-2.0);
    std::size_t consistent = 0;
    for (const auto& c : run.certificates) {
        if (within_mixed_criterion(c.mu_hat, p0, kSpec.eps_a, kSpec.eps_r)) ++consistent;
    }
    std::ostringstream os;
    os << "theta* " << o.theta_star[0] << ", lambda* " << o.lambda_star << ", " << o.iterations << " iters ("
       << to_string(o.termination) << "), trace " << (monotone ? "non-increasing" : "INCREASES") << ", "
       << consistent << "/" << run.certificates.size() << " certificates consistent with p(0) = " << p0;
    return {monotone && std::abs(o.theta_star[0]) <= 0.15 && consistent >= kCertificationRequired, os.str()};
}

// 10 ------------------------------------------------------------------------
std::string fingerprint(const ScanReport& r) { return json(r).dump(); }

std::string fingerprint(const OptimizerRun& r) {
    json j = r.outcome;
    j["certificates"] = r.certificates;
    return j.dump();
}

Outcome determinism(const ScanReport& cov, const ScanReport& dom, const OptimizerRun& opt) {
    const bool c = fingerprint(cov) == fingerprint(coverage_run());
    const bool d = fingerprint(dom) == fingerprint(domination_run());
    const bool o = fingerprint(opt) == fingerprint(optimizer_run());
    std::ostringstream os;
    os << "coverage " << (c ? "identical" : "DIFFERS") << ", domination " << (d ? "identical" : "DIFFERS")
       << ", optimizer " << (o ? "identical" : "DIFFERS");
    return {c && d && o, os.str()};
}

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& check) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = check();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!out.passed) ++failures;
    std::printf("[%s] %2d %-26s %s (%.2fs)\n", out.passed ? "PASS" : "FAIL", id, name, out.detail.c_str(), secs);
    std::fflush(stdout);
}

}  // namespace

int main() {
    ScanReport cov, dom;
    OptimizerRun opt;

    report(1, "sample-size formula", sample_size_formula);
    report(2, "plan tightness", plan_tightness);
    report(3, "coverage", [&] { cov = coverage_run(); return coverage(cov); });
    report(4, "Hoeffding vs binomial", lemma1);
    report(5, "exponent scans", scans);
    report(6, "uniform worst-case bounds", uniform_bounds);
    report(7, "Chernoff domination", [&] { dom = domination_run(); return domination(dom); });
    report(8, "gradient fidelity", gradient_fidelity);
    report(9, "optimizer behaviour", [&] { opt = optimizer_run(); return optimizer(opt); });
    report(10, "determinism", [&] { return determinism(cov, dom, opt); });

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
