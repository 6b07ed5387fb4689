#pragma once

// Hoeffding-exponent tail bounds for means of [0,1]-bounded i.i.d. samples
// and the sample-size rule for the mixed absolute/relative error criterion
//
//     Pr{ |mu_hat - mu| < eps_a  or  |mu_hat - mu| < eps_r * mu } > 1 - delta.
//
// Everything here is a pure function of its arguments.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "probcert/errors.hpp"

namespace probcert {

/// Mixed-criterion parameters. Construct through validate_spec(); a
/// default-constructed value is not meaningful.
struct ErrorSpec {
    double eps_a = 0.0;  ///< absolute error tolerance
    double eps_r = 0.0;  ///< relative error tolerance
    double delta = 0.0;  ///< risk

    /// eps_a / eps_r: the mean at which both tolerances coincide.
    double worst_case_mean() const noexcept { return eps_a / eps_r; }

    friend bool operator==(const ErrorSpec&, const ErrorSpec&) = default;
};

namespace detail {

inline bool in_open_unit(double x) noexcept { return x > 0.0 && x < 1.0; }

inline std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

inline std::vector<std::string> tolerance_violations(double eps_a, double eps_r) {
    std::vector<std::string> out;
    if (!in_open_unit(eps_a)) out.push_back("eps_a = " + fmt(eps_a) + " is not in (0,1)");
    if (!in_open_unit(eps_r)) out.push_back("eps_r = " + fmt(eps_r) + " is not in (0,1)");
    if (out.empty()) {
        const double lhs = eps_a / eps_r + eps_a;
        if (!(lhs <= 0.5)) {
            out.push_back("eps_a/eps_r + eps_a = " + fmt(lhs) + " exceeds 1/2");
        }
    }
    return out;
}

}  // namespace detail

/// Checks the tolerance pair alone (used where delta is an output).
inline void validate_tolerances(double eps_a, double eps_r) {
    auto violations = detail::tolerance_violations(eps_a, eps_r);
    if (!violations.empty()) throw SpecError(std::move(violations));
}

/// Builds an ErrorSpec, reporting every violated condition separately.
inline ErrorSpec validate_spec(double eps_a, double eps_r, double delta) {
    auto violations = detail::tolerance_violations(eps_a, eps_r);
    if (!detail::in_open_unit(delta)) {
        violations.push_back("delta = " + detail::fmt(delta) + " is not in (0,1)");
    }
    if (!violations.empty()) throw SpecError(std::move(violations));
    return ErrorSpec{eps_a, eps_r, delta};
}

/// Hoeffding exponent
///
///   g(eps, mu) = (mu+eps) ln(mu/(mu+eps)) + (1-mu-eps) ln((1-mu)/(1-mu-eps)),
///
/// for either sign of eps. Both logarithms are evaluated as -log1p(.) of a
/// small ratio so that the O(eps) parts cancel cleanly. Returns exactly 0
/// at eps == 0.
inline double hoeffding_exponent(double eps, double mu) {
    if (!detail::in_open_unit(mu)) {
        throw DomainError("hoeffding_exponent: mu = " + detail::fmt(mu) + " is not in (0,1)");
    }
    if (eps == 0.0) return 0.0;
    const double upper = mu + eps;
    const double lower = (1.0 - mu) - eps;
    if (!(upper > 0.0 && lower > 0.0)) {
        throw DomainError("hoeffding_exponent: mu + eps = " + detail::fmt(upper) +
                          " is not in (0,1)");
    }
    return -upper * std::log1p(eps / mu) - lower * std::log1p(-eps / (1.0 - mu));
}

/// Closed-form partial derivative of g(eps, mu) with respect to mu:
///   ln[mu(1-mu-eps) / ((mu+eps)(1-mu))] + eps/mu + eps/(1-mu).
inline double hoeffding_exponent_dmu(double eps, double mu) {
    (void)hoeffding_exponent(eps, mu);  // domain check
    if (eps == 0.0) return 0.0;
    return std::log1p(-eps / (1.0 - mu)) - std::log1p(eps / mu) + eps / mu + eps / (1.0 - mu);
}

/// Partial derivative of g(eps, mu) with respect to eps:
///   ln[mu(1-mu-eps) / ((mu+eps)(1-mu))].
inline double hoeffding_exponent_deps(double eps, double mu) {
    (void)hoeffding_exponent(eps, mu);
    if (eps == 0.0) return 0.0;
    return std::log1p(-eps / (1.0 - mu)) - std::log1p(eps / mu);
}

/// Bound on Pr{mu_hat >= mu + eps} for a mean of n samples in [0,1].
inline double upper_tail_bound(std::uint64_t n, double eps, double mu) {
    if (n == 0) throw DomainError("upper_tail_bound: n must be positive");
    if (!(eps > 0.0 && eps < 1.0 - mu && mu < 1.0 && mu > 0.0)) {
        throw DomainError("upper_tail_bound: requires 0 < eps < 1 - mu < 1 (eps = " +
                          detail::fmt(eps) + ", mu = " + detail::fmt(mu) + ")");
    }
    return std::exp(static_cast<double>(n) * hoeffding_exponent(eps, mu));
}

/// Bound on Pr{mu_hat <= mu - eps} for a mean of n samples in [0,1].
inline double lower_tail_bound(std::uint64_t n, double eps, double mu) {
    if (n == 0) throw DomainError("lower_tail_bound: n must be positive");
    if (!(eps > 0.0 && eps < mu && mu < 1.0)) {
        throw DomainError("lower_tail_bound: requires 0 < eps < mu < 1 (eps = " +
                          detail::fmt(eps) + ", mu = " + detail::fmt(mu) + ")");
    }
    return std::exp(static_cast<double>(n) * hoeffding_exponent(-eps, mu));
}

/// g(eps_a, eps_a/eps_r): the per-sample exponent at the worst-case mean.
/// Negative for every valid tolerance pair.
inline double worst_case_exponent(double eps_a, double eps_r) {
    validate_tolerances(eps_a, eps_r);
    return hoeffding_exponent(eps_a, eps_a / eps_r);
}

/// Right-hand side of the sample-size inequality, written out as
///
///   eps_r ln(2/delta) / [ (eps_a + eps_a eps_r) ln(1+eps_r)
///                        + (eps_r - eps_a - eps_a eps_r) ln(1 - eps_a eps_r/(eps_r - eps_a)) ].
inline double sample_size_bound(const ErrorSpec& spec) {
    validate_spec(spec.eps_a, spec.eps_r, spec.delta);
    const double a = spec.eps_a;
    const double r = spec.eps_r;
    const double denom =
        (a + a * r) * std::log1p(r) + (r - a - a * r) * std::log1p(-(a * r) / (r - a));
    if (!(denom > 0.0)) {
        throw DomainError("sample_size_bound: non-positive denominator " + detail::fmt(denom));
    }
    return r * std::log(2.0 / spec.delta) / denom;
}

/// Risk certified by n samples at tolerances (eps_a, eps_r).
struct Confidence {
    double delta = 1.0;       ///< min(raw, 1)
    double raw = 1.0;         ///< 2 exp(n g(eps_a, eps_a/eps_r)), uncapped
    bool guaranteed = false;  ///< false when raw >= 1 ("no guarantee")
};

namespace detail {

inline double raw_confidence(std::uint64_t n, double exponent) {
    return 2.0 * std::exp(static_cast<double>(n) * exponent);
}

}  // namespace detail

inline Confidence achieved_confidence(std::uint64_t n, double eps_a, double eps_r) {
    if (n == 0) throw DomainError("achieved_confidence: n must be positive");
    const double raw = detail::raw_confidence(n, worst_case_exponent(eps_a, eps_r));
    return Confidence{raw < 1.0 ? raw : 1.0, raw, raw < 1.0};
}

struct SamplePlan {
    std::uint64_t n = 0;
    ErrorSpec spec;
    double worst_case_exponent = 0.0;  ///< g(eps_a, eps_a/eps_r) < 0

    friend bool operator==(const SamplePlan&, const SamplePlan&) = default;
};

/// Smallest n with 2 exp(n g(eps_a, eps_a/eps_r)) < delta, i.e. the least
/// integer strictly above sample_size_bound(spec).
///
/// The closed form gives floor(rhs) + 1; the result is then nudged by whole
/// samples until it agrees exactly with achieved_confidence, so a rounding
/// error in rhs can never produce an n that fails to certify delta.
inline SamplePlan minimum_sample_size(const ErrorSpec& spec) {
    const double rhs = sample_size_bound(spec);
    const double w = worst_case_exponent(spec.eps_a, spec.eps_r);
    if (!(rhs < 9.0e15)) {
        throw DomainError("minimum_sample_size: sample size " + detail::fmt(rhs) +
                          " is not representable");
    }
    std::uint64_t n = static_cast<std::uint64_t>(std::floor(rhs)) + 1;
    while (!(detail::raw_confidence(n, w) < spec.delta)) ++n;
    while (n > 1 && detail::raw_confidence(n - 1, w) < spec.delta) --n;
    return SamplePlan{n, spec, w};
}

}  // namespace probcert
