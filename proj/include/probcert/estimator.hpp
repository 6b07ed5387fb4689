#pragma once

// Certified estimation of the mean of a [0,1]-bounded random variable.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <string_view>

#include "probcert/errors.hpp"
#include "probcert/sample_source.hpp"
#include "probcert/summation.hpp"
#include "probcert/tail_bounds.hpp"

namespace probcert {

enum class CertificateKind { planned, post_hoc };

constexpr std::string_view to_string(CertificateKind k) noexcept {
    return k == CertificateKind::planned ? "planned" : "post_hoc";
}

/// An estimate together with the guarantee it carries: with probability at
/// least 1 - delta_achieved, |mu_hat - mu| < eps_a or |mu_hat - mu| < eps_r mu.
/// The guarantee assumes the true mean lies in the open interval (0,1).
struct Certificate {
    double mu_hat = 0.0;
    std::uint64_t n = 0;
    double eps_a = 0.0;
    double eps_r = 0.0;
    double delta_achieved = 1.0;
    bool guaranteed = false;
    CertificateKind kind = CertificateKind::post_hoc;

    friend bool operator==(const Certificate&, const Certificate&) = default;
};

/// The mixed error event. Each disjunct is evaluated on its own.
inline bool within_mixed_criterion(double mu_hat, double mu, double eps_a, double eps_r) noexcept {
    const double err = std::abs(mu_hat - mu);
    const bool absolute_ok = err < eps_a;
    const bool relative_ok = err < eps_r * mu;
    return absolute_ok || relative_ok;
}

namespace detail {

inline void check_unit_value(double v, std::size_t index) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw SampleError("sample " + std::to_string(index) + " = " + fmt(v) +
                              " lies outside [0,1]",
                          index);
    }
}

inline Certificate make_certificate(double mu_hat, std::uint64_t n, double eps_a, double eps_r,
                                    CertificateKind kind) {
    const Confidence c = achieved_confidence(n, eps_a, eps_r);
    return Certificate{mu_hat, n, eps_a, eps_r, c.delta, c.guaranteed, kind};
}

}  // namespace detail

/// Draws exactly minimum_sample_size(spec).n values from source in one
/// sequential pass and certifies their mean.
template <sample_source Source>
Certificate estimate_with_plan(Source& source, const ErrorSpec& spec) {
    const SamplePlan plan = minimum_sample_size(spec);
    CompensatedSum acc;
    for (std::uint64_t i = 0; i < plan.n; ++i) {
        const auto v = source.next();
        if (!v) throw SourceExhausted(plan.n, i);
        detail::check_unit_value(*v, i);
        acc.add(*v);
    }
    return detail::make_certificate(acc.value() / static_cast<double>(plan.n), plan.n,
                                    spec.eps_a, spec.eps_r, CertificateKind::planned);
}

/// Certifies an already-collected batch; only delta is inferred.
inline Certificate estimate_from_batch(std::span<const double> values, double eps_a, double eps_r) {
    validate_tolerances(eps_a, eps_r);
    if (values.empty()) throw SampleError("estimate_from_batch: empty batch", 0);
    for (std::size_t i = 0; i < values.size(); ++i) detail::check_unit_value(values[i], i);
    return detail::make_certificate(stable_mean(values), values.size(), eps_a, eps_r,
                                    CertificateKind::post_hoc);
}

/// Human-readable rendering.
inline std::string describe(const Certificate& c) {
    std::ostringstream os;
    os.precision(10);
    os << "mu_hat          = " << c.mu_hat << "\n"
       << "n               = " << c.n << "\n"
       << "eps_a, eps_r    = " << c.eps_a << ", " << c.eps_r << "\n"
       << "delta_achieved  = " << c.delta_achieved;
    if (!c.guaranteed) os << "  (no guarantee)";
    os << "\nkind            = " << to_string(c.kind) << "\n";
    if (c.guaranteed) {
        os << "guarantee: Pr{|mu_hat - mu| < " << c.eps_a << " or |mu_hat - mu| < " << c.eps_r
           << " mu} > " << 1.0 - c.delta_achieved << "\n";
    }
    if (c.mu_hat == 0.0 || c.mu_hat == 1.0) {
        os << "note: the guarantee presumes the true mean lies in the open interval (0,1)\n";
    }
    return os.str();
}

}  // namespace probcert
