#pragma once

// Performance models Y(theta, Delta) and the named model registry.
//
// A model is anything with dim_theta(), dim_delta() and evaluate(theta, Delta).
// An optional gradient_theta(theta, Delta, out) writes dY/dtheta into out.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace probcert {

template <class M>
concept performance_model = requires(const M& m, std::span<const double> theta,
                                     std::span<const double> delta) {
    { m.dim_theta() } -> std::convertible_to<std::size_t>;
    { m.dim_delta() } -> std::convertible_to<std::size_t>;
    { m.evaluate(theta, delta) } -> std::convertible_to<double>;
};

template <class M>
concept differentiable_model =
    performance_model<M> && requires(const M& m, std::span<const double> theta,
                                     std::span<const double> delta, std::span<double> out) {
        m.gradient_theta(theta, delta, out);
    };

/// True when m can supply an analytic theta-gradient. Type-erased models
/// decide at run time through has_gradient().
template <performance_model M>
bool provides_gradient(const M& m) {
    if constexpr (requires { { m.has_gradient() } -> std::convertible_to<bool>; }) {
        return m.has_gradient();
    } else {
        return differentiable_model<M>;
    }
}

/// Y = a . theta + b . Delta + c
class AffineModel {
public:
    AffineModel(std::vector<double> a, std::vector<double> b, double c)
        : a_(std::move(a)), b_(std::move(b)), c_(c) {
        if (a_.empty() || b_.empty()) throw std::invalid_argument("AffineModel: empty coefficient vector");
    }

    std::size_t dim_theta() const noexcept { return a_.size(); }
    std::size_t dim_delta() const noexcept { return b_.size(); }

    double evaluate(std::span<const double> theta, std::span<const double> delta) const {
        return std::inner_product(a_.begin(), a_.end(), theta.begin(), 0.0) +
               std::inner_product(b_.begin(), b_.end(), delta.begin(), 0.0) + c_;
    }

    void gradient_theta(std::span<const double>, std::span<const double>,
                        std::span<double> out) const {
        std::copy(a_.begin(), a_.end(), out.begin());
    }

    const std::vector<double>& a() const noexcept { return a_; }
    const std::vector<double>& b() const noexcept { return b_; }
    double c() const noexcept { return c_; }

private:
    std::vector<double> a_;
    std::vector<double> b_;
    double c_;
};

/// Y = 1 - (theta_1 - Delta_1)^2; fails when |theta_1 - Delta_1| >= 1.
struct QuadraticWellModel {
    std::size_t dim_theta() const noexcept { return 1; }
    std::size_t dim_delta() const noexcept { return 1; }

    double evaluate(std::span<const double> theta, std::span<const double> delta) const {
        const double d = theta[0] - delta[0];
        return 1.0 - d * d;
    }

    void gradient_theta(std::span<const double> theta, std::span<const double> delta,
                        std::span<double> out) const {
        out[0] = -2.0 * (theta[0] - delta[0]);
    }
};

/// Y = theta_1 - Delta_1
struct UniformGapModel {
    std::size_t dim_theta() const noexcept { return 1; }
    std::size_t dim_delta() const noexcept { return 1; }

    double evaluate(std::span<const double> theta, std::span<const double> delta) const {
        return theta[0] - delta[0];
    }

    void gradient_theta(std::span<const double>, std::span<const double>,
                        std::span<double> out) const {
        out[0] = 1.0;
    }
};

/// Type-erased model. The gradient is optional.
class PerformanceModel {
public:
    using Evaluate = std::function<double(std::span<const double>, std::span<const double>)>;
    using Gradient =
        std::function<void(std::span<const double>, std::span<const double>, std::span<double>)>;

    PerformanceModel(std::string name, std::size_t dim_theta, std::size_t dim_delta,
                     Evaluate evaluate, Gradient gradient = {})
        : name_(std::move(name)), dim_theta_(dim_theta), dim_delta_(dim_delta),
          evaluate_(std::move(evaluate)), gradient_(std::move(gradient)) {
        if (dim_theta_ == 0 || dim_delta_ == 0) throw std::invalid_argument("PerformanceModel: zero dimension");
        if (!evaluate_) throw std::invalid_argument("PerformanceModel: missing evaluate");
    }

    template <performance_model M>
    static PerformanceModel wrap(std::string name, M model) {
        Gradient grad;
        if constexpr (differentiable_model<M>) {
            grad = [model](std::span<const double> t, std::span<const double> d, std::span<double> out) {
                model.gradient_theta(t, d, out);
            };
        }
        const std::size_t dt = model.dim_theta();
        const std::size_t dd = model.dim_delta();
        return PerformanceModel(
            std::move(name), dt, dd,
            [model = std::move(model)](std::span<const double> t, std::span<const double> d) {
                return static_cast<double>(model.evaluate(t, d));
            },
            std::move(grad));
    }

    /// Same model with the analytic gradient removed.
    PerformanceModel without_gradient() const {
        return PerformanceModel(name_, dim_theta_, dim_delta_, evaluate_);
    }

    const std::string& name() const noexcept { return name_; }
    std::size_t dim_theta() const noexcept { return dim_theta_; }
    std::size_t dim_delta() const noexcept { return dim_delta_; }
    bool has_gradient() const noexcept { return static_cast<bool>(gradient_); }

    double evaluate(std::span<const double> theta, std::span<const double> delta) const {
        return evaluate_(theta, delta);
    }

    void gradient_theta(std::span<const double> theta, std::span<const double> delta,
                        std::span<double> out) const {
        if (!gradient_) throw std::logic_error("PerformanceModel '" + name_ + "' has no analytic gradient");
        gradient_(theta, delta, out);
    }

private:
    std::string name_;
    std::size_t dim_theta_;
    std::size_t dim_delta_;
    Evaluate evaluate_;
    Gradient gradient_;
};

/// Parameters for the registry's affine model; ignored by the others.
struct ModelParams {
    std::vector<double> a;
    std::vector<double> b;
    double c = 0.0;
};

inline const std::vector<std::string_view>& registry_model_names() {
    static const std::vector<std::string_view> names{"affine", "quadratic_well", "uniform_gap"};
    return names;
}

inline PerformanceModel make_registry_model(std::string_view name, const ModelParams& params = {}) {
    if (name == "affine") {
        return PerformanceModel::wrap("affine", AffineModel(params.a, params.b, params.c));
    }
    if (name == "quadratic_well") return PerformanceModel::wrap("quadratic_well", QuadraticWellModel{});
    if (name == "uniform_gap") return PerformanceModel::wrap("uniform_gap", UniformGapModel{});
    throw std::invalid_argument("unknown model '" + std::string(name) +
                                "' (expected affine, quadratic_well or uniform_gap)");
}

}  // namespace probcert
