#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "probcert/errors.hpp"

namespace probcert {

/// Neumaier's variant of Kahan summation. The running compensation also
/// captures the low-order bits lost when an addend is larger than the
/// running sum, which plain Kahan summation misses.
///
/// Accumulation order is the call order, so results are bit-reproducible.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            compensation_ += (sum_ - t) + x;
        } else {
            compensation_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    CompensatedSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }

    double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

inline double compensated_sum(std::span<const double> values) noexcept {
    CompensatedSum acc;
    for (double v : values) acc.add(v);
    return acc.value();
}

/// Arithmetic mean via compensated summation.
inline double stable_mean(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("stable_mean: empty input");
    return compensated_sum(values) / static_cast<double>(values.size());
}

}  // namespace probcert
