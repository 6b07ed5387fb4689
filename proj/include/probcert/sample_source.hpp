#pragma once

// Seeded sample sources. A sample source yields scalars that should lie in
// [0,1] (the estimator checks, it never clamps); a scenario source yields
// real vectors (draws of the random input of a performance model).
//
// Every source is single-owner and fully determined by its seed.

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace probcert {

template <class S>
concept sample_source = requires(S& s, const S& cs) {
    { s.next() } -> std::same_as<std::optional<double>>;
    { cs.draws_made() } -> std::convertible_to<std::size_t>;
};

template <class S>
concept scenario_source = requires(S& s, const S& cs) {
    { s.next() } -> std::same_as<std::optional<std::vector<double>>>;
    { cs.dimension() } -> std::convertible_to<std::size_t>;
    { cs.seed() } -> std::convertible_to<std::uint64_t>;
};

/// splitmix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for the index-th independent stream derived from base.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    return mix_seed(mix_seed(base) ^ mix_seed(index + 0x632be59bd9b4e019ULL));
}

namespace detail {

/// Uniform double in [0,1) from the top 53 bits of a 64-bit draw.
inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

class BernoulliSource {
public:
    BernoulliSource(double p, std::uint64_t seed) : p_(p), seed_(seed), rng_(seed) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("BernoulliSource: p not in [0,1]");
    }

    std::optional<double> next() {
        ++draws_;
        return detail::unit_uniform(rng_) < p_ ? 1.0 : 0.0;
    }

    std::size_t draws_made() const noexcept { return draws_; }
    std::uint64_t seed() const noexcept { return seed_; }
    double p() const noexcept { return p_; }

private:
    double p_;
    std::uint64_t seed_;
    std::mt19937_64 rng_;
    std::size_t draws_ = 0;
};

class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : seed_(seed), rng_(seed) {}

    std::optional<double> next() {
        ++draws_;
        return detail::unit_uniform(rng_);
    }

    std::size_t draws_made() const noexcept { return draws_; }
    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 rng_;
    std::size_t draws_ = 0;
};

class ConstantSource {
public:
    explicit ConstantSource(double value) : value_(value) {}

    std::optional<double> next() {
        ++draws_;
        return value_;
    }

    std::size_t draws_made() const noexcept { return draws_; }

private:
    double value_;
    std::size_t draws_ = 0;
};

/// Replays a fixed sequence, then reports exhaustion.
class SequenceSource {
public:
    explicit SequenceSource(std::vector<double> values) : values_(std::move(values)) {}

    std::optional<double> next() {
        if (draws_ >= values_.size()) return std::nullopt;
        return values_[draws_++];
    }

    std::size_t draws_made() const noexcept { return draws_; }

private:
    std::vector<double> values_;
    std::size_t draws_ = 0;
};

/// Independent N(mean, stddev^2) components.
class NormalScenarioSource {
public:
    NormalScenarioSource(double mean, double stddev, std::size_t dimension, std::uint64_t seed)
        : dist_(mean, stddev), dimension_(dimension), seed_(seed), rng_(seed) {
        if (!(stddev > 0.0)) throw std::invalid_argument("NormalScenarioSource: stddev must be positive");
        if (dimension == 0) throw std::invalid_argument("NormalScenarioSource: zero dimension");
    }

    std::optional<std::vector<double>> next() {
        std::vector<double> row(dimension_);
        for (double& x : row) x = dist_(rng_);
        return row;
    }

    std::size_t dimension() const noexcept { return dimension_; }
    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::normal_distribution<double> dist_;
    std::size_t dimension_;
    std::uint64_t seed_;
    std::mt19937_64 rng_;
};

/// Independent Uniform[lo, hi) components.
class UniformScenarioSource {
public:
    UniformScenarioSource(double lo, double hi, std::size_t dimension, std::uint64_t seed)
        : lo_(lo), hi_(hi), dimension_(dimension), seed_(seed), rng_(seed) {
        if (!(hi > lo)) throw std::invalid_argument("UniformScenarioSource: empty interval");
        if (dimension == 0) throw std::invalid_argument("UniformScenarioSource: zero dimension");
    }

    std::optional<std::vector<double>> next() {
        std::vector<double> row(dimension_);
        for (double& x : row) x = lo_ + (hi_ - lo_) * detail::unit_uniform(rng_);
        return row;
    }

    std::size_t dimension() const noexcept { return dimension_; }
    std::uint64_t seed() const noexcept { return seed_; }

private:
    double lo_;
    double hi_;
    std::size_t dimension_;
    std::uint64_t seed_;
    std::mt19937_64 rng_;
};

/// Named scenario distribution: independent normal(p1 = mean, p2 = stddev)
/// or uniform[p1 = lo, p2 = hi) components.
struct ScenarioDistribution {
    enum class Kind { normal, uniform };
    Kind kind = Kind::normal;
    double p1 = 0.0;
    double p2 = 1.0;

    static ScenarioDistribution normal(double mean, double stddev) { return {Kind::normal, mean, stddev}; }
    static ScenarioDistribution uniform(double lo, double hi) { return {Kind::uniform, lo, hi}; }

    friend bool operator==(const ScenarioDistribution&, const ScenarioDistribution&) = default;
};

constexpr std::string_view to_string(ScenarioDistribution::Kind k) noexcept {
    return k == ScenarioDistribution::Kind::normal ? "normal" : "uniform";
}

/// Scenario source for a ScenarioDistribution chosen at run time.
class DistributionSource {
public:
    DistributionSource(const ScenarioDistribution& dist, std::size_t dimension, std::uint64_t seed)
        : impl_(make(dist, dimension, seed)) {}

    std::optional<std::vector<double>> next() {
        return std::visit([](auto& s) { return s.next(); }, impl_);
    }
    std::size_t dimension() const noexcept {
        return std::visit([](const auto& s) { return s.dimension(); }, impl_);
    }
    std::uint64_t seed() const noexcept {
        return std::visit([](const auto& s) { return s.seed(); }, impl_);
    }

private:
    using Impl = std::variant<NormalScenarioSource, UniformScenarioSource>;

    static Impl make(const ScenarioDistribution& dist, std::size_t dimension, std::uint64_t seed) {
        if (dist.kind == ScenarioDistribution::Kind::normal) {
            return NormalScenarioSource(dist.p1, dist.p2, dimension, seed);
        }
        return UniformScenarioSource(dist.p1, dist.p2, dimension, seed);
    }

    Impl impl_;
};

}  // namespace probcert
