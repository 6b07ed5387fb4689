#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "probcert/tail_bounds.hpp"

using namespace probcert;
using Catch::Approx;

namespace {

double hp_g(double eps, double mu) {
    return oracle::hoeffding(oracle::hp(eps), oracle::hp(mu)).convert_to<double>();
}

/// Random spec satisfying eps_a/eps_r + eps_a <= 1/2.
ErrorSpec random_spec(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double eps_r = 0.02 + 0.96 * unit(rng);
    // eps_a (1/eps_r + 1) <= 1/2
    const double eps_a_max = 0.5 / (1.0 / eps_r + 1.0);
    const double eps_a = eps_a_max * (0.05 + 0.95 * unit(rng));
    const double delta = std::exp(std::log(1e-6) * unit(rng)) * 0.999;
    return validate_spec(eps_a, eps_r, delta);
}

}  // namespace

TEST_CASE("hoeffding_exponent matches the two-term formula", "[tail_bounds]") {
    // 50-digit oracle values, frozen: g(0.1, 0.5) and g(0.2, 0.5)
    CHECK(hoeffding_exponent(0.1, 0.5) == Approx(-0.0201355135506888734).margin(1e-15));
    CHECK(hoeffding_exponent(0.2, 0.5) == Approx(-0.0822828785050518464).margin(1e-15));
    CHECK(hoeffding_exponent(-0.2, 0.5) == Approx(-0.0822828785050518464).margin(1e-15));

    for (double mu : {0.05, 0.3, 0.5, 0.77, 0.95}) {
        for (double eps : {-0.04, -0.01, 1e-3, 0.02, 0.049}) {
            CHECK(hoeffding_exponent(eps, mu) == Approx(hp_g(eps, mu)).epsilon(1e-12));
        }
    }
}

TEST_CASE("hoeffding_exponent near zero", "[tail_bounds]") {
    CHECK(hoeffding_exponent(0.0, 0.3) == 0.0);
    const double g = hoeffding_exponent(1e-5, 0.3);
    CHECK(std::abs(g) < 1e-8);
    CHECK(g < 0.0);
    // small eps must keep full relative accuracy (about -eps^2 / (2 mu (1-mu)))
    CHECK(g == Approx(hp_g(1e-5, 0.3)).epsilon(1e-9));
    CHECK(hoeffding_exponent(-1e-7, 0.6) == Approx(hp_g(-1e-7, 0.6)).epsilon(1e-7));
}

TEST_CASE("hoeffding_exponent rejects points outside its domain", "[tail_bounds]") {
    CHECK_THROWS_AS(hoeffding_exponent(0.1, 0.0), DomainError);
    CHECK_THROWS_AS(hoeffding_exponent(0.1, 1.0), DomainError);
    CHECK_THROWS_AS(hoeffding_exponent(0.5, 0.5), DomainError);
    CHECK_THROWS_AS(hoeffding_exponent(-0.6, 0.5), DomainError);
    CHECK_THROWS_AS(hoeffding_exponent(0.1, std::nan("")), DomainError);
}

TEST_CASE("nonpositivity and symmetry on a grid", "[tail_bounds][property]") {
    for (int i = 0; i <= 90; ++i) {
        const double mu = 0.05 + 0.01 * i;
        for (double mag = 1e-3; mag <= 0.4 + 1e-12; mag += 1e-3 * 7) {
            for (double eps : {mag, -mag}) {
                if (!(mu + eps > 0.0 && mu + eps < 1.0 && mu - eps > 0.0 && mu - eps < 1.0)) continue;
                INFO("eps = " << eps << ", mu = " << mu);
                CHECK(hoeffding_exponent(eps, mu) < 0.0);
                CHECK(std::abs(hoeffding_exponent(-eps, mu) - hoeffding_exponent(eps, 1.0 - mu)) < 1e-12);
            }
        }
    }
}

TEST_CASE("hoeffding_exponent_dmu closed form", "[tail_bounds]") {
    // ln(0.8/1.2) + 0.2 + 0.2
    CHECK(hoeffding_exponent_dmu(0.1, 0.5) == Approx(std::log(0.8 / 1.2) + 0.4).margin(1e-15));
    CHECK(hoeffding_exponent_dmu(0.1, 0.5) == Approx(-0.0054651).margin(1e-6));
    CHECK(hoeffding_exponent_dmu(-0.1, 0.5) == Approx(0.0054651).margin(1e-6));
    CHECK_THROWS_AS(hoeffding_exponent_dmu(0.6, 0.5), DomainError);

    SECTION("central finite differences of the high-precision exponent") {
        for (auto [eps, mu] : {std::pair{0.1, 0.4}, {-0.1, 0.4}, {0.25, 0.2}, {-0.05, 0.9}, {0.01, 0.01 + 0.5}}) {
            const oracle::hp h("1e-10");
            const oracle::hp fd = (oracle::hoeffding(eps, oracle::hp(mu) + h) -
                                   oracle::hoeffding(eps, oracle::hp(mu) - h)) / (2 * h);
            INFO("eps = " << eps << ", mu = " << mu);
            CHECK(hoeffding_exponent_dmu(eps, mu) == Approx(fd.convert_to<double>()).epsilon(1e-9));
        }
    }
    SECTION("double-precision central difference, h = 1e-6") {
        const double h = 1e-6;
        const double fd = (hoeffding_exponent(0.1, 0.4 + h) - hoeffding_exponent(0.1, 0.4 - h)) / (2 * h);
        CHECK(hoeffding_exponent_dmu(0.1, 0.4) == Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("hoeffding_exponent_deps against finite differences", "[tail_bounds]") {
    for (auto [eps, mu] : {std::pair{0.1, 0.4}, {-0.1, 0.4}, {0.3, 0.6}}) {
        const oracle::hp h("1e-10");
        const oracle::hp fd =
            (oracle::hoeffding(oracle::hp(eps) + h, mu) - oracle::hoeffding(oracle::hp(eps) - h, mu)) / (2 * h);
        CHECK(hoeffding_exponent_deps(eps, mu) == Approx(fd.convert_to<double>()).epsilon(1e-9));
    }
}

TEST_CASE("tail bounds", "[tail_bounds]") {
    CHECK(upper_tail_bound(100, 0.1, 0.5) == Approx(0.1335136772513166).epsilon(1e-12));
    CHECK(upper_tail_bound(100, 0.1, 0.5) == Approx(0.1335).margin(1e-4));
    CHECK(lower_tail_bound(10, 0.2, 0.5) == Approx(0.4391875285380543).epsilon(1e-12));
    CHECK(upper_tail_bound(1, 1e-9, 0.5) == Approx(1.0).margin(1e-12));
    CHECK(lower_tail_bound(1, 1e-9, 0.3) == Approx(1.0).margin(1e-12));

    // Pr{S >= 7} = Pr{S <= 3} = 176/1024 for S ~ Binomial(10, 1/2)
    CHECK(upper_tail_bound(10, 0.2, 0.5) >= 176.0 / 1024.0);
    CHECK(lower_tail_bound(10, 0.2, 0.5) >= 176.0 / 1024.0);

    CHECK_THROWS_AS(upper_tail_bound(0, 0.1, 0.5), DomainError);
    CHECK_THROWS_AS(upper_tail_bound(10, 0.5, 0.5), DomainError);
    CHECK_THROWS_AS(upper_tail_bound(10, -0.1, 0.5), DomainError);
    CHECK_THROWS_AS(lower_tail_bound(10, 0.5, 0.5), DomainError);
    CHECK_THROWS_AS(lower_tail_bound(0, 0.1, 0.5), DomainError);
}

TEST_CASE("validate_spec reports each violated condition", "[tail_bounds]") {
    CHECK_NOTHROW(validate_spec(0.02, 0.2, 0.05));
    CHECK_THROWS_AS(validate_spec(0.05, 0.05, 0.1), SpecError);
    CHECK_THROWS_AS(validate_spec(0.01, 0.1, 1.0), SpecError);
    try {
        validate_spec(-0.1, 1.5, 0.0);
        FAIL("expected SpecError");
    } catch (const SpecError& e) {
        CHECK(e.violations().size() == 3);  // eps_a, eps_r, delta
    }
    try {
        validate_spec(0.3, 0.5, 0.1);
        FAIL("expected SpecError");
    } catch (const SpecError& e) {
        REQUIRE(e.violations().size() == 1);
        CHECK(e.violations()[0].find("exceeds 1/2") != std::string::npos);
    }
    // boundary eps_a/eps_r + eps_a == 1/2 is allowed (0.1/0.25 + 0.1)
    CHECK_NOTHROW(validate_spec(0.1, 0.25, 0.1));
}

TEST_CASE("minimum_sample_size", "[tail_bounds]") {
    // 50-digit evaluations: 576.2562266149860... and 1754.5425251743151...
    const auto p1 = minimum_sample_size(validate_spec(0.05, 0.2, 0.05));
    CHECK(p1.n == 577);
    CHECK(p1.n == oracle::least_integer_above(oracle::sample_size_rhs(oracle::hp("0.05"), oracle::hp("0.2"),
                                                                      oracle::hp("0.05"))));
    CHECK(p1.worst_case_exponent == Approx(hp_g(0.05, 0.25)).epsilon(1e-13));
    CHECK(std::exp(577 * p1.worst_case_exponent) < 0.025);
    CHECK(std::exp(576 * p1.worst_case_exponent) >= 0.025);

    const auto p2 = minimum_sample_size(validate_spec(0.02, 0.2, 0.05));
    CHECK(p2.n == 1755);
    CHECK(sample_size_bound(p2.spec) == Approx(1754.5425251743151645).epsilon(1e-12));

    CHECK_THROWS_AS(minimum_sample_size(ErrorSpec{0.3, 0.5, 0.1}), SpecError);
}

TEST_CASE("plan tightness for random specs", "[tail_bounds][property]") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 100; ++i) {
        const ErrorSpec spec = random_spec(rng);
        const SamplePlan plan = minimum_sample_size(spec);
        INFO("spec (" << spec.eps_a << ", " << spec.eps_r << ", " << spec.delta << "), n = " << plan.n);
        REQUIRE(plan.n >= 1);
        CHECK(achieved_confidence(plan.n, spec.eps_a, spec.eps_r).raw < spec.delta);
        if (plan.n > 1) CHECK(achieved_confidence(plan.n - 1, spec.eps_a, spec.eps_r).raw >= spec.delta);
    }
}

TEST_CASE("two closed forms of the sample-size bound agree", "[tail_bounds][property]") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 100; ++i) {
        const ErrorSpec spec = random_spec(rng);
        const double via_exponent = std::log(2.0 / spec.delta) / -worst_case_exponent(spec.eps_a, spec.eps_r);
        CHECK(sample_size_bound(spec) == Approx(via_exponent).epsilon(1e-10));
    }
}

TEST_CASE("achieved_confidence", "[tail_bounds]") {
    const auto c577 = achieved_confidence(577, 0.05, 0.2);
    CHECK(c577.delta == Approx(0.049762504168196360).epsilon(1e-11));
    CHECK(c577.delta < 0.05);
    CHECK(c577.guaranteed);
    CHECK(achieved_confidence(576, 0.05, 0.2).delta >= 0.05);

    const auto one = achieved_confidence(1, 0.05, 0.2);
    CHECK(one.delta == 1.0);
    CHECK_FALSE(one.guaranteed);
    CHECK(one.raw > 1.0);

    double prev = 2.0;
    for (std::uint64_t n : {1ull, 10ull, 100ull, 1000ull, 10000ull, 100000ull}) {
        const double d = achieved_confidence(n, 0.05, 0.2).raw;
        CHECK(d < prev);
        prev = d;
    }
    CHECK(prev < 1e-100);

    CHECK_THROWS_AS(achieved_confidence(577, 0.3, 0.5), SpecError);
    CHECK_THROWS_AS(achieved_confidence(0, 0.05, 0.2), DomainError);
}
