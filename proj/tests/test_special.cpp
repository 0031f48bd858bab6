#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "extdep/special.hpp"
#include "support/oracles.hpp"

using extdep::chi2_cdf;
using extdep::chi2_quantile;
using extdep::lower_gamma_regularized;

TEST_CASE("incomplete gamma against closed forms", "[special]") {
    // P(1, x) = 1 - e^{-x}
    for (const double x : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
        REQUIRE(lower_gamma_regularized(1.0, x) ==
                Catch::Approx(1.0 - std::exp(-x)).epsilon(1e-13));
    }
    // P(1/2, x) = erf(sqrt(x))
    for (const double x : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        REQUIRE(lower_gamma_regularized(0.5, x) ==
                Catch::Approx(std::erf(std::sqrt(x))).epsilon(1e-12));
    }
    REQUIRE(lower_gamma_regularized(3.0, 0.0) == 0.0);
}

TEST_CASE("chi-square quantile closed form at df = 2", "[special]") {
    // chi2 with 2 df is Exp(1/2): quantile = -2 ln(1 - p)
    REQUIRE(std::abs(chi2_quantile(0.95, 2) - (-2.0 * std::log(0.05))) < 1e-10);
    REQUIRE(std::abs(chi2_quantile(0.5, 2) - (-2.0 * std::log(0.5))) < 1e-10);
    REQUIRE(std::abs(chi2_quantile(0.99, 2) - (-2.0 * std::log(0.01))) < 1e-10);
}

TEST_CASE("chi-square quantile reference values", "[special]") {
    // df = 1: quantile(p) = z((1+p)/2)^2; z_{0.975} = 1.959963984540054
    REQUIRE(chi2_quantile(0.95, 1) == Catch::Approx(3.8414588206941227).epsilon(1e-9));
    // df = 199, p = 0.95 against the Wilson-Hilferty approximation
    const double wh = oracles::chi2_quantile_wh95(199);
    const double q = chi2_quantile(0.95, 199);
    REQUIRE(std::abs(q - wh) / wh < 0.005);
    REQUIRE(q == Catch::Approx(232.9).margin(0.5));
}

TEST_CASE("quantile round-trips through the CDF", "[special]") {
    for (const std::size_t df : {std::size_t{1}, std::size_t{2}, std::size_t{5},
                                 std::size_t{10}, std::size_t{199}}) {
        for (const double p : {0.01, 0.05, 0.25, 0.5, 0.75, 0.9, 0.95, 0.975, 0.99, 0.999}) {
            const double x = chi2_quantile(p, df);
            REQUIRE(std::abs(chi2_cdf(x, df) - p) < 1e-7);
        }
    }
}

TEST_CASE("quantile is strictly increasing in p and df", "[special]") {
    for (const std::size_t df : {std::size_t{1}, std::size_t{3}, std::size_t{50}}) {
        double prev = 0.0;
        for (double p = 0.05; p < 1.0; p += 0.05) {
            const double q = chi2_quantile(p, df);
            REQUIRE(q > prev);
            prev = q;
        }
    }
    double prev = 0.0;
    for (std::size_t df = 1; df <= 300; df += 7) {
        const double q = chi2_quantile(0.95, df);
        REQUIRE(q > prev);
        prev = q;
    }
}

TEST_CASE("quantile rejects bad parameters", "[special]") {
    REQUIRE_THROWS_AS(chi2_quantile(0.0, 5), std::invalid_argument);
    REQUIRE_THROWS_AS(chi2_quantile(1.0, 5), std::invalid_argument);
    REQUIRE_THROWS_AS(chi2_quantile(-0.2, 5), std::invalid_argument);
    REQUIRE_THROWS_AS(chi2_quantile(0.95, 0), std::invalid_argument);
}
