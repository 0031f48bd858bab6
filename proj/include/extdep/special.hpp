#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace extdep {

// ---------------------------------------------------------------------------
// Special functions: regularized incomplete gamma and the chi-square
// quantile built on it. The quantile inverts the CDF with a bracketed
// Newton iteration started from the Wilson-Hilferty approximation.
// ---------------------------------------------------------------------------

namespace detail {

// P(a, x) by power series; converges fastest for x < a + 1.
inline double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) = 1 - P(a, x) by continued fraction (modified Lentz); for x >= a + 1.
inline double gamma_q_contfrac(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
inline double lower_gamma_regularized(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("lower_gamma_regularized: a must be positive");
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_contfrac(a, x);
}

inline double chi2_cdf(double x, std::size_t df) {
    if (df < 1) throw std::invalid_argument("chi2_cdf: df must be >= 1");
    if (x <= 0.0) return 0.0;
    return lower_gamma_regularized(0.5 * static_cast<double>(df), 0.5 * x);
}

// Standard normal quantile, Acklam's rational approximation (|err| < 1.2e-9).
// Only used to seed iterative refinements; never exposed as a final answer.
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p outside (0, 1)");

    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double plow = 0.02425;

    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Chi-square quantile for df degrees of freedom. Wilson-Hilferty supplies the
// starting point only; the answer comes from Newton steps on the regularized
// incomplete gamma, safeguarded by a bisection bracket. Relative accuracy is
// well below 1e-10.
inline double chi2_quantile(double p, std::size_t df) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("chi2_quantile: p outside (0, 1)");
    if (df < 1) throw std::invalid_argument("chi2_quantile: df must be >= 1");

    const double a = 0.5 * static_cast<double>(df);
    const double dfd = static_cast<double>(df);

    // Wilson-Hilferty start.
    const double z = normal_quantile(p);
    const double cc = 2.0 / (9.0 * dfd);
    const double cube = 1.0 - cc + z * std::sqrt(cc);
    double x = dfd * cube * cube * cube;
    // Solve in y = x/2, the natural variable of P(a, y).
    double y = 0.5 * x;
    if (!(y > 0.0) || !std::isfinite(y)) {
        // Small-quantile asymptote P(a, y) ~ y^a / Gamma(a+1).
        y = std::exp((std::log(p) + std::lgamma(a + 1.0)) / a);
    }

    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 200; ++iter) {
        const double f = lower_gamma_regularized(a, y) - p;
        if (f >= 0.0) hi = std::min(hi, y);
        else lo = std::max(lo, y);

        const double log_pdf = (a - 1.0) * std::log(y) - y - std::lgamma(a);
        double y_next = y - f * std::exp(-log_pdf);
        if (!(y_next > lo) || !(y_next < hi)) {
            y_next = std::isinf(hi) ? (f < 0.0 ? 2.0 * y : 0.5 * y) : 0.5 * (lo + hi);
        }
        const bool converged = std::abs(y_next - y) <= 1e-15 * y;
        y = y_next;
        if (converged) break;
    }
    return 2.0 * y;
}

}  // namespace extdep
