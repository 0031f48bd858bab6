#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "extdep/core.hpp"

namespace extdep {

// ---------------------------------------------------------------------------
// Minimum-distance (KS) choice of the number of upper order statistics k,
// plus the capped variant 80 + min{40, (k* - 80)+} used for samples of a few
// hundred observations. The cap constants are configuration.
// ---------------------------------------------------------------------------

struct CapRule {
    std::size_t base = 80;
    std::size_t window = 40;
};

struct ThresholdSelection {
    std::size_t k_star = 0;            // raw minimum-distance choice
    std::size_t k_used = 0;            // after the cap rule
    double ks_distance_at_star = 0.0;
};

inline std::size_t capped_k(std::size_t k_star, const CapRule& rule = {}) {
    const std::size_t over = k_star > rule.base ? k_star - rule.base : 0;
    return rule.base + std::min(rule.window, over);
}

namespace detail {

inline double hill_log_mean_desc(std::span<const double> radii_desc) {
    const double rk = radii_desc.back();
    double sum = 0.0;
    for (const double r : radii_desc) sum += std::log(r / rk);
    return sum / static_cast<double>(radii_desc.size());
}

// Two-sided KS distance between the empirical tail CDF and the Pareto fit
// F(x) = 1 - (x / R_(k))^(-alpha_hat), evaluated at both step heights of
// every jump point.
inline double ks_distance_desc(std::span<const double> radii_desc, double alpha_hat) {
    const std::size_t k = radii_desc.size();
    const double rk = radii_desc.back();
    const double kd = static_cast<double>(k);
    double worst = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
        const double fitted = 1.0 - std::pow(radii_desc[i - 1] / rk, -alpha_hat);
        const double below = (kd - static_cast<double>(i)) / kd;
        const double above = (kd - static_cast<double>(i) + 1.0) / kd;
        worst = std::max(worst, std::abs(below - fitted));
        worst = std::max(worst, std::abs(above - fitted));
    }
    return worst;
}

}  // namespace detail

// KS distance with an externally supplied tail index.
inline double ks_distance(const OrderedTail& tail, double alpha_hat) {
    if (tail.k() < 2) throw std::invalid_argument("ks_distance: need k >= 2");
    return detail::ks_distance_desc(tail.radii(), alpha_hat);
}

// KS distance with the tail's own Hill estimate. A tail with zero log-spread
// admits no Pareto fit; its distance is 1 by convention.
inline double ks_distance(const OrderedTail& tail) {
    if (tail.k() < 2) throw std::invalid_argument("ks_distance: need k >= 2");
    const double log_mean = hill_log_mean(tail);
    if (!(log_mean > 0.0)) return 1.0;
    return detail::ks_distance_desc(tail.radii(), 1.0 / log_mean);
}

// Scan k in [k_min, k_max] and keep the KS-minimizing value, ties toward
// smaller k. The scan order is fixed, so the result does not depend on how
// candidates might be evaluated elsewhere.
inline ThresholdSelection min_distance_k(std::span<const double> radii, std::size_t k_min,
                                         std::size_t k_max, const CapRule& cap = {}) {
    if (k_min < 2 || k_min > k_max || k_max > radii.size())
        throw std::invalid_argument("min_distance_k: need 2 <= k_min <= k_max <= n");

    std::vector<double> sorted(radii.begin(), radii.end());
    for (const double r : sorted) {
        if (!(r > 0.0)) throw std::invalid_argument("min_distance_k: radii must be positive");
    }
    std::sort(sorted.begin(), sorted.end(), std::greater<double>{});

    ThresholdSelection best;
    double best_distance = std::numeric_limits<double>::infinity();
    for (std::size_t k = k_min; k <= k_max; ++k) {
        const std::span<const double> prefix(sorted.data(), k);
        const double log_mean = detail::hill_log_mean_desc(prefix);
        const double dist =
            log_mean > 0.0 ? detail::ks_distance_desc(prefix, 1.0 / log_mean) : 1.0;
        if (dist < best_distance) {
            best_distance = dist;
            best.k_star = k;
        }
    }
    best.ks_distance_at_star = best_distance;
    best.k_used = capped_k(best.k_star, cap);
    return best;
}

}  // namespace extdep
