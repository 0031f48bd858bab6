#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "extdep/core.hpp"

namespace extdep {

// ---------------------------------------------------------------------------
// Tail test statistics over an OrderedTail:
//
//   D = (1/k) sum_i (1 + d(Z*_i, C_{a,b}) / R_(k)) * log(R_(i) / R_(k))
//   T = sum_i w(Theta*_i) * log(R_(i) / R_(k)) / sum_i w(Theta*_i)
//
// with w the identity or the g-transform, plus the penalized grid search for
// the cone interval: argmin over a <= b of (b - a) + lambda*sqrt(k)*|D - 1/alpha|.
// ---------------------------------------------------------------------------

enum class StatKind { D, T, Tg };

enum class AngleWeight { Identity, G };

struct StatisticValue {
    double value = 0.0;
    std::size_t k = 0;
    StatKind kind = StatKind::D;
};

struct ConeFit {
    Cone cone;
    double objective = 0.0;
    double lambda = 0.0;
    double grid_step = 0.0;
};

namespace detail {

inline std::vector<double> log_ratios(const OrderedTail& tail) {
    const double rk = tail.min_radius();
    std::vector<double> out;
    out.reserve(tail.k());
    for (const double r : tail.radii()) out.push_back(std::log(r / rk));
    return out;
}

// Shared D kernel. The optimizer and the public statistic both go through
// this fixed ascending-index loop, so their values agree bit-for-bit.
inline double d_stat_value(std::span<const double> radii, std::span<const double> thetas,
                           std::span<const double> log_ratio, double rk, const Cone& cone) {
    double sum = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double dist = radii[i] * cone_angle_gap(thetas[i], cone);
        sum += (1.0 + dist / rk) * log_ratio[i];
    }
    return sum / static_cast<double>(radii.size());
}

}  // namespace detail

inline StatisticValue d_stat(const OrderedTail& tail, const Cone& cone) {
    if (!cone.valid()) throw std::invalid_argument("d_stat: invalid cone");
    const std::vector<double> log_ratio = detail::log_ratios(tail);
    const double value = detail::d_stat_value(tail.radii(), tail.concomitants(), log_ratio,
                                              tail.min_radius(), cone);
    return StatisticValue{value, tail.k(), StatKind::D};
}

// Angle-weighted mean log-exceedance. Throws degenerate_weights_error when
// the weight sum vanishes (identity weight with every angle at 0); under the
// g weight the sum is always positive.
inline StatisticValue t_stat(const OrderedTail& tail, AngleWeight weight) {
    const std::vector<double> log_ratio = detail::log_ratios(tail);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < tail.k(); ++i) {
        const double w = weight == AngleWeight::Identity ? tail.concomitants()[i]
                                                         : g_transform(tail.concomitants()[i]);
        num += w * log_ratio[i];
        den += w;
    }
    if (!(den > 0.0)) throw degenerate_weights_error("t_stat: zero weight sum");
    return StatisticValue{num / den, tail.k(),
                          weight == AngleWeight::Identity ? StatKind::T : StatKind::Tg};
}

// Exhaustive grid search for the penalized cone objective
//   (b - a) + lambda * sqrt(k) * |D(a, b) - inv_alpha_hat|
// over a, b in {1/N, 2/N, ..., 1}, a <= b, N = round(1/grid_step). Ties go to
// the smaller width, then the smaller a, applied over the full scan.
inline ConeFit fit_cone(const OrderedTail& tail, double inv_alpha_hat, double lambda,
                        double grid_step) {
    if (!(grid_step > 0.0 && grid_step <= 1.0))
        throw std::invalid_argument("fit_cone: grid_step outside (0, 1]");
    if (!(lambda >= 0.0)) throw std::invalid_argument("fit_cone: lambda must be >= 0");

    const auto n_cells = static_cast<std::size_t>(std::llround(1.0 / grid_step));
    const double denom = static_cast<double>(n_cells);
    const std::vector<double> log_ratio = detail::log_ratios(tail);
    const double rk = tail.min_radius();
    const double penalty_scale = lambda * std::sqrt(static_cast<double>(tail.k()));

    ConeFit best;
    best.lambda = lambda;
    best.grid_step = 1.0 / denom;
    bool have_best = false;
    for (std::size_t ia = 1; ia <= n_cells; ++ia) {
        const double a = static_cast<double>(ia) / denom;
        for (std::size_t ib = ia; ib <= n_cells; ++ib) {
            const double b = static_cast<double>(ib) / denom;
            const Cone cone{a, b};
            const double d = detail::d_stat_value(tail.radii(), tail.concomitants(), log_ratio,
                                                  rk, cone);
            const double objective = (b - a) + penalty_scale * std::abs(d - inv_alpha_hat);
            const bool better =
                !have_best || objective < best.objective ||
                (objective == best.objective &&
                 (cone.width() < best.cone.width() ||
                  (cone.width() == best.cone.width() && cone.a < best.cone.a)));
            if (better) {
                best.cone = cone;
                best.objective = objective;
                have_best = true;
            }
        }
    }
    return best;
}

}  // namespace extdep
