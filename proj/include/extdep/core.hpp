#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace extdep {

// ---------------------------------------------------------------------------
// Core types and pure tail operations: L1 polar transform, ordering with
// concomitants, Hill estimation, angular cone distance, the g-transform and
// the power-transform standardizer. Everything here is a pure function of
// its inputs and safe to call concurrently.
// ---------------------------------------------------------------------------

// All radii of a tail are equal, so the log-spread is zero and no tail index
// can be formed.
struct degenerate_tail_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A weighted statistic whose weight sum vanished (e.g. every angle exactly 0).
struct degenerate_weights_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A bootstrap run that produced too few usable resamples to decide anything.
struct invalid_run_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BivariateObservation {
    double x = 0.0;
    double y = 0.0;
};

// One point in L1 polar coordinates: r = x + y > 0, theta = x / (x + y).
struct PolarObservation {
    double r = 0.0;
    double theta = 0.0;
};

// Angular interval [a, b] within [0, 1].
struct Cone {
    double a = 0.0;
    double b = 1.0;

    bool valid() const noexcept { return a >= 0.0 && a <= b && b <= 1.0; }
    double width() const noexcept { return b - a; }
};

struct TailIndexEstimate {
    double alpha_hat = 0.0;
    double inv_alpha_hat = 0.0;
    std::size_t k_used = 0;
};

// L1 polar transform. Returns nullopt for the degenerate x + y = 0 point,
// which carries no directional information; callers drop it.
inline std::optional<PolarObservation> to_polar(const BivariateObservation& z) {
    if (!(z.x >= 0.0) || !(z.y >= 0.0) || !std::isfinite(z.x) || !std::isfinite(z.y))
        throw std::domain_error("to_polar: components must be finite and nonnegative");
    const double r = z.x + z.y;
    if (r == 0.0) return std::nullopt;
    return PolarObservation{r, z.x / r};
}

// Tent-like angle map with g(0) = g(1) = 1 and range (0, 2]. Sends the axes
// to a common value so that an asymptotically independent sample looks fully
// dependent after the transform.
inline double g_transform(double theta) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::domain_error("g_transform: theta outside [0, 1]");
    return theta < 0.5 ? 1.0 - 2.0 * theta : 3.0 - 2.0 * theta;
}

namespace detail {

// Angular part of the cone distance: (theta/b - 1)+ + (1 - theta/a)+.
// Conventions: the a = 0 term is 0; for b = 0 the first term is 0 at
// theta = 0 and +inf otherwise (the limit of theta/b).
inline double cone_angle_gap(double theta, const Cone& cone) noexcept {
    double gap = 0.0;
    if (cone.b > 0.0) {
        const double over = theta / cone.b - 1.0;
        if (over > 0.0) gap += over;
    } else if (theta > 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    if (cone.a > 0.0) {
        const double under = 1.0 - theta / cone.a;
        if (under > 0.0) gap += under;
    }
    return gap;
}

}  // namespace detail

// Distance of a polar point to the cone, r * ((theta/b - 1)+ + (1 - theta/a)+).
// Zero exactly when the angle lies in [a, b]; scales linearly in r.
inline double cone_distance(const PolarObservation& p, const Cone& cone) {
    if (!cone.valid()) throw std::invalid_argument("cone_distance: invalid cone");
    return p.r * detail::cone_angle_gap(p.theta, cone);
}

// The k largest radii of a sample, non-increasing, with the angle of the same
// source observation carried alongside. Ties in r keep original sample order.
class OrderedTail {
public:
    static OrderedTail from_polar(std::span<const PolarObservation> sample, std::size_t k) {
        check_k(k, sample.size());
        std::vector<std::size_t> idx = sorted_indices(
            sample.size(), [&](std::size_t i, std::size_t j) { return sample[i].r > sample[j].r; });
        OrderedTail tail;
        tail.n_ = sample.size();
        tail.radii_.reserve(k);
        tail.concomitants_.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            const PolarObservation& p = sample[idx[i]];
            if (!(p.r > 0.0)) throw std::invalid_argument("OrderedTail: radii must be positive");
            tail.radii_.push_back(p.r);
            tail.concomitants_.push_back(p.theta);
        }
        return tail;
    }

    // Univariate variant for threshold/Hill work on plain magnitudes; the
    // concomitant slots are zero-filled and must not be interpreted.
    static OrderedTail from_radii(std::span<const double> radii, std::size_t k) {
        check_k(k, radii.size());
        std::vector<std::size_t> idx = sorted_indices(
            radii.size(), [&](std::size_t i, std::size_t j) { return radii[i] > radii[j]; });
        OrderedTail tail;
        tail.n_ = radii.size();
        tail.radii_.reserve(k);
        tail.concomitants_.assign(k, 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            if (!(radii[idx[i]] > 0.0))
                throw std::invalid_argument("OrderedTail: radii must be positive");
            tail.radii_.push_back(radii[idx[i]]);
        }
        return tail;
    }

    std::size_t k() const noexcept { return radii_.size(); }
    std::size_t n() const noexcept { return n_; }
    const std::vector<double>& radii() const noexcept { return radii_; }
    const std::vector<double>& concomitants() const noexcept { return concomitants_; }
    double min_radius() const noexcept { return radii_.back(); }

private:
    static void check_k(std::size_t k, std::size_t n) {
        if (k < 1 || k > n) throw std::invalid_argument("OrderedTail: k out of range [1, n]");
    }

    template <typename Less>
    static std::vector<std::size_t> sorted_indices(std::size_t n, Less less) {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), less);
        return idx;
    }

    std::vector<double> radii_;
    std::vector<double> concomitants_;
    std::size_t n_ = 0;
};

// Mean log-exceedance (1/k) * sum log(R_(i) / R_(k)); the Hill estimate of
// the tail index is its reciprocal. Scale-free: common factors cancel.
inline double hill_log_mean(const OrderedTail& tail) {
    const double rk = tail.min_radius();
    double sum = 0.0;
    for (const double r : tail.radii()) sum += std::log(r / rk);
    return sum / static_cast<double>(tail.k());
}

inline TailIndexEstimate hill_alpha(const OrderedTail& tail) {
    const double log_mean = hill_log_mean(tail);
    if (!(log_mean > 0.0))
        throw degenerate_tail_error("hill_alpha: zero log-spread (all tail radii equal)");
    return TailIndexEstimate{1.0 / log_mean, log_mean, tail.k()};
}

// x -> x^(alpha_source / alpha_target): maps a tail of index alpha_source to
// one of index alpha_target. Monotone and order-preserving.
inline std::vector<double> power_transform(std::span<const double> series, double alpha_source,
                                           double alpha_target) {
    if (!(alpha_source > 0.0) || !(alpha_target > 0.0))
        throw std::invalid_argument("power_transform: tail indices must be positive");
    const double exponent = alpha_source / alpha_target;
    std::vector<double> out;
    out.reserve(series.size());
    for (const double v : series) {
        if (!(v >= 0.0)) throw std::domain_error("power_transform: values must be nonnegative");
        out.push_back(std::pow(v, exponent));
    }
    return out;
}

}  // namespace extdep
