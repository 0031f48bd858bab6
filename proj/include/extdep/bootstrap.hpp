#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "extdep/core.hpp"
#include "extdep/rng.hpp"
#include "extdep/special.hpp"
#include "extdep/statistics.hpp"

namespace extdep {

// ---------------------------------------------------------------------------
// m-out-of-n multinomial bootstrap and the three decision rules.
//
// Resample i always draws from the stream (seed, i), so a run is bit-exactly
// reproducible no matter how the resamples are scheduled.
// ---------------------------------------------------------------------------

inline std::size_t bootstrap_resample_size(std::size_t n, std::size_t k_n) {
    // ceil(6n / k(n))
    return (6 * n + k_n - 1) / k_n;
}

inline std::size_t bootstrap_tail_size(std::size_t m) {
    // ceil(2 m^0.4)
    return static_cast<std::size_t>(std::ceil(2.0 * std::pow(static_cast<double>(m), 0.4)));
}

struct BootstrapConfig {
    std::size_t B = 200;              // resample count
    std::size_t m = 0;                // resample size
    std::size_t k_m = 0;              // tail size within a resample
    double z_crit = 1.96;             // normal critical value for the D band
    double chi2_level = 0.95;         // chi-square level for the variance tests
    double reject_fraction = 0.05;    // band-exceedance fraction that rejects
    std::uint64_t seed = 0;

    // Defaults for a sample of size n with tail size k_n:
    // m = ceil(6n/k(n)), k(m) = ceil(2 m^0.4), B = 200.
    static BootstrapConfig for_sample(std::size_t n, std::size_t k_n, std::uint64_t seed) {
        if (k_n < 1 || k_n > n) throw std::invalid_argument("BootstrapConfig: k_n out of range");
        BootstrapConfig cfg;
        cfg.m = bootstrap_resample_size(n, k_n);
        cfg.k_m = bootstrap_tail_size(cfg.m);
        cfg.seed = seed;
        if (cfg.m > n) cfg.m = n;
        if (cfg.k_m > cfg.m) cfg.k_m = cfg.m;
        return cfg;
    }

    // Run both tests at level 0.025 instead of 0.05 / 0.95.
    void set_bonferroni() {
        z_crit = 2.2414;
        chi2_level = 0.975;
    }

    void validate(std::size_t n) const {
        if (B < 2) throw std::invalid_argument("BootstrapConfig: B must be >= 2");
        if (k_m < 1 || k_m > m || m > n)
            throw std::invalid_argument("BootstrapConfig: need k_m <= m <= n");
    }
};

struct BootstrapDraws {
    std::vector<double> values;   // one statistic per usable resample
    StatKind kind = StatKind::D;
    std::size_t failed = 0;       // resamples lost to degenerate weights
};

// m i.i.d. draws with replacement, in draw order. m = 0 yields an empty list.
inline std::vector<PolarObservation> resample(std::span<const PolarObservation> sample,
                                              std::size_t m, RandomStream& stream) {
    if (sample.empty()) throw std::invalid_argument("resample: empty source sample");
    std::vector<PolarObservation> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
        out.push_back(sample[stream.next_below(sample.size())]);
    return out;
}

// B resampled statistics of one kind. `cone` is required for D and ignored
// otherwise. Throws invalid_run_error when more than 10% of the resamples
// fail with degenerate weights.
inline BootstrapDraws bootstrap_draws(std::span<const PolarObservation> sample,
                                      const BootstrapConfig& cfg, StatKind kind,
                                      const std::optional<Cone>& cone = std::nullopt) {
    cfg.validate(sample.size());
    if (kind == StatKind::D && !cone.has_value())
        throw std::invalid_argument("bootstrap_draws: D requires a cone");

    BootstrapDraws draws;
    draws.kind = kind;
    draws.values.reserve(cfg.B);
    const RandomStream root(cfg.seed);
    for (std::size_t i = 0; i < cfg.B; ++i) {
        RandomStream stream = root.substream(i);
        const std::vector<PolarObservation> boot = resample(sample, cfg.m, stream);
        const OrderedTail tail = OrderedTail::from_polar(boot, cfg.k_m);
        try {
            switch (kind) {
                case StatKind::D:
                    draws.values.push_back(d_stat(tail, *cone).value);
                    break;
                case StatKind::T:
                    draws.values.push_back(t_stat(tail, AngleWeight::Identity).value);
                    break;
                case StatKind::Tg:
                    draws.values.push_back(t_stat(tail, AngleWeight::G).value);
                    break;
            }
        } catch (const degenerate_weights_error&) {
            ++draws.failed;
        }
    }
    if (draws.failed * 10 > cfg.B)
        throw invalid_run_error("bootstrap_draws: more than 10% degenerate resamples");
    return draws;
}

enum class TestDecision { Accept, Reject };

// Band test on the D draws: reject when at least a reject_fraction share of
// the resamples have |D_i - 1/alpha| > z * (1/alpha) / sqrt(k(m)).
inline TestDecision decide_strong(const BootstrapDraws& draws, double inv_alpha_hat,
                                  const BootstrapConfig& cfg) {
    if (draws.kind != StatKind::D)
        throw std::invalid_argument("decide_strong: needs D draws");
    const double band = cfg.z_crit * inv_alpha_hat / std::sqrt(static_cast<double>(cfg.k_m));
    std::size_t exceedances = 0;
    for (const double v : draws.values) {
        if (std::abs(v - inv_alpha_hat) > band) ++exceedances;
    }
    const double fraction = static_cast<double>(exceedances) / static_cast<double>(cfg.B);
    return fraction >= cfg.reject_fraction ? TestDecision::Reject : TestDecision::Accept;
}

// Variance test on T or T(g) draws: reject when
//   k(m) * S^2 / (1/alpha^2) > chi2_{level, B-1} / (B - 1),
// with S^2 the unbiased sample variance of the draws.
inline TestDecision decide_variance(const BootstrapDraws& draws, double inv_alpha_hat,
                                    const BootstrapConfig& cfg) {
    if (draws.kind == StatKind::D)
        throw std::invalid_argument("decide_variance: needs T or T(g) draws");
    const std::size_t count = draws.values.size();
    if (count < 2) throw invalid_run_error("decide_variance: fewer than 2 usable draws");

    double mean = 0.0;
    for (const double v : draws.values) mean += v;
    mean /= static_cast<double>(count);
    double ss = 0.0;
    for (const double v : draws.values) ss += (v - mean) * (v - mean);
    const double variance = ss / static_cast<double>(count - 1);

    const double statistic =
        static_cast<double>(cfg.k_m) * variance / (inv_alpha_hat * inv_alpha_hat);
    const double threshold =
        chi2_quantile(cfg.chi2_level, cfg.B - 1) / static_cast<double>(cfg.B - 1);
    return statistic > threshold ? TestDecision::Reject : TestDecision::Accept;
}

}  // namespace extdep
