#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "extdep/bootstrap.hpp"
#include "extdep/core.hpp"
#include "extdep/statistics.hpp"

namespace extdep {

// ---------------------------------------------------------------------------
// The test cascade:
//
//   pre-check: fitted interval wider than precheck_width
//     -> only test H3 (variance of T(g)): accept = Independence, reject = Weak
//   otherwise:
//     H1 (band of D):       accept -> H2, reject -> H3
//     H2 (variance of T):   accept = Full, reject = Strong
//     H3 (variance of T(g)): accept = Independence, reject = Weak
//
// One repetition gives one class; repeating with fresh resamples and
// averaging the one-hot outcomes gives the dependence vector.
// ---------------------------------------------------------------------------

enum class DependenceClass : int { Independence = 0, Weak = 1, Strong = 2, Full = 3 };

inline const char* to_string(DependenceClass c) {
    switch (c) {
        case DependenceClass::Independence: return "independence";
        case DependenceClass::Weak: return "weak";
        case DependenceClass::Strong: return "strong";
        case DependenceClass::Full: return "full";
    }
    return "?";
}

// Frequencies of the four classes over the successful repetitions; entries
// are multiples of 1/repetitions and sum to 1.
struct DependenceVector {
    std::array<double, 4> weights{};   // indexed by DependenceClass
    std::size_t repetitions = 0;

    double weight(DependenceClass c) const { return weights[static_cast<int>(c)]; }

    DependenceClass majority() const {
        int best = 0;
        for (int c = 1; c < 4; ++c) {
            if (weights[c] > weights[best]) best = c;
        }
        return static_cast<DependenceClass>(best);
    }
};

struct RepetitionOutcome {
    DependenceClass decided = DependenceClass::Independence;
    bool failed = false;       // invalid bootstrap run; `decided` is meaningless
    bool precheck = false;     // wide-interval shortcut fired
    std::optional<TestDecision> h1;
    std::optional<TestDecision> h2;
    std::optional<TestDecision> h3;
};

struct ClassificationDiagnostics {
    TailIndexEstimate alpha_hat{};
    ConeFit cone_fit{};
    std::size_t k_n = 0;
    std::size_t m = 0;
    std::size_t k_m = 0;
    std::vector<RepetitionOutcome> per_repetition;
};

struct ClassifyOptions {
    std::size_t repetitions = 50;
    double precheck_width = 0.85;
    double lambda = 4.0;
    double grid_step = 0.01;
    double max_failed_fraction = 0.2;   // above this the sample is unclassified
};

struct ClassifyResult {
    std::optional<DependenceVector> vector;   // nullopt: unclassified
    ClassificationDiagnostics diagnostics;

    bool classified() const { return vector.has_value(); }
};

// One pass of the cascade. `fit` and `inv_alpha_hat` come from the original
// sample (estimated once, outside the repetitions); cfg.seed identifies this
// repetition's resampling stream. Propagates invalid_run_error.
inline RepetitionOutcome classify_once(std::span<const PolarObservation> sample,
                                       const BootstrapConfig& cfg, const ConeFit& fit,
                                       double inv_alpha_hat, double precheck_width = 0.85) {
    RepetitionOutcome out;
    out.precheck = fit.cone.width() >= precheck_width;
    if (out.precheck) {
        const BootstrapDraws tg = bootstrap_draws(sample, cfg, StatKind::Tg);
        out.h3 = decide_variance(tg, inv_alpha_hat, cfg);
        out.decided = *out.h3 == TestDecision::Accept ? DependenceClass::Independence
                                                      : DependenceClass::Weak;
        return out;
    }

    const BootstrapDraws d = bootstrap_draws(sample, cfg, StatKind::D, fit.cone);
    out.h1 = decide_strong(d, inv_alpha_hat, cfg);
    if (*out.h1 == TestDecision::Accept) {
        const BootstrapDraws t = bootstrap_draws(sample, cfg, StatKind::T);
        out.h2 = decide_variance(t, inv_alpha_hat, cfg);
        out.decided = *out.h2 == TestDecision::Accept ? DependenceClass::Full
                                                      : DependenceClass::Strong;
    } else {
        const BootstrapDraws tg = bootstrap_draws(sample, cfg, StatKind::Tg);
        out.h3 = decide_variance(tg, inv_alpha_hat, cfg);
        out.decided = *out.h3 == TestDecision::Accept ? DependenceClass::Independence
                                                      : DependenceClass::Weak;
    }
    return out;
}

// Full procedure for one sample: estimate (alpha, a, b) once, then repeat the
// bootstrap cascade with per-repetition streams derived from base.seed and
// average the one-hot outcomes. More than max_failed_fraction failed
// repetitions leaves the sample unclassified.
inline ClassifyResult classify_repeated(std::span<const PolarObservation> sample,
                                        std::size_t k_n, const BootstrapConfig& base,
                                        const ClassifyOptions& opt = {}) {
    if (opt.repetitions < 1)
        throw std::invalid_argument("classify_repeated: repetitions must be >= 1");

    const OrderedTail tail = OrderedTail::from_polar(sample, k_n);
    const TailIndexEstimate alpha = hill_alpha(tail);
    const ConeFit fit = fit_cone(tail, alpha.inv_alpha_hat, opt.lambda, opt.grid_step);

    ClassifyResult result;
    result.diagnostics.alpha_hat = alpha;
    result.diagnostics.cone_fit = fit;
    result.diagnostics.k_n = k_n;
    result.diagnostics.m = base.m;
    result.diagnostics.k_m = base.k_m;
    result.diagnostics.per_repetition.reserve(opt.repetitions);

    std::array<std::size_t, 4> counts{};
    std::size_t failures = 0;
    const RandomStream root(base.seed);
    for (std::size_t rep = 0; rep < opt.repetitions; ++rep) {
        BootstrapConfig cfg = base;
        cfg.seed = root.substream(rep).key();
        RepetitionOutcome outcome;
        try {
            outcome = classify_once(sample, cfg, fit, alpha.inv_alpha_hat, opt.precheck_width);
        } catch (const invalid_run_error&) {
            outcome.failed = true;
        }
        if (outcome.failed) ++failures;
        else ++counts[static_cast<int>(outcome.decided)];
        result.diagnostics.per_repetition.push_back(outcome);
    }

    const std::size_t successes = opt.repetitions - failures;
    if (static_cast<double>(failures) >
        opt.max_failed_fraction * static_cast<double>(opt.repetitions)) {
        return result;   // unclassified
    }
    DependenceVector vec;
    vec.repetitions = successes;
    for (int c = 0; c < 4; ++c)
        vec.weights[c] = static_cast<double>(counts[c]) / static_cast<double>(successes);
    result.vector = vec;
    return result;
}

}  // namespace extdep
