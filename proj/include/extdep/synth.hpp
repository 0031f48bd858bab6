#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "extdep/classifier.hpp"
#include "extdep/core.hpp"
#include "extdep/rng.hpp"

namespace extdep {

// ---------------------------------------------------------------------------
// Generators for bivariate heavy-tailed samples with a known dependence
// class, used for validation. The radius is Pareto(alpha) with lower
// endpoint 1; the angle law realizes the class's support:
//   Full         point mass at theta0
//   Strong       Uniform[a, b], 0 < a <= b < 1
//   Weak         full-support law on [0, 1] (uniform or Beta(2,2))
//   Independence iid Pareto components (angles pile up at 0 and 1)
// ---------------------------------------------------------------------------

enum class AngularLaw { Uniform, Beta22 };

struct ClassSpec {
    DependenceClass cls = DependenceClass::Weak;
    double alpha = 1.0;
    double theta0 = 0.5;            // Full
    double a = 0.3;                 // Strong
    double b = 0.7;
    AngularLaw law = AngularLaw::Uniform;   // Weak

    static ClassSpec full(double alpha, double theta0) {
        require_alpha(alpha);
        if (!(theta0 > 0.0 && theta0 < 1.0))
            throw std::invalid_argument("ClassSpec: theta0 outside (0, 1)");
        ClassSpec s;
        s.cls = DependenceClass::Full;
        s.alpha = alpha;
        s.theta0 = theta0;
        return s;
    }

    static ClassSpec strong(double alpha, double a, double b) {
        require_alpha(alpha);
        if (!(a > 0.0 && a <= b && b < 1.0 && b - a < 0.85))
            throw std::invalid_argument("ClassSpec: need 0 < a <= b < 1 with b - a < 0.85");
        ClassSpec s;
        s.cls = DependenceClass::Strong;
        s.alpha = alpha;
        s.a = a;
        s.b = b;
        return s;
    }

    static ClassSpec weak(double alpha, AngularLaw law = AngularLaw::Uniform) {
        require_alpha(alpha);
        ClassSpec s;
        s.cls = DependenceClass::Weak;
        s.alpha = alpha;
        s.law = law;
        return s;
    }

    static ClassSpec independence(double alpha) {
        require_alpha(alpha);
        ClassSpec s;
        s.cls = DependenceClass::Independence;
        s.alpha = alpha;
        return s;
    }

private:
    static void require_alpha(double alpha) {
        if (!(alpha > 0.0)) throw std::invalid_argument("ClassSpec: alpha must be positive");
    }
};

// Pareto(alpha) on [1, inf) by inverse transform U^(-1/alpha).
inline std::vector<double> gen_pareto(double alpha, std::size_t n, RandomStream& rng) {
    if (!(alpha > 0.0)) throw std::invalid_argument("gen_pareto: alpha must be positive");
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(std::pow(rng.next_open_unit(), -1.0 / alpha));
    return out;
}

namespace detail {

// Beta(2, 2) as the median of three uniforms.
inline double beta22_draw(RandomStream& rng) {
    double u = rng.next_open_unit();
    double v = rng.next_open_unit();
    double w = rng.next_open_unit();
    if (u > v) std::swap(u, v);
    if (v > w) std::swap(v, w);
    return u > v ? u : v;
}

}  // namespace detail

inline std::vector<BivariateObservation> gen_class_sample(const ClassSpec& spec, std::size_t n,
                                                          RandomStream& rng) {
    std::vector<BivariateObservation> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        switch (spec.cls) {
            case DependenceClass::Full: {
                const double r = std::pow(rng.next_open_unit(), -1.0 / spec.alpha);
                out.push_back({r * spec.theta0, r * (1.0 - spec.theta0)});
                break;
            }
            case DependenceClass::Strong: {
                const double r = std::pow(rng.next_open_unit(), -1.0 / spec.alpha);
                const double theta = spec.a + (spec.b - spec.a) * rng.next_unit();
                out.push_back({r * theta, r * (1.0 - theta)});
                break;
            }
            case DependenceClass::Weak: {
                const double r = std::pow(rng.next_open_unit(), -1.0 / spec.alpha);
                const double theta = spec.law == AngularLaw::Uniform ? rng.next_unit()
                                                                     : detail::beta22_draw(rng);
                out.push_back({r * theta, r * (1.0 - theta)});
                break;
            }
            case DependenceClass::Independence: {
                const double x = std::pow(rng.next_open_unit(), -1.0 / spec.alpha);
                const double y = std::pow(rng.next_open_unit(), -1.0 / spec.alpha);
                out.push_back({x, y});
                break;
            }
        }
    }
    return out;
}

// Polar sample with degenerate points dropped; generators above never
// produce r = 0, so this is a plain transform.
inline std::vector<PolarObservation> gen_polar_sample(const ClassSpec& spec, std::size_t n,
                                                      RandomStream& rng) {
    const std::vector<BivariateObservation> biv = gen_class_sample(spec, n, rng);
    std::vector<PolarObservation> out;
    out.reserve(n);
    for (const BivariateObservation& z : biv) {
        if (const auto p = to_polar(z)) out.push_back(*p);
    }
    return out;
}

}  // namespace extdep
