#pragma once

// Spectrally positive alpha-stable driver Z, normalized so that
// E[exp(-lam Z_t)] = exp(t lam^alpha / alpha) for lam >= 0. For alpha = 2
// the driver is standard Brownian motion.

#include "scir/rng.hpp"

#include <stdexcept>

namespace scir {

struct stable_spec {
    double alpha;

    explicit stable_spec(double alpha_) : alpha(alpha_) {
        if (!(alpha > 1.0 && alpha <= 2.0))
            throw std::invalid_argument("stable_spec: alpha must lie in (1, 2]");
    }
};

// Laplace exponent psi(lam) = lam^alpha / alpha, lam >= 0.
double laplace_exponent(const stable_spec& spec, double lam);

// Constants of the Chambers-Mallows-Stuck map for a fixed alpha. Hoisted
// out of the per-draw call because path simulation draws billions of
// increments with the same alpha.
struct cms_params {
    double alpha;
    double shift;    // arctan(tan(pi alpha/2)) / alpha
    double scale;    // (1 + tan^2(pi alpha/2))^(1/(2 alpha))
    double inv_alpha;
    double tail_exp; // (1 - alpha) / alpha
};

cms_params cms_precompute(double alpha);

// CMS draw of a standard totally-skewed (beta = +1) stable variate from
// u ~ Uniform(-pi/2, pi/2) and w ~ Exp(1).
inline double cms_draw(const cms_params& c, double u, double w) {
    double au = c.alpha * (u + c.shift);
    return c.scale * std::sin(au) / std::pow(std::cos(u), c.inv_alpha)
         * std::pow(std::cos(u - au) / w, c.tail_exp);
}

// Convenience wrapper; tests drive this deterministically.
double cms_standard_skewed(double alpha, double u, double w);

// Scale that maps the CMS standard draw onto an increment of Z over dt:
// (dt |cos(pi alpha / 2)| / alpha)^(1/alpha). For alpha = 2 the Gaussian
// branch uses sqrt(dt) directly.
double increment_scale(double alpha, double dt);

// One increment of Z over a step of length dt.
double sample_increment(const stable_spec& spec, double dt, rng_stream& rng);

// E|Z_1|^p for 0 < p < alpha, computed from the characteristic function:
// E|X|^p = C_p^{-1} Integral_0^inf (1 - Re cf(t)) t^{-1-p} dt with
// C_p = pi / (2 Gamma(1+p) sin(p pi/2)); closed form for alpha = 2.
double abs_moment(const stable_spec& spec, double p);

} // namespace scir
