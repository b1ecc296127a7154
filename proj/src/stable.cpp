#include "scir/stable.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_gamma.h>

#include <cmath>
#include <memory>
#include <stdexcept>

namespace scir {

namespace {

constexpr double pi = 3.14159265358979323846;

// GSL aborts on error by default; quadrature helpers run with the handler
// off and check return codes instead.
struct gsl_handler_guard {
    gsl_error_handler_t* old;
    gsl_handler_guard() : old(gsl_set_error_handler_off()) {}
    ~gsl_handler_guard() { gsl_set_error_handler(old); }
};

struct abs_moment_ctx {
    double alpha;
    double p;
    double cos_term; // cos(pi alpha / 2), negative on (1,2)
    double sin_term; // sin(pi alpha / 2)
};

// Integrand (1 - Re cf(t)) / t^{1+p} with cf(t) = exp((-it)^alpha / alpha).
// On t > 0 the principal branch gives
// (-it)^alpha = t^alpha (cos(pi alpha/2) - i sin(pi alpha/2)).
double abs_moment_integrand(double t, void* params) {
    const auto* c = static_cast<const abs_moment_ctx*>(params);
    double ta = std::pow(t, c->alpha);
    double re_cf = std::exp(ta * c->cos_term / c->alpha) * std::cos(ta * c->sin_term / c->alpha);
    return (1.0 - re_cf) / std::pow(t, 1.0 + c->p);
}

} // namespace

double laplace_exponent(const stable_spec& spec, double lam) {
    if (lam < 0.0) throw std::invalid_argument("laplace_exponent: lam must be >= 0");
    return std::pow(lam, spec.alpha) / spec.alpha;
}

cms_params cms_precompute(double alpha) {
    double ta = std::tan(pi * alpha / 2.0);
    return {alpha,
            std::atan(ta) / alpha,
            std::pow(1.0 + ta * ta, 1.0 / (2.0 * alpha)),
            1.0 / alpha,
            (1.0 - alpha) / alpha};
}

double cms_standard_skewed(double alpha, double u, double w) {
    return cms_draw(cms_precompute(alpha), u, w);
}

double increment_scale(double alpha, double dt) {
    if (alpha == 2.0) return std::sqrt(dt);
    return std::pow(dt * std::fabs(std::cos(pi * alpha / 2.0)) / alpha, 1.0 / alpha);
}

double sample_increment(const stable_spec& spec, double dt, rng_stream& rng) {
    if (!(dt > 0.0)) throw std::invalid_argument("sample_increment: dt must be > 0");
    double draw;
    if (spec.alpha == 2.0) {
        draw = rng.normal() * increment_scale(2.0, dt);
    } else {
        double u = rng.uniform_angle();
        double w = rng.exponential();
        draw = increment_scale(spec.alpha, dt) * cms_standard_skewed(spec.alpha, u, w);
    }
    if (!std::isfinite(draw)) throw std::runtime_error("sample_increment: non-finite draw");
    return draw;
}

double abs_moment(const stable_spec& spec, double p) {
    if (!(p > 0.0 && p < spec.alpha))
        throw std::invalid_argument("abs_moment: requires 0 < p < alpha");
    if (spec.alpha == 2.0) {
        // Z_1 ~ N(0,1) under this normalization.
        return std::pow(2.0, p / 2.0) * gsl_sf_gamma((p + 1.0) / 2.0) / std::sqrt(pi);
    }

    gsl_handler_guard guard;
    abs_moment_ctx ctx{spec.alpha, p, std::cos(pi * spec.alpha / 2.0), std::sin(pi * spec.alpha / 2.0)};
    gsl_function f;
    f.function = &abs_moment_integrand;
    f.params = &ctx;

    std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)>
        ws(gsl_integration_workspace_alloc(4000), &gsl_integration_workspace_free);

    // The integrand behaves like t^(alpha-1-p) near zero (integrable since
    // p < alpha) and like t^(-1-p) at infinity; split at t = 1.
    double r1 = 0.0, e1 = 0.0, r2 = 0.0, e2 = 0.0;
    int s1 = gsl_integration_qags(&f, 0.0, 1.0, 1e-12, 1e-10, 4000, ws.get(), &r1, &e1);
    int s2 = gsl_integration_qagiu(&f, 1.0, 1e-12, 1e-10, 4000, ws.get(), &r2, &e2);
    if (s1 != GSL_SUCCESS || s2 != GSL_SUCCESS)
        throw std::runtime_error("abs_moment: quadrature failed to converge");

    double cp = pi / (2.0 * gsl_sf_gamma(1.0 + p) * std::sin(p * pi / 2.0));
    return (r1 + r2) / cp;
}

} // namespace scir
