#include "scir/model.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_gamma.h>

#include <cmath>
#include <limits>
#include <memory>

namespace scir {

namespace {

constexpr double pi = 3.14159265358979323846;

struct gsl_handler_guard {
    gsl_error_handler_t* old;
    gsl_handler_guard() : old(gsl_set_error_handler_off()) {}
    ~gsl_handler_guard() { gsl_set_error_handler(old); }
};

using ws_ptr = std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)>;

ws_ptr make_workspace(std::size_t n) {
    return ws_ptr(gsl_integration_workspace_alloc(n), &gsl_integration_workspace_free);
}

struct int_v_ctx {
    const model_params* p;
    double lam;
};

double int_v_integrand(double s, void* params) {
    const auto* c = static_cast<const int_v_ctx*>(params);
    return v(*c->p, c->lam, s);
}

struct stat_ctx {
    const model_params* p;
};

double stationary_integrand(double z, void* params) {
    const auto* c = static_cast<const stat_ctx*>(params);
    const model_params& p = *c->p;
    return p.alpha * p.a / (p.alpha * p.b + std::pow(p.sigma, p.alpha) * std::pow(z, p.alpha - 1.0));
}

} // namespace

derived_params derive(const model_params& p) {
    double gamma = std::exp(-p.b);
    return {gamma, p.a / p.b * (1.0 - gamma)};
}

double phi(const model_params& p, double z) {
    if (z < 0.0) throw std::invalid_argument("phi: z must be >= 0");
    return p.b * z + std::pow(p.sigma, p.alpha) / p.alpha * std::pow(z, p.alpha);
}

double gamma_neg(double alpha) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw std::domain_error("gamma_neg: alpha must lie in (1, 2)");
    return -pi / (std::sin(pi * alpha) * gsl_sf_gamma(1.0 + alpha));
}

double v(const model_params& p, double lam, double t) {
    if (lam < 0.0) throw std::invalid_argument("v: lam must be >= 0");
    if (t < 0.0) throw std::invalid_argument("v: t must be >= 0");
    if (lam == 0.0 || t == 0.0) return lam * std::exp(-p.b * t);
    double am1 = p.alpha - 1.0;
    double bracket = 1.0 + std::pow(p.sigma, p.alpha) / (p.alpha * p.b) * std::pow(lam, am1)
                           * (1.0 - std::exp(-am1 * p.b * t));
    return std::exp(-p.b * t) * lam * std::pow(bracket, -1.0 / am1);
}

double int_v(const model_params& p, double lam, double t) {
    if (lam < 0.0 || t < 0.0) throw std::invalid_argument("int_v: lam and t must be >= 0");
    if (lam == 0.0 || t == 0.0) return 0.0;

    gsl_handler_guard guard;
    int_v_ctx ctx{&p, lam};
    gsl_function f;
    f.function = &int_v_integrand;
    f.params = &ctx;

    auto ws = make_workspace(10000);
    double result = 0.0, abserr = 0.0;
    int status = gsl_integration_qag(&f, 0.0, t, 1e-10, 1e-12, 10000,
                                     GSL_INTEG_GAUSS61, ws.get(), &result, &abserr);
    if (status != GSL_SUCCESS && abserr > 1e-9)
        throw std::runtime_error("int_v: quadrature failed to converge");
    return result;
}

double transition_laplace(const model_params& p, double x, double t, double lam) {
    if (x < 0.0) throw std::invalid_argument("transition_laplace: x must be >= 0");
    return std::exp(-x * v(p, lam, t) - p.a * int_v(p, lam, t));
}

double transition_mean(const model_params& p, double x, double t) {
    if (x < 0.0 || t < 0.0) throw std::invalid_argument("transition_mean: x and t must be >= 0");
    double e = std::exp(-p.b * t);
    return x * e + p.a / p.b * (1.0 - e);
}

double stationary_laplace(const model_params& p, double lam) {
    if (lam < 0.0) throw std::invalid_argument("stationary_laplace: lam must be >= 0");
    if (lam == 0.0) return 1.0;

    gsl_handler_guard guard;
    stat_ctx ctx{&p};
    gsl_function f;
    f.function = &stationary_integrand;
    f.params = &ctx;

    auto ws = make_workspace(10000);
    double result = 0.0, abserr = 0.0;
    int status = gsl_integration_qag(&f, 0.0, lam, 1e-10, 1e-12, 10000,
                                     GSL_INTEG_GAUSS61, ws.get(), &result, &abserr);
    if (status != GSL_SUCCESS && abserr > 1e-9)
        throw std::runtime_error("stationary_laplace: quadrature failed to converge");
    return std::exp(-result);
}

double stationary_mean(const model_params& p) {
    return p.a / p.b;
}

tail_constants_t tail_constants(const model_params& p, double t) {
    if (t < 0.0) throw std::invalid_argument("tail_constants: t must be >= 0");
    double am1 = p.alpha - 1.0;
    double pa = (std::exp(-p.b * t) - std::exp(-p.alpha * p.b * t)) / (p.b * am1);
    double qa = p.a / p.b * ((1.0 - std::exp(-p.alpha * p.b * t)) / (p.alpha * p.b) - pa);
    double tail = std::numeric_limits<double>::quiet_NaN();
    if (p.alpha < 2.0) tail = stationary_tail_constant(p);
    return {pa, qa, tail};
}

double stationary_tail_constant(const model_params& p) {
    if (!(p.alpha < 2.0))
        throw std::domain_error("stationary_tail_constant: defined only for alpha in (1,2)");
    return p.a * std::pow(p.sigma, p.alpha)
         / (std::pow(p.alpha, 3.0) * p.b * p.b * gamma_neg(p.alpha));
}

double vbar(const model_params& p, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("vbar: t must be > 0 (limit is infinite at 0)");
    double am1 = p.alpha - 1.0;
    double inner = std::pow(p.sigma, p.alpha) / (p.alpha * p.b) * (1.0 - std::exp(-am1 * p.b * t));
    return std::exp(-p.b * t) * std::pow(inner, -1.0 / am1);
}

double tv_bound(const model_params& p, double x, double t) {
    if (x < 0.0) throw std::invalid_argument("tv_bound: x must be >= 0");
    if (!(t >= 1.0)) throw std::invalid_argument("tv_bound: valid only for t >= 1");
    double v1 = vbar(p, 1.0);
    double decay = std::exp(-p.b * (t - 1.0));
    return 2.0 * (1.0 - std::exp(-v1 * x * decay)) + 2.0 * v1 * p.a / p.b * decay;
}

double mean_G(const model_params& p) {
    return p.a * std::pow(p.sigma, p.alpha) * (1.0 - std::exp(-p.alpha * p.b))
         / (p.alpha * p.b * p.b);
}

} // namespace scir
