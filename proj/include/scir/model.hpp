#pragma once

// Analytic side of the stable CIR model
//   dX_t = (a - b X_t) dt + sigma X_{t-}^{1/alpha} dZ_t,
// where Z is the spectrally positive alpha-stable driver from stable.hpp.
// The process is a subcritical CBI process with branching mechanism
// phi(z) = b z + (sigma^alpha / alpha) z^alpha and immigration rate a.

#include <stdexcept>

namespace scir {

struct model_params {
    double a;     // immigration rate, > 0
    double b;     // mean-reversion rate, > 0
    double sigma; // volatility, > 0
    double alpha; // stability index, (1, 2]

    model_params(double a_, double b_, double sigma_, double alpha_)
        : a(a_), b(b_), sigma(sigma_), alpha(alpha_) {
        if (!(a > 0.0)) throw std::invalid_argument("model_params: a must be > 0");
        if (!(b > 0.0)) throw std::invalid_argument("model_params: b must be > 0");
        if (!(sigma > 0.0)) throw std::invalid_argument("model_params: sigma must be > 0");
        if (!(alpha > 1.0 && alpha <= 2.0))
            throw std::invalid_argument("model_params: alpha must lie in (1, 2]");
    }

    // Test-only escape hatch: the degenerate sigma = 0 skeleton is useful
    // for validating the simulator against the drift ODE.
    static model_params unchecked(double a_, double b_, double sigma_, double alpha_) {
        model_params p(1.0, 1.0, 1.0, 1.5);
        p.a = a_; p.b = b_; p.sigma = sigma_; p.alpha = alpha_;
        return p;
    }

private:
    model_params() = delete;
};

// Autoregression parameters of the unit-spaced skeleton:
// X_k = rho + gamma X_{k-1} + eps_k with gamma = e^{-b}, rho = a(1-gamma)/b.
struct derived_params {
    double gamma;
    double rho;
};

derived_params derive(const model_params& p);

// Branching mechanism phi(z) = b z + (sigma^alpha/alpha) z^alpha, z >= 0.
double phi(const model_params& p, double z);

// Gamma(-alpha) for alpha in (1,2), via the reflection formula
// Gamma(-alpha) = -pi / (sin(pi alpha) Gamma(1+alpha)). Positive on (1,2).
double gamma_neg(double alpha);

// Cumulant v_t(lam): the solution of dv/dt = -phi(v), v_0 = lam, in closed
// form (the power-law ODE linearizes in v^{1-alpha}):
//   v_t(lam) = e^{-bt} lam [1 + (sigma^alpha/(alpha b)) lam^{alpha-1}
//                              (1 - e^{-(alpha-1) b t})]^{-1/(alpha-1)}.
// Satisfies v_t(lam) <= lam e^{-bt}.
double v(const model_params& p, double lam, double t);

// Integral of s -> v_s(lam) over [0, t], by adaptive quadrature of the
// closed form (absolute tolerance 1e-10).
double int_v(const model_params& p, double lam, double t);

// Transition Laplace transform E_x[e^{-lam X_t}] = exp(-x v_t(lam) - a int_v).
double transition_laplace(const model_params& p, double x, double t, double lam);

// E_x[X_t] = x e^{-bt} + (a/b)(1 - e^{-bt}).
double transition_mean(const model_params& p, double x, double t);

// Stationary Laplace transform
// exp{ -Integral_0^lam alpha a dz / (alpha b + sigma^alpha z^{alpha-1}) }.
double stationary_laplace(const model_params& p, double lam);

// Stationary mean a/b.
double stationary_mean(const model_params& p);

// Constants governing the extremal behavior on horizon t:
//   p_alpha_t = (e^{-bt} - e^{-alpha b t}) / (b (alpha-1)),
//   q_alpha_t = (a/b) [ (1 - e^{-alpha b t})/(alpha b) - p_alpha_t ],
// and the stationary right-tail constant
//   stationary_tail = a sigma^alpha / (alpha^3 b^2 Gamma(-alpha)),
// i.e. P(X > x) ~ stationary_tail * x^{-alpha}. The tail constant exists
// only for alpha < 2; the struct carries NaN at alpha = 2 and the checked
// accessor below throws there.
struct tail_constants_t {
    double p_alpha_t;
    double q_alpha_t;
    double stationary_tail;
};

tail_constants_t tail_constants(const model_params& p, double t);
double stationary_tail_constant(const model_params& p); // throws for alpha = 2

// Decreasing-in-t envelope of v: vbar_t = lim_{lam->inf} v_t(lam),
//   vbar_t = e^{-bt} [(sigma^alpha/(alpha b)) (1 - e^{-(alpha-1) b t})]^{-1/(alpha-1)}.
// Throws for t <= 0 (the limit is infinite there).
double vbar(const model_params& p, double t);

// Total-variation ergodicity bound, valid for t >= 1:
//   ||P_t(x,.) - mu|| <= 2(1 - exp{-vbar_1 x e^{-b(t-1)}}) + 2 vbar_1 (a/b) e^{-b(t-1)}.
double tv_bound(const model_params& p, double x, double t);

// Mean of the functional G = sigma^alpha Integral_0^1 e^{-alpha b (1-s)} X_s ds
// under stationarity: E G = a sigma^alpha (1 - e^{-alpha b}) / (alpha b^2).
double mean_G(const model_params& p);

} // namespace scir
