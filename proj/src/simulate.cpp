#include "scir/simulate.hpp"

#include "scir/stable.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace scir {

namespace {

// Hot-loop stepper: advances the Euler state with precomputed per-alpha
// constants. The increment formula is shared with sample_increment via
// cms_draw, so the two paths cannot drift apart.
class euler_stepper {
public:
    euler_stepper(const model_params& p, double dt)
        : a_(p.a), b_(p.b), sigma_(p.sigma), dt_(dt),
          gaussian_(p.alpha == 2.0),
          inv_alpha_(1.0 / p.alpha),
          cms_(cms_precompute(p.alpha == 2.0 ? 1.5 : p.alpha)),
          scale_(increment_scale(p.alpha, dt)) {}

    double step(double x, rng_stream& rng) const {
        double dz;
        if (gaussian_) {
            dz = scale_ * rng.normal();
        } else {
            double u = rng.uniform_angle();
            double w = rng.exponential();
            dz = scale_ * cms_draw(cms_, u, w);
        }
        double xp = x > 0.0 ? x : 0.0;
        double diff = gaussian_ ? std::sqrt(xp) : std::pow(xp, inv_alpha_);
        double next = x + (a_ - b_ * x) * dt_ + sigma_ * diff * dz;
        return next > 0.0 ? next : 0.0;
    }

private:
    double a_, b_, sigma_, dt_;
    bool gaussian_;
    double inv_alpha_;
    cms_params cms_;
    double scale_;
};

void check_state(double x, std::size_t step) {
    if (!std::isfinite(x))
        throw std::runtime_error("simulate_path: non-finite state at step " + std::to_string(step));
}

// Advance x over n_units whole time units with `sub` substeps per unit,
// invoking `record` after each completed unit.
template <typename Record>
double run_units(const euler_stepper& st, double x, std::size_t n_units, std::size_t sub,
                 rng_stream& rng, Record&& record) {
    for (std::size_t k = 0; k < n_units; ++k) {
        for (std::size_t j = 0; j < sub; ++j) x = st.step(x, rng);
        check_state(x, (k + 1) * sub);
        record(x);
    }
    return x;
}

} // namespace

path simulate_path(const model_params& p, double x0, double horizon, double dt, rng_stream& rng) {
    if (x0 < 0.0) throw std::invalid_argument("simulate_path: x0 must be >= 0");
    if (!(horizon > 0.0)) throw std::invalid_argument("simulate_path: horizon must be > 0");
    if (!(dt > 0.0)) throw std::invalid_argument("simulate_path: dt must be > 0");

    auto n_steps = static_cast<std::size_t>(std::llround(horizon / dt));
    if (n_steps == 0) n_steps = 1;

    path out;
    out.t0 = 0.0;
    out.dt = dt;
    out.values.reserve(n_steps + 1);
    out.values.push_back(x0);

    euler_stepper st(p, dt);
    double x = x0;
    for (std::size_t k = 0; k < n_steps; ++k) {
        x = st.step(x, rng);
        if (!std::isfinite(x))
            throw std::runtime_error("simulate_path: non-finite state at step " + std::to_string(k + 1));
        out.values.push_back(x);
    }
    return out;
}

double burn_in_horizon(const model_params& p) {
    double x_ref = 5.0 * p.a / p.b;
    for (double t = 1.0; t <= 1e5; t += 1.0) {
        if (tv_bound(p, x_ref, t) < 1e-4) return t;
    }
    throw std::runtime_error("burn_in_horizon: bound does not reach 1e-4 by t = 1e5");
}

double sample_stationary(const model_params& p, rng_stream& rng, double dt) {
    if (!(dt > 0.0 && dt <= 1.0)) throw std::invalid_argument("sample_stationary: need 0 < dt <= 1");
    auto sub = static_cast<std::size_t>(std::llround(1.0 / dt));
    euler_stepper st(p, 1.0 / static_cast<double>(sub));
    auto burn = static_cast<std::size_t>(burn_in_horizon(p));
    return run_units(st, p.a / p.b, burn, sub, rng, [](double) {});
}

observations sample_low_frequency(const model_params& p, std::size_t n, rng_stream& rng, double dt,
                                  double burn_override) {
    if (n < 2) throw std::invalid_argument("sample_low_frequency: need n >= 2");
    if (!(dt > 0.0 && dt <= 1.0)) throw std::invalid_argument("sample_low_frequency: need 0 < dt <= 1");
    auto sub = static_cast<std::size_t>(std::llround(1.0 / dt));
    euler_stepper st(p, 1.0 / static_cast<double>(sub));

    observations obs;
    obs.mode = obs_mode::low_frequency;
    obs.x.reserve(n + 1);

    auto burn = burn_override > 0.0 ? static_cast<std::size_t>(std::ceil(burn_override))
                                    : static_cast<std::size_t>(burn_in_horizon(p));
    double x = run_units(st, p.a / p.b, burn, sub, rng, [](double) {});
    obs.x.push_back(x);
    run_units(st, x, n, sub, rng, [&obs](double xv) { obs.x.push_back(xv); });
    return obs;
}

observations sample_high_frequency(const model_params& p, std::size_t n, rng_stream& rng, int substeps) {
    if (n < 2) throw std::invalid_argument("sample_high_frequency: need n >= 2");
    if (substeps < 10) substeps = 10; // keep discretization error well under statistical error

    // Stationary start at the usual coarse resolution, then fine stepping.
    double x = sample_stationary(p, rng);

    double dt = 1.0 / (static_cast<double>(n) * substeps);
    euler_stepper st(p, dt);

    observations obs;
    obs.mode = obs_mode::high_frequency;
    obs.x.reserve(n + 1);
    obs.x.push_back(x);
    run_units(st, x, n, static_cast<std::size_t>(substeps), rng,
              [&obs](double xv) { obs.x.push_back(xv); });
    return obs;
}

residual_seq residuals(const observations& obs, const derived_params& d) {
    if (obs.mode != obs_mode::low_frequency)
        throw std::invalid_argument("residuals: defined for unit-spaced observations only");
    if (obs.x.size() < 2) throw std::invalid_argument("residuals: need at least X_0, X_1");

    residual_seq r;
    r.eps.reserve(obs.x.size() - 1);
    for (std::size_t k = 1; k < obs.x.size(); ++k)
        r.eps.push_back(obs.x[k] - d.rho - d.gamma * obs.x[k - 1]);
    return r;
}

double v_scale(const model_params& p) {
    return p.sigma * std::pow((std::exp(-p.b) - std::exp(-p.alpha * p.b))
                              / ((p.alpha - 1.0) * p.b), 1.0 / p.alpha);
}

double sample_V(const model_params& p, rng_stream& rng) {
    stable_spec spec(p.alpha);
    return v_scale(p) * sample_increment(spec, 1.0, rng);
}

} // namespace scir
