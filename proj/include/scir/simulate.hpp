#pragma once

// Euler-Maruyama path simulation and the observation schemes the
// estimators consume. One rng stream per path; paths are embarrassingly
// parallel and immutable once built.

#include "scir/model.hpp"
#include "scir/rng.hpp"

#include <cstdint>
#include <vector>

namespace scir {

struct path {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> values; // values[i] = X at t0 + i*dt, all >= 0
    std::uint64_t seed = 0;

    double horizon() const { return dt * static_cast<double>(values.size() - 1); }
};

enum class obs_mode { low_frequency, high_frequency };

// Low frequency: X_0..X_n at unit spacing. High frequency: X_0..X_n at
// spacing 1/n on [0,1].
struct observations {
    obs_mode mode = obs_mode::low_frequency;
    std::vector<double> x;

    std::size_t n() const { return x.empty() ? 0 : x.size() - 1; }
};

// Residuals of the unit-spaced autoregression, eps_k = X_k - rho - gamma X_{k-1}.
struct residual_seq {
    std::vector<double> eps;
};

// Euler scheme with positivity clamp:
//   X_{t+dt} = max(0, X_t + (a - b X_t) dt + sigma max(X_t,0)^{1/alpha} dZ).
// The exact process is nonnegative; the clamp corrects discretization
// undershoot. Throws if the state turns non-finite (message carries the
// step index).
path simulate_path(const model_params& p, double x0, double horizon, double dt, rng_stream& rng);

// Smallest integer burn-in horizon T >= 1 with tv_bound(5a/b, T) < 1e-4.
double burn_in_horizon(const model_params& p);

// One draw from (approximately) the stationary law: Euler path from
// x0 = a/b over the burn-in horizon; returns the terminal value.
double sample_stationary(const model_params& p, rng_stream& rng, double dt = 1e-2);

// Stationary start, then n unit-spaced observations along one continuous
// Euler path (substeps of size dt). Returns X_0..X_n. burn_override > 0
// replaces the automatic burn-in horizon (rounded up to whole units).
observations sample_low_frequency(const model_params& p, std::size_t n, rng_stream& rng,
                                  double dt = 1e-2, double burn_override = 0.0);

// Stationary start, then n observations at spacing 1/n on [0,1], with at
// least 10 Euler substeps per observation gap.
observations sample_high_frequency(const model_params& p, std::size_t n, rng_stream& rng,
                                   int substeps = 10);

// eps_k = X_k - rho - gamma X_{k-1}; requires low-frequency observations.
residual_seq residuals(const observations& obs, const derived_params& d);

// Scale of the i.i.d. limit variable V = s_V Z_1:
// s_V = sigma ((e^{-b} - e^{-alpha b}) / ((alpha-1) b))^{1/alpha}.
double v_scale(const model_params& p);

// One draw of V.
double sample_V(const model_params& p, rng_stream& rng);

} // namespace scir
