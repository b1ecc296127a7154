#pragma once

// Conditional least squares estimators on unit-spaced observations and the
// high-frequency volatility estimator.
//
// Both drift families regress X_k on X_{k-1} through the skeleton
// X_k = rho + gamma X_{k-1} + eps_k, then invert gamma = e^{-b},
// rho = a(1-gamma)/b. The weighted family divides each squared residual
// by (X_{k-1} + 1), which tames the heavy-tailed regressor.

#include "scir/simulate.hpp"

#include <cstdint>
#include <string>

namespace scir {

enum class est_family { clse, wclse };

std::string family_name(est_family f);

struct estimate_set {
    est_family family = est_family::clse;
    std::size_t n = 0;      // number of increments used
    std::uint64_t seed = 0; // provenance tag for campaign CSV rows
    double gamma_hat = 0.0;
    double rho_hat = 0.0;
    double b_hat = 0.0;     // NaN unless gamma_hat in (0,1)
    double a_hat = 0.0;     // NaN unless gamma_hat in (0,1)
    bool drift_defined = false; // gamma_hat in (0,1), so (b_hat, a_hat) are valid
};

// Ordinary conditional least squares. Throws std::domain_error on a
// degenerate sample (constant regressor). gamma outside (0,1) is returned
// with drift_defined = false rather than failing, so campaigns can count
// such replications.
estimate_set clse(const observations& obs);

// Weighted conditional least squares (weights 1/(X_{k-1}+1)).
estimate_set wclse(const observations& obs);

// High-frequency volatility estimator:
//   sigma_hat = [n^{1/p-1/alpha} E^{1/p}|Z_1|^p]^{-1}
//               (sum_k |(X_{k/n}-X_{(k-1)/n}) / (X_{(k-1)/n}^{1/alpha} + n^{-delta})|^p)^{1/p}
// with 0 < p < alpha and 0 < delta < min(1-1/alpha, 1/alpha^2).
double sigma_hat(const observations& obs_highfreq, double alpha, double p, double delta);

double default_p(double alpha);     // alpha/2
double default_delta(double alpha); // 0.9 * min(1-1/alpha, 1/alpha^2)

} // namespace scir
