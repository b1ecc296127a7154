#pragma once

// Tail-index estimation, rate regression, and Laplace/mixing diagnostics.
// All functions are deterministic given their inputs.

#include "scir/simulate.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace scir {

// Ordinary least squares fit of log(err) against log(n).
struct rate_fit {
    std::vector<double> log_n;
    std::vector<double> log_err;
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Hill tail-index estimator over the top-k order statistics:
//   [ (1/k) sum_{i=1..k} log(X_(i) / X_(k+1)) ]^{-1},
// X_(1) >= X_(2) >= ... Requires 10 <= k < samples.size() and strictly
// positive samples. Returns +inf when the top order statistics are all
// equal (constant tail has no finite index).
double hill(const std::vector<double>& samples, std::size_t k);

// Default tail fraction: ceil(n^{2/3}).
std::size_t hill_default_k(std::size_t n);

// OLS of log(median_abs_errors) on log(ns). Entries must be positive.
rate_fit rate_regression(const std::vector<double>& ns,
                         const std::vector<double>& median_abs_errors);

// Max over lam_grid of |empirical Laplace - reference(lam)| / reference(lam),
// with the empirical transform (1/N) sum e^{-lam x}. Empty grid gives 0.
double laplace_compare(const std::vector<double>& samples,
                       const std::vector<double>& lam_grid,
                       const std::function<double(double)>& reference);

// Sample covariance of (e^{-X_t}, e^{-X_{t+lag}}) along the path grid for
// each requested lag, lags in time units (multiples of the path dt).
std::vector<double> mixing_covariances(const path& p, const std::vector<double>& lags);

// Exponential fit c(lag) ~ C e^{-rate * lag} through the positive
// covariances; requires at least two of them. rate > 0 for a decaying
// sequence.
double fit_exponential_rate(const std::vector<double>& lags, const std::vector<double>& covs);

// Decay rate of cov(e^{-X_0}, e^{-X_lag}) along the path: the bounded
// functional sidesteps the infinite variance of X itself. Reported as a
// soft diagnostic of geometric mixing, not a theorem-level quantity.
double mixing_decay(const path& p, const std::vector<double>& lags);

} // namespace scir
