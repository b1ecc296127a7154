#include "scir/diagnostics.hpp"

#include "scir/kahan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace scir {

namespace {

struct ols_fit {
    double slope;
    double intercept;
    double r2;
};

ols_fit ols(const std::vector<double>& x, const std::vector<double>& y) {
    std::size_t n = x.size();
    kahan_sum sx, sy;
    for (std::size_t i = 0; i < n; ++i) {
        sx.add(x[i]);
        sy.add(y[i]);
    }
    double mx = sx.value() / static_cast<double>(n);
    double my = sy.value() / static_cast<double>(n);
    kahan_sum sxx, sxy;
    for (std::size_t i = 0; i < n; ++i) {
        sxx.add((x[i] - mx) * (x[i] - mx));
        sxy.add((x[i] - mx) * (y[i] - my));
    }
    if (sxx.value() <= 0.0)
        throw std::invalid_argument("ols: regressor is constant");
    ols_fit f;
    f.slope = sxy.value() / sxx.value();
    f.intercept = my - f.slope * mx;
    kahan_sum ssres, sstot;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (f.intercept + f.slope * x[i]);
        ssres.add(r * r);
        sstot.add((y[i] - my) * (y[i] - my));
    }
    // A flat response fitted with zero residual is a perfect fit.
    f.r2 = sstot.value() > 0.0 ? 1.0 - ssres.value() / sstot.value() : 1.0;
    f.r2 = std::min(1.0, std::max(0.0, f.r2));
    return f;
}

} // namespace

// ============================================================
// Hill estimator
// ============================================================

double hill(const std::vector<double>& samples, std::size_t k) {
    if (k < 10 || k >= samples.size())
        throw std::invalid_argument("hill: need 10 <= k < sample count");
    for (double s : samples)
        if (!(s > 0.0)) throw std::invalid_argument("hill: samples must be positive");

    std::vector<double> top(samples);
    std::partial_sort(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k + 1), top.end(),
                      std::greater<double>());
    double ref = std::log(top[k]);
    kahan_sum acc;
    for (std::size_t i = 0; i < k; ++i) acc.add(std::log(top[i]) - ref);
    double mean_log = acc.value() / static_cast<double>(k);
    if (mean_log <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / mean_log;
}

std::size_t hill_default_k(std::size_t n) {
    return static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 2.0 / 3.0)));
}

// ============================================================
// Rate regression
// ============================================================

rate_fit rate_regression(const std::vector<double>& ns,
                         const std::vector<double>& median_abs_errors) {
    if (ns.size() != median_abs_errors.size() || ns.size() < 2)
        throw std::invalid_argument("rate_regression: need >= 2 matching points");
    rate_fit fit;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (!(ns[i] > 0.0) || !(median_abs_errors[i] > 0.0))
            throw std::invalid_argument("rate_regression: entries must be positive");
        fit.log_n.push_back(std::log(ns[i]));
        fit.log_err.push_back(std::log(median_abs_errors[i]));
    }
    ols_fit f = ols(fit.log_n, fit.log_err);
    fit.slope = f.slope;
    fit.intercept = f.intercept;
    fit.r2 = f.r2;
    return fit;
}

// ============================================================
// Laplace comparison
// ============================================================

double laplace_compare(const std::vector<double>& samples,
                       const std::vector<double>& lam_grid,
                       const std::function<double(double)>& reference) {
    if (lam_grid.empty()) return 0.0;
    if (samples.empty()) throw std::invalid_argument("laplace_compare: no samples");
    double worst = 0.0;
    for (double lam : lam_grid) {
        kahan_sum acc;
        for (double x : samples) acc.add(std::exp(-lam * x));
        double emp = acc.value() / static_cast<double>(samples.size());
        double ref = reference(lam);
        worst = std::max(worst, std::fabs(emp - ref) / std::fabs(ref));
    }
    return worst;
}

// ============================================================
// Mixing diagnostics
// ============================================================

std::vector<double> mixing_covariances(const path& p, const std::vector<double>& lags) {
    std::size_t n = p.values.size();
    if (n < 4) throw std::invalid_argument("mixing_covariances: path too short");
    if (!(p.dt > 0.0)) throw std::invalid_argument("mixing_covariances: path has no grid");

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = std::exp(-p.values[i]);
    kahan_sum sy;
    for (double v : y) sy.add(v);
    double mean = sy.value() / static_cast<double>(n);

    std::vector<double> covs;
    covs.reserve(lags.size());
    for (double lag : lags) {
        auto steps = static_cast<std::size_t>(std::llround(lag / p.dt));
        if (steps == 0 || steps >= n / 2)
            throw std::invalid_argument("mixing_covariances: lag outside usable range");
        kahan_sum acc;
        for (std::size_t i = 0; i + steps < n; ++i)
            acc.add((y[i] - mean) * (y[i + steps] - mean));
        covs.push_back(acc.value() / static_cast<double>(n - steps));
    }
    return covs;
}

double fit_exponential_rate(const std::vector<double>& lags, const std::vector<double>& covs) {
    if (lags.size() != covs.size())
        throw std::invalid_argument("fit_exponential_rate: size mismatch");
    std::vector<double> t, logc;
    for (std::size_t i = 0; i < covs.size(); ++i) {
        if (covs[i] > 0.0) {
            t.push_back(lags[i]);
            logc.push_back(std::log(covs[i]));
        }
    }
    if (t.size() < 2)
        throw std::runtime_error("fit_exponential_rate: fewer than two positive covariances");
    return -ols(t, logc).slope;
}

double mixing_decay(const path& p, const std::vector<double>& lags) {
    return fit_exponential_rate(lags, mixing_covariances(p, lags));
}

} // namespace scir
