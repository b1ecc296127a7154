#include "scir/estimate.hpp"

#include "scir/kahan.hpp"
#include "scir/stable.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace scir {

namespace {

constexpr double nan_ = std::numeric_limits<double>::quiet_NaN();

void require_low_frequency(const observations& obs, const char* who) {
    if (obs.mode != obs_mode::low_frequency)
        throw std::invalid_argument(std::string(who) + ": needs unit-spaced observations");
    if (obs.x.size() < 3)
        throw std::invalid_argument(std::string(who) + ": needs at least 2 increments");
}

// Fill b_hat / a_hat from the regression estimates when gamma lands in (0,1).
void finish_drift(estimate_set& e) {
    if (e.gamma_hat > 0.0 && e.gamma_hat < 1.0) {
        e.drift_defined = true;
        e.b_hat = -std::log(e.gamma_hat);
        e.a_hat = e.rho_hat * e.b_hat / (1.0 - e.gamma_hat);
    } else {
        e.drift_defined = false;
        e.b_hat = nan_;
        e.a_hat = nan_;
    }
}

} // namespace

std::string family_name(est_family f) {
    return f == est_family::clse ? "CLSE" : "WCLSE";
}

estimate_set clse(const observations& obs) {
    require_low_frequency(obs, "clse");
    const auto& x = obs.x;
    const auto n = static_cast<double>(x.size() - 1);

    kahan_sum s_prev, s_cur, s_cross, s_prev2;
    for (std::size_t k = 1; k < x.size(); ++k) {
        double xm = x[k - 1], xk = x[k];
        s_prev.add(xm);
        s_cur.add(xk);
        s_cross.add(xm * xk);
        s_prev2.add(xm * xm);
    }
    double sp = s_prev.value(), sc = s_cur.value();
    double den = sp * sp - n * s_prev2.value();
    double scale = sp * sp + n * s_prev2.value();
    if (std::fabs(den) <= 1e-12 * scale)
        throw std::domain_error("clse: degenerate sample (constant regressor)");

    estimate_set e;
    e.family = est_family::clse;
    e.n = x.size() - 1;
    e.gamma_hat = (sp * sc - n * s_cross.value()) / den;
    e.rho_hat = (sc - e.gamma_hat * sp) / n;
    finish_drift(e);
    return e;
}

estimate_set wclse(const observations& obs) {
    require_low_frequency(obs, "wclse");
    const auto& x = obs.x;
    const auto n = static_cast<double>(x.size() - 1);

    kahan_sum s_prev, s_cur, s_inv, s_cur_inv, s_prev1;
    for (std::size_t k = 1; k < x.size(); ++k) {
        double xm = x[k - 1], xk = x[k];
        double inv = 1.0 / (xm + 1.0);
        s_prev.add(xm);
        s_cur.add(xk);
        s_inv.add(inv);
        s_cur_inv.add(xk * inv);
        s_prev1.add(xm + 1.0);
    }
    double den = s_prev1.value() * s_inv.value() - n * n;
    double scale = s_prev1.value() * s_inv.value() + n * n;
    if (std::fabs(den) <= 1e-12 * scale)
        throw std::domain_error("wclse: degenerate sample (constant regressor)");

    estimate_set e;
    e.family = est_family::wclse;
    e.n = x.size() - 1;
    e.gamma_hat = (s_cur.value() * s_inv.value() - n * s_cur_inv.value()) / den;
    e.rho_hat = (s_cur.value() - e.gamma_hat * s_prev.value()) / n;
    finish_drift(e);
    return e;
}

double sigma_hat(const observations& obs_highfreq, double alpha, double p, double delta) {
    if (obs_highfreq.mode != obs_mode::high_frequency)
        throw std::invalid_argument("sigma_hat: needs high-frequency observations");
    const auto& x = obs_highfreq.x;
    if (x.size() < 11) throw std::invalid_argument("sigma_hat: needs n >= 10");
    if (!(p > 0.0 && p < alpha))
        throw std::invalid_argument("sigma_hat: requires 0 < p < alpha");
    double delta_max = std::min(1.0 - 1.0 / alpha, 1.0 / (alpha * alpha));
    if (!(delta > 0.0 && delta < delta_max))
        throw std::invalid_argument("sigma_hat: requires 0 < delta < min(1-1/alpha, 1/alpha^2)");

    const auto n = static_cast<double>(x.size() - 1);
    double reg = std::pow(n, -delta);
    double inv_alpha = 1.0 / alpha;

    kahan_sum s;
    for (std::size_t k = 1; k < x.size(); ++k) {
        double num = x[k] - x[k - 1];
        double den = std::pow(x[k - 1], inv_alpha) + reg;
        s.add(std::pow(std::fabs(num / den), p));
    }
    double m_p = abs_moment(stable_spec(alpha), p);
    return std::pow(s.value(), 1.0 / p) / (std::pow(n, 1.0 / p - inv_alpha) * std::pow(m_p, 1.0 / p));
}

double default_p(double alpha) { return alpha / 2.0; }

double default_delta(double alpha) {
    return 0.9 * std::min(1.0 - 1.0 / alpha, 1.0 / (alpha * alpha));
}

} // namespace scir
