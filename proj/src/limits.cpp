#include "scir/limits.hpp"

#include "scir/kahan.hpp"
#include "scir/stable.hpp"

#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_gamma.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>

namespace scir {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double golden_ratio = 1.6180339887498948482;

// Gamma(-x) for non-integer x > 0, by reflection.
double gamma_of_negative(double x) {
    return -pi / (std::sin(pi * x) * gsl_sf_gamma(1.0 + x));
}

// (-i mu)^nu on the principal branch, mu real:
// |mu|^nu exp(-i nu pi/2 sign(mu)).
std::complex<double> neg_i_pow(double mu, double nu) {
    if (mu == 0.0) return {0.0, 0.0};
    double mod = std::pow(std::fabs(mu), nu);
    double arg = -0.5 * nu * pi * (mu > 0.0 ? 1.0 : -1.0);
    return {mod * std::cos(arg), mod * std::sin(arg)};
}

} // namespace

// ============================================================
// Normalization schedules and ergodic functionals
// ============================================================

normalization_schedule normalization(double alpha, double n) {
    if (!(alpha > 1.0 && alpha <= 2.0))
        throw std::invalid_argument("normalization: alpha must lie in (1, 2]");
    if (!(n >= 1.0)) throw std::invalid_argument("normalization: n must be >= 1");
    normalization_schedule s;
    s.a_n = std::pow(n, 1.0 / alpha);
    s.c_n = std::pow(n, (alpha + 1.0) / (alpha * alpha));
    s.wclse_rate = std::pow(n, (alpha - 1.0) / alpha);
    s.clse_rate = std::pow(n, (alpha - 1.0) / (alpha * alpha));
    return s;
}

ergodic_functionals estimate_ergodic_functionals(const model_params& p,
                                                 const std::vector<double>& stationary_draws) {
    if (stationary_draws.empty())
        throw std::invalid_argument("estimate_ergodic_functionals: no draws");
    kahan_sum acc;
    for (double x : stationary_draws) acc.add(1.0 / (1.0 + x));
    ergodic_functionals erg;
    erg.lambda_bar = acc.value() / static_cast<double>(stationary_draws.size());
    erg.f_const = (1.0 + p.a / p.b) * erg.lambda_bar - 1.0;
    return erg;
}

// ============================================================
// charfn_U: residual-sum limit
// ============================================================

std::complex<double> charfn_U(const model_params& p, double lam1, double lam2,
                              const std::vector<double>& stationary_draws) {
    if (lam1 < 0.0 || lam1 + lam2 < 0.0)
        throw std::domain_error("charfn_U: need lam1 >= 0 and lam1 + lam2 >= 0");
    if (stationary_draws.empty()) throw std::invalid_argument("charfn_U: no draws");

    tail_constants_t tc = tail_constants(p, 1.0);
    kahan_sum acc;
    for (double x : stationary_draws) {
        double base = lam1 + lam2 / (1.0 + x);
        acc.add(std::pow(base, p.alpha) * (tc.q_alpha_t + tc.p_alpha_t * x));
    }
    double e = acc.value() / static_cast<double>(stationary_draws.size());
    double scale = std::pow(p.sigma, p.alpha) / p.alpha * e;
    // exponent scale * e^{-i pi alpha / 2}; real part <= 0 on (1, 2]
    std::complex<double> expo(scale * std::cos(0.5 * pi * p.alpha),
                              -scale * std::sin(0.5 * pi * p.alpha));
    return std::exp(expo);
}

// ============================================================
// charfn_S: quadratic/cross-sum limit
// ============================================================

namespace {

// One inner V factor of the charfn_S integrand: phi(xi) = E e^{i xi V}.
// Either the exact characteristic function of V = s_V Z_1 or the empirical
// average over a draw set. The empirical form uses a fourth-order moment
// expansion when |xi| max|V| is small; below that scale the full sum is
// indistinguishable from the expansion and costs O(N) per quadrature node
// across the many decades the outer integral spans.
class inner_cf {
public:
    static inner_cf closed_form(double s_v, double alpha) {
        inner_cf f;
        f.closed_ = true;
        f.s_v_ = s_v;
        f.alpha_ = alpha;
        f.mean_abs_ = s_v * abs_moment(stable_spec{alpha}, 1.0);
        return f;
    }

    static inner_cf empirical(const std::vector<double>& draws, double s_v, double alpha) {
        if (draws.empty()) throw std::invalid_argument("charfn_S: empty draw set");
        inner_cf f;
        f.closed_ = false;
        f.s_v_ = s_v;
        f.alpha_ = alpha;
        f.draws_ = &draws;
        kahan_sum m1, m2, m3, m4, mabs;
        double vmax = 0.0;
        for (double v : draws) {
            m1.add(v);
            m2.add(v * v);
            m3.add(v * v * v);
            m4.add(v * v * v * v);
            mabs.add(std::fabs(v));
            vmax = std::max(vmax, std::fabs(v));
        }
        double n = static_cast<double>(draws.size());
        f.m1_ = m1.value() / n;
        f.m2_ = m2.value() / n;
        f.m3_ = m3.value() / n;
        f.m4_ = m4.value() / n;
        f.mean_abs_ = mabs.value() / n;
        f.vmax_ = vmax;
        return f;
    }

    std::complex<double> operator()(double xi) const {
        if (closed_) return phi_exact(xi);
        if (std::fabs(xi) * vmax_ < 0.05) {
            // 1 + i xi m1 - xi^2 m2/2 - i xi^3 m3/6 + xi^4 m4/24; the
            // truncation error is below 1e-7 at this threshold
            double x2 = xi * xi;
            return {1.0 - 0.5 * x2 * m2_ + x2 * x2 * m4_ / 24.0,
                    xi * m1_ - x2 * xi * m3_ / 6.0};
        }
        double re = 0.0, im = 0.0;
        for (double v : *draws_) {
            double t = xi * v;
            re += std::cos(t);
            im += std::sin(t);
        }
        double n = static_cast<double>(draws_->size());
        return {re / n, im / n};
    }

    // Law-based envelope |phi_V(xi)| = exp(cos(pi alpha/2) |s_V xi|^alpha / alpha),
    // used for truncation bounds in both variants (the law of V is known even
    // when the value is computed from draws).
    double envelope(double xi) const {
        double m = std::pow(std::fabs(s_v_ * xi), alpha_);
        return std::exp(m * std::cos(0.5 * pi * alpha_) / alpha_);
    }

    double mean_abs() const { return mean_abs_; }

private:
    std::complex<double> phi_exact(double xi) const {
        // exp{(-i s_V xi)^alpha / alpha}
        std::complex<double> w = neg_i_pow(s_v_ * xi, alpha_);
        return std::exp(w / alpha_);
    }

    bool closed_ = true;
    double s_v_ = 0.0;
    double alpha_ = 0.0;
    const std::vector<double>* draws_ = nullptr;
    double m1_ = 0.0, m2_ = 0.0, m3_ = 0.0, m4_ = 0.0;
    double mean_abs_ = 0.0;
    double vmax_ = 0.0;
};

struct s_constants {
    double alpha, beta, c1, c2, prefac;
};

s_constants s_consts(const model_params& p) {
    if (!(p.alpha > 1.0 && p.alpha < golden_ratio))
        throw std::domain_error("charfn_S: alpha must lie in (1, (1+sqrt(5))/2)");
    s_constants c;
    c.alpha = p.alpha;
    c.beta = (p.alpha + 1.0) / p.alpha;
    c.c1 = std::exp(-2.0 * p.b) / (1.0 - std::exp(-2.0 * p.b));
    c.c2 = std::exp(-p.b * c.beta) / std::pow(1.0 - std::exp(-p.b * (p.alpha + 1.0)), 1.0 / p.alpha);
    c.prefac = p.a * std::pow(p.sigma, p.alpha)
               / (p.alpha * p.alpha * p.b * p.b * gamma_neg(p.alpha));
    return c;
}

constexpr double trunc_tol = 1e-10;
constexpr std::size_t gl_order = 16;

// Integrate f over [lo, hi] split into ceil(phase_span/3) Gauss-Legendre
// panels, where phase(y) bounds the oscillation budget of the integrand.
template <typename F, typename Phase>
std::complex<double> integrate_panel(const F& f, double lo, double hi, const Phase& phase,
                                     gsl_integration_glfixed_table* tbl) {
    double span = std::fabs(phase(hi) - phase(lo));
    std::size_t parts = std::min<std::size_t>(1000, static_cast<std::size_t>(span / 3.0) + 1);
    std::complex<double> total(0.0, 0.0);
    double w = (hi - lo) / static_cast<double>(parts);
    for (std::size_t j = 0; j < parts; ++j) {
        double a = lo + w * static_cast<double>(j);
        double b = a + w;
        for (std::size_t i = 0; i < gl_order; ++i) {
            double xi, wi;
            gsl_integration_glfixed_point(a, b, i, &xi, &wi, tbl);
            total += wi * f(xi);
        }
    }
    return total;
}

// Log-spaced panels (4 per decade) from lo to hi, each oscillation-refined.
template <typename F, typename Phase>
std::complex<double> integrate_log(const F& f, double lo, double hi, const Phase& phase,
                                   gsl_integration_glfixed_table* tbl) {
    std::complex<double> total(0.0, 0.0);
    double ratio = std::pow(10.0, 0.25);
    double a = lo;
    while (a < hi) {
        double b = std::min(hi, a * ratio);
        total += integrate_panel(f, a, b, phase, tbl);
        a = b;
    }
    return total;
}

std::complex<double> charfn_S_quad(const model_params& p, double lam1, double lam2,
                                   const inner_cf& phi1, const inner_cf& phi2) {
    s_constants c = s_consts(p);
    if (lam1 == 0.0 && lam2 == 0.0) return {1.0, 0.0};

    if (lam2 == 0.0) {
        // V drops out and the integral reduces exactly: substituting u = y^2,
        //   Integral (e^{i c1 lam1 u} - e^{i (1+c1) lam1 u}) u^{-nu-1} du / 2
        //     = (Gamma(-nu)/2) [(-i c1 lam1)^nu - (-i (1+c1) lam1)^nu],
        // with nu = alpha/2.
        double nu = 0.5 * c.alpha;
        std::complex<double> integral =
            0.5 * gamma_of_negative(nu)
            * (neg_i_pow(c.c1 * lam1, nu) - neg_i_pow((1.0 + c.c1) * lam1, nu));
        return std::exp(-c.prefac * integral);
    }

    // Lower truncation: |E[1 - e^{i lam1 y^2 + i lam2 y^beta V}]| is bounded
    // by |lam1| y^2 + |lam2| E|V| y^beta, so the mass of (0, ymin) is below
    //   |lam1| ymin^{2-alpha}/(2-alpha) + |lam2| E|V| ymin^{beta-alpha}/(beta-alpha),
    // each kept under trunc_tol/2. beta > alpha exactly on the admissible
    // alpha range, which is what makes the second exponent positive.
    double ymin = 1e-3;
    if (lam1 != 0.0) {
        double e = 2.0 - c.alpha;
        ymin = std::min(ymin, std::pow(0.5 * trunc_tol * e / std::fabs(lam1), 1.0 / e));
    }
    {
        double e = c.beta - c.alpha;
        double m1 = std::max(phi1.mean_abs(), 1e-300);
        ymin = std::min(ymin, std::pow(0.5 * trunc_tol * e / (std::fabs(lam2) * m1), 1.0 / e));
    }
    // Floor keeps y^{-alpha-1} finite; the mass below 1e-100 is negligible
    // for every admissible alpha.
    ymin = std::max(ymin, 1e-100);

    // Split point y_s: beyond it the full integrand is replaced by the
    // E2-only piece, dropping
    //   Integral_{y_s}^inf e^{i(1+c1) lam1 y^2} phi1 phi2 y^{-alpha-1} dy,
    // whose modulus is under envelope1(lam2 y_s^beta) y_s^{-alpha}/alpha.
    // This sidesteps the fast (1+c1) lam1 y^2 chirp where the amplitude is
    // already negligible. The empirical phi additionally floors at the MC
    // noise level, contributing a further O(noise * y_s^{-alpha}) which is
    // far below the Monte Carlo error already present.
    auto tail2_bound = [&](double y) {
        return phi1.envelope(lam2 * std::pow(y, c.beta)) * std::pow(y, -c.alpha) / c.alpha;
    };
    double ys_lo = 0.5, ys_hi = 1e4;
    while (tail2_bound(ys_hi) > 1e-8) ys_hi *= 2.0;
    for (int i = 0; i < 80; ++i) {
        double mid = std::sqrt(ys_lo * ys_hi);
        if (tail2_bound(mid) > 1e-8) ys_lo = mid; else ys_hi = mid;
    }
    double y_s = ys_hi;

    // Upper truncation for the E2-only piece, by the same envelope logic.
    auto tail1_bound = [&](double y) {
        return 2.0 * phi2.envelope(c.c2 * lam2 * std::pow(y, c.beta))
               * std::pow(y, -c.alpha) / c.alpha;
    };
    double ym_lo = y_s, ym_hi = std::max(2.0 * y_s, 1e4);
    while (tail1_bound(ym_hi) > trunc_tol) ym_hi *= 2.0;
    for (int i = 0; i < 80; ++i) {
        double mid = std::sqrt(ym_lo * ym_hi);
        if (tail1_bound(mid) > trunc_tol) ym_lo = mid; else ym_hi = mid;
    }
    double ymax = ym_hi;

    auto head = [&](double y) -> std::complex<double> {
        double th = lam1 * y * y;
        double yb = std::pow(y, c.beta);
        std::complex<double> e1 =
            1.0 - std::complex<double>(std::cos(th), std::sin(th)) * phi1(lam2 * yb);
        double th2 = c.c1 * lam1 * y * y;
        std::complex<double> e2 =
            std::complex<double>(std::cos(th2), std::sin(th2)) * phi2(c.c2 * lam2 * yb);
        return e1 * e2 * std::pow(y, -c.alpha - 1.0);
    };
    auto tail1 = [&](double y) -> std::complex<double> {
        double th2 = c.c1 * lam1 * y * y;
        double yb = std::pow(y, c.beta);
        std::complex<double> e2 =
            std::complex<double>(std::cos(th2), std::sin(th2)) * phi2(c.c2 * lam2 * yb);
        return e2 * std::pow(y, -c.alpha - 1.0);
    };

    // Oscillation budgets: deterministic chirps plus the V-phase at the
    // scale of the mean draw magnitude. Heavier draws oscillate faster but
    // carry 1/N weight each; under-resolving them perturbs the result at
    // the Monte Carlo noise level, not systematically.
    double mabs1 = phi1.mean_abs(), mabs2 = phi2.mean_abs();
    auto phase_head = [&](double y) {
        return (1.0 + c.c1) * std::fabs(lam1) * y * y
               + std::fabs(lam2) * std::pow(y, c.beta) * (mabs1 + c.c2 * mabs2);
    };
    auto phase_tail = [&](double y) {
        return c.c1 * std::fabs(lam1) * y * y
               + c.c2 * std::fabs(lam2) * std::pow(y, c.beta) * mabs2;
    };

    std::unique_ptr<gsl_integration_glfixed_table, void (*)(gsl_integration_glfixed_table*)>
        tbl(gsl_integration_glfixed_table_alloc(gl_order), gsl_integration_glfixed_table_free);

    std::complex<double> integral = integrate_log(head, ymin, y_s, phase_head, tbl.get())
                                    + integrate_log(tail1, y_s, ymax, phase_tail, tbl.get());
    return std::exp(-c.prefac * integral);
}

} // namespace

std::complex<double> charfn_S(const model_params& p, double lam1, double lam2,
                              const std::vector<double>& v1_draws,
                              const std::vector<double>& v2_draws) {
    double sv = v_scale(p);
    return charfn_S_quad(p, lam1, lam2, inner_cf::empirical(v1_draws, sv, p.alpha),
                         inner_cf::empirical(v2_draws, sv, p.alpha));
}

std::complex<double> charfn_S_closed(const model_params& p, double lam1, double lam2) {
    double sv = v_scale(p);
    inner_cf phi = inner_cf::closed_form(sv, p.alpha);
    return charfn_S_quad(p, lam1, lam2, phi, phi);
}

// ============================================================
// Limit maps
// ============================================================

std::pair<double, double> limit_map_wclse(double u1, double u2, const model_params& p,
                                          const ergodic_functionals& erg) {
    if (std::fabs(erg.f_const) < 1e-3)
        throw std::domain_error("limit_map_wclse: |F| < 1e-3, divisor not trustworthy");
    double eb = std::exp(p.b);
    double first = eb * (u2 - erg.lambda_bar * u1);
    double second = (p.a * erg.lambda_bar + p.b * (erg.lambda_bar - 1.0))
                        / (1.0 - std::exp(-p.b)) * u1
                    + p.a / p.b * first;
    return {first / erg.f_const, second / erg.f_const};
}

std::pair<double, double> limit_map_clse(double s1, double s2, const model_params& p) {
    if (s1 == 0.0) throw std::domain_error("limit_map_clse: s1 must be nonzero");
    double eb = std::exp(p.b);
    double base = -eb * s2 / s1;
    return {base, p.a / p.b * base};
}

std::complex<double> empirical_charfn(const std::vector<std::array<double, 2>>& samples,
                                      double lam1, double lam2) {
    if (samples.empty()) throw std::invalid_argument("empirical_charfn: no samples");
    kahan_sum re, im;
    for (const auto& v : samples) {
        double t = lam1 * v[0] + lam2 * v[1];
        re.add(std::cos(t));
        im.add(std::sin(t));
    }
    double n = static_cast<double>(samples.size());
    return {re.value() / n, im.value() / n};
}

// ============================================================
// Weighted limit: matrix, composed CF, evaluation grid
// ============================================================

std::array<double, 4> wclse_limit_matrix(const model_params& p, const ergodic_functionals& erg) {
    if (std::fabs(erg.f_const) < 1e-3)
        throw std::domain_error("wclse_limit_matrix: |F| < 1e-3, divisor not trustworthy");
    double eb = std::exp(p.b);
    double lb = erg.lambda_bar;
    double c1 = (p.a * lb + p.b * (lb - 1.0)) / (1.0 - std::exp(-p.b));
    double f = erg.f_const;
    return {-eb * lb / f, eb / f,
            (c1 - p.a / p.b * eb * lb) / f, p.a / p.b * eb / f};
}

std::complex<double> wclse_limit_charfn(const model_params& p, const ergodic_functionals& erg,
                                        const std::vector<double>& stationary_draws,
                                        double t1, double t2) {
    std::array<double, 4> m = wclse_limit_matrix(p, erg);
    // M^T t
    double l1 = m[0] * t1 + m[2] * t2;
    double l2 = m[1] * t1 + m[3] * t2;
    if (l1 >= 0.0 && l1 + l2 >= 0.0) return charfn_U(p, l1, l2, stationary_draws);
    if (-l1 >= 0.0 && -(l1 + l2) >= 0.0)
        return std::conj(charfn_U(p, -l1, -l2, stationary_draws));
    throw std::domain_error("wclse_limit_charfn: direction invalid in both signs");
}

std::vector<std::array<double, 2>> wclse_cf_grid(const model_params& p,
                                                 const ergodic_functionals& erg,
                                                 const std::vector<double>& stationary_draws) {
    std::array<double, 4> m = wclse_limit_matrix(p, erg);
    auto valid = [&](double deg) {
        double th = deg * pi / 180.0;
        double t1 = std::cos(th), t2 = std::sin(th);
        double l1 = m[0] * t1 + m[2] * t2;
        double l2 = m[1] * t1 + m[3] * t2;
        return (l1 >= 0.0 && l1 + l2 >= 0.0) || (-l1 >= 0.0 && -(l1 + l2) >= 0.0);
    };

    // Validity is a property of the direction alone (the constraints are
    // homogeneous), so scan the circle and keep the longest contiguous arc.
    std::vector<int> degs;
    for (int d = 0; d < 360; d += 2)
        if (valid(static_cast<double>(d))) degs.push_back(d);
    if (degs.empty()) throw std::runtime_error("wclse_cf_grid: no valid direction found");

    std::vector<std::vector<int>> arcs(1, std::vector<int>{degs[0]});
    for (std::size_t i = 1; i < degs.size(); ++i) {
        if (degs[i] - arcs.back().back() <= 2) arcs.back().push_back(degs[i]);
        else arcs.emplace_back(std::vector<int>{degs[i]});
    }
    if (arcs.size() > 1 && arcs.front().front() == 0 && arcs.back().back() == 358) {
        for (int d : arcs.front()) arcs.back().push_back(d + 360);
        arcs.erase(arcs.begin());
    }
    const std::vector<int>& arc =
        *std::max_element(arcs.begin(), arcs.end(),
                          [](const auto& x, const auto& y) { return x.size() < y.size(); });
    double lo = static_cast<double>(arc.front());
    double hi = static_cast<double>(arc.back());

    std::vector<std::array<double, 2>> grid;
    for (double frac : {0.3, 0.5, 0.7}) {
        double th = (lo + frac * (hi - lo)) * pi / 180.0;
        double d1 = std::cos(th), d2 = std::sin(th);
        for (double target : {0.8, 0.55, 0.35}) {
            // |CF| decreases in the radius along a fixed direction (the
            // exponent's real part scales like r^alpha), so bisect.
            double rlo = 1e-4, rhi = 10.0;
            for (int it = 0; it < 40; ++it) {
                double rm = 0.5 * (rlo + rhi);
                double mod = std::abs(
                    wclse_limit_charfn(p, erg, stationary_draws, rm * d1, rm * d2));
                if (mod > target) rlo = rm; else rhi = rm;
            }
            double r = 0.5 * (rlo + rhi);
            grid.push_back({r * d1, r * d2});
        }
    }
    return grid;
}

} // namespace scir
