#pragma once

// Limit laws of the drift estimators: normalization schedules, the
// stationary functionals entering the weighted limit map, the limit
// characteristic functions of the fluctuation vectors (U1, U2) and
// (S1, S2), and the linear maps carrying them onto the estimator errors.
//
// (U1, U2) is the alpha-stable limit of the normalized residual sums
//   ( n^{-1/alpha} sum eps_k, n^{-1/alpha} sum eps_k/(1+X_{k-1}) ),
// and (S1, S2) the limit of
//   ( n^{-2/alpha} sum X_{k-1}^2, n^{-(alpha+1)/alpha^2} sum X_{k-1} eps_k ),
// the latter existing only for alpha below the golden ratio.

#include "scir/model.hpp"
#include "scir/simulate.hpp"

#include <array>
#include <complex>
#include <utility>
#include <vector>

namespace scir {

// Scaling sequences used by the partial-sum and estimator-error limits.
struct normalization_schedule {
    double a_n;         // n^{1/alpha}
    double c_n;         // n^{(alpha+1)/alpha^2}, equals a_n^{(alpha+1)/alpha}
    double wclse_rate;  // n^{(alpha-1)/alpha}
    double clse_rate;   // n^{(alpha-1)/alpha^2}
};

normalization_schedule normalization(double alpha, double n);

// Stationary functionals of the weighted estimator limit:
// lambda_bar = E[1/(1+X_0)] and f_const = (1 + a/b) lambda_bar - 1,
// the divisor of the weighted limit map.
struct ergodic_functionals {
    double lambda_bar;
    double f_const;
};

// Birkhoff average of 1/(1+x) over the supplied stationary draws.
ergodic_functionals estimate_ergodic_functionals(const model_params& p,
                                                 const std::vector<double>& stationary_draws);

// Characteristic function of the residual-sum limit (U1, U2):
//   E e^{i(lam1 U1 + lam2 U2)}
//     = exp{ (sigma^alpha/alpha) E[(lam1 + lam2/(1+X_0))^alpha (q1 + p1 X_0)]
//            e^{-i pi alpha / 2} },
// with (p1, q1) the horizon-1 tail constants and the expectation taken as a
// Monte Carlo average over the supplied stationary draws. Requires
// lam1 >= 0 and lam1 + lam2 >= 0 so the real power is well defined; other
// arguments are reachable through conjugate symmetry at the call site.
std::complex<double> charfn_U(const model_params& p, double lam1, double lam2,
                              const std::vector<double>& stationary_draws);

// Characteristic function of the quadratic/cross sum limit (S1, S2),
// defined for 1 < alpha < (1+sqrt(5))/2:
//   E e^{i(lam1 S1 + lam2 S2)}
//     = exp{ -A Integral_0^inf E[1 - e^{i lam1 y^2 + i lam2 y^beta V1}]
//                              E[e^{i c1 lam1 y^2 + i c2 lam2 y^beta V2}]
//                              y^{-alpha-1} dy },
// with A = a sigma^alpha / (alpha^2 b^2 Gamma(-alpha)), beta = (alpha+1)/alpha,
// c1 = e^{-2b}/(1-e^{-2b}), c2 = e^{-b beta}/(1-e^{-b(alpha+1)})^{1/alpha},
// and V1, V2 independent copies of the increment-limit variable V = s_V Z_1.
//
// The Monte Carlo variant evaluates the two inner expectations over the
// supplied draw sets; the closed variant replaces them with the exact
// characteristic function of V and serves as its oracle. Both share the
// outer quadrature. Throws std::domain_error when alpha is out of range.
std::complex<double> charfn_S(const model_params& p, double lam1, double lam2,
                              const std::vector<double>& v1_draws,
                              const std::vector<double>& v2_draws);
std::complex<double> charfn_S_closed(const model_params& p, double lam1, double lam2);

// Weighted-estimator limit map (error vector of (b_check, a_check)):
//   F^{-1} ( e^b (u2 - lambda_bar u1),
//            (1-e^{-b})^{-1} [a lambda_bar + b (lambda_bar - 1)] u1
//              + a b^{-1} e^b (u2 - lambda_bar u1) ).
// Throws std::domain_error when |f_const| < 1e-3: the map divides by F and
// a Monte Carlo estimate that small cannot be trusted for its sign.
std::pair<double, double> limit_map_wclse(double u1, double u2, const model_params& p,
                                          const ergodic_functionals& erg);

// Ordinary-estimator limit map: -e^b (1, a/b) s2 / s1. Requires s1 != 0.
std::pair<double, double> limit_map_clse(double s1, double s2, const model_params& p);

// (1/N) sum_j exp{i (lam1 v_j[0] + lam2 v_j[1])}.
std::complex<double> empirical_charfn(const std::vector<std::array<double, 2>>& samples,
                                      double lam1, double lam2);

// Row-major 2x2 matrix M of the weighted limit map, so that the limit of
// the scaled error vector is M (U1, U2) and its characteristic function at
// t equals charfn_U at M^T t (up to conjugation on the reflected domain).
std::array<double, 4> wclse_limit_matrix(const model_params& p, const ergodic_functionals& erg);

// charfn of M (U1, U2) at (t1, t2): charfn_U(M^T t), using conjugate
// symmetry when M^T t lands outside the valid half-plane pair. Throws
// std::domain_error when neither sign is valid.
std::complex<double> wclse_limit_charfn(const model_params& p, const ergodic_functionals& erg,
                                        const std::vector<double>& stationary_draws,
                                        double t1, double t2);

// Deterministic 9-point evaluation grid for the weighted-limit CF
// comparison: scan directions for validity of M^T t (a property of the
// direction alone, the constraints being homogeneous), take the longest
// valid arc, and on three interior rays bisect the radius to CF moduli
// {0.8, 0.55, 0.35}. Grid points away from both the trivial center and the
// noise floor carry the most discriminating power.
std::vector<std::array<double, 2>> wclse_cf_grid(const model_params& p,
                                                 const ergodic_functionals& erg,
                                                 const std::vector<double>& stationary_draws);

} // namespace scir
