#pragma once

// CSV import/export. All floating-point fields are written with 17
// significant digits so that a read-back reproduces the doubles exactly
// and byte-for-byte reproducibility across runs is checkable.

#include "scir/estimate.hpp"
#include "scir/simulate.hpp"

#include <complex>
#include <string>
#include <vector>

namespace scir {

// Fixed 17-significant-digit rendering used for every floating field.
std::string format_double(double x);

// Path file: header "t,x", one row per grid point.
void write_path_csv(const path& p, const std::string& file);
path read_path_csv(const std::string& file);

// Observation file: "# mode=low_frequency|high_frequency" comment line,
// header "k,x", rows k = 0..n.
void write_observations_csv(const observations& obs, const std::string& file);
observations read_observations_csv(const std::string& file);

// Estimate file: header "family,n,seed,gamma,rho,b,a,degenerate" with
// family in {clse, wclse} and degenerate in {0, 1}.
void write_estimates_csv(const std::vector<estimate_set>& rows, const std::string& file);
std::vector<estimate_set> read_estimates_csv(const std::string& file);

// Characteristic-function comparison table:
// header "lam1,lam2,re_theory,im_theory,re_emp,im_emp,abs_err".
struct cf_row {
    double lam1 = 0.0;
    double lam2 = 0.0;
    std::complex<double> theory;
    std::complex<double> empirical;

    double abs_err() const { return std::abs(theory - empirical); }
};

void write_cf_csv(const std::vector<cf_row>& rows, const std::string& file);

} // namespace scir
