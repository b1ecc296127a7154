#pragma once

// Monte Carlo campaign orchestration: deterministic seeding per
// (sample size, replication), optional thread pool, aggregation into
// per-cell quantiles and rate fits, CSV export.
//
// Determinism contract: every replication draws from its own counter-based
// stream keyed by replication_seed(base_seed, n, r), and results land in
// preassigned slots, so output is identical for any worker count and any
// scheduling order.

#include "scir/diagnostics.hpp"
#include "scir/estimate.hpp"
#include "scir/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace scir {

struct mc_campaign {
    model_params params;
    std::vector<est_family> families;
    std::vector<std::size_t> ns; // strictly ascending
    std::size_t replications = 1;
    std::uint64_t base_seed = 0;
    double dt = 1e-2;            // Euler substep of the unit observation gap
    double burn_in_override = 0.0; // > 0 replaces the automatic burn-in horizon
    int threads = 1;
    std::string output_dir;      // empty: no files written

    explicit mc_campaign(const model_params& p) : params(p) {}
};

// Aggregates for one (family, n) cell. Quantiles are over the replications
// where the statistic is defined; degenerate replications are counted, not
// dropped silently.
struct campaign_cell {
    est_family family = est_family::clse;
    std::size_t n = 0;
    std::size_t replications = 0;
    std::size_t degenerate_count = 0;
    double med_abs_err_gamma = 0.0;
    double med_abs_err_rho = 0.0;
    double med_abs_err_b = 0.0;
    double med_abs_err_a = 0.0;
    double q25_abs_err_b = 0.0;
    double q75_abs_err_b = 0.0;
};

struct campaign_rate {
    est_family family = est_family::clse;
    rate_fit fit; // log-log fit of med_abs_err_b against n
};

struct campaign_result {
    std::vector<estimate_set> estimates; // ordered by (n, replication, family)
    std::vector<campaign_cell> cells;    // ordered by (family, n)
    std::vector<campaign_rate> rates;    // one per family when >= 2 sample sizes
    bool failed = false;
    std::string failure_reason;
};

// splitmix64 chain over (base_seed, n, r); collision-free in practice and
// independent of how work is scheduled.
std::uint64_t replication_seed(std::uint64_t base_seed, std::size_t n, std::size_t rep);

// Runs the campaign. Per-replication estimation failures are recorded as
// degenerate rows, never fatal; the campaign as a whole fails only when a
// cell exceeds 20% degenerate replications. If output_dir is set, writes
// estimates.csv and summary.csv into it.
campaign_result run_campaign(const mc_campaign& cfg);

} // namespace scir
