#include "scir/campaign.hpp"

#include "scir/csv.hpp"
#include "scir/rng.hpp"
#include "scir/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace scir {

namespace {

constexpr double quiet_nan = std::numeric_limits<double>::quiet_NaN();

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return quiet_nan;
    std::sort(v.begin(), v.end());
    double pos = q * static_cast<double>(v.size() - 1);
    auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= v.size()) return v.back();
    double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

void validate(const mc_campaign& cfg) {
    if (cfg.replications < 1) throw std::invalid_argument("campaign: replications must be >= 1");
    if (cfg.families.empty()) throw std::invalid_argument("campaign: no estimator families");
    if (cfg.ns.empty()) throw std::invalid_argument("campaign: no sample sizes");
    for (std::size_t i = 0; i + 1 < cfg.ns.size(); ++i)
        if (cfg.ns[i] >= cfg.ns[i + 1])
            throw std::invalid_argument("campaign: ns must be strictly ascending");
    for (std::size_t n : cfg.ns)
        if (n < 2) throw std::invalid_argument("campaign: sample sizes must be >= 2");
    if (!(cfg.dt > 0.0 && cfg.dt <= 1.0)) throw std::invalid_argument("campaign: need 0 < dt <= 1");
}

estimate_set failed_row(est_family f, std::size_t n, std::uint64_t seed) {
    estimate_set e;
    e.family = f;
    e.n = n;
    e.seed = seed;
    e.gamma_hat = quiet_nan;
    e.rho_hat = quiet_nan;
    e.b_hat = quiet_nan;
    e.a_hat = quiet_nan;
    e.drift_defined = false;
    return e;
}

} // namespace

std::uint64_t replication_seed(std::uint64_t base_seed, std::size_t n, std::size_t rep) {
    std::uint64_t h = splitmix64(base_seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(n));
    h = splitmix64(h ^ static_cast<std::uint64_t>(rep));
    return h;
}

campaign_result run_campaign(const mc_campaign& cfg) {
    validate(cfg);

    const std::size_t reps = cfg.replications;
    const std::size_t n_sizes = cfg.ns.size();
    const std::size_t n_fams = cfg.families.size();
    const std::size_t n_tasks = n_sizes * reps;

    campaign_result result;
    result.estimates.assign(n_tasks * n_fams, estimate_set{});

    // One task per (n, replication): simulate once, run every family on the
    // same observations, write into the task's preassigned slots.
    auto run_task = [&](std::size_t task) {
        std::size_t in = task / reps;
        std::size_t rep = task % reps;
        std::size_t n = cfg.ns[in];
        std::uint64_t seed = replication_seed(cfg.base_seed, n, rep);
        estimate_set* slot = &result.estimates[task * n_fams];
        try {
            rng_stream rng(seed, 0);
            observations obs =
                sample_low_frequency(cfg.params, n, rng, cfg.dt, cfg.burn_in_override);
            for (std::size_t f = 0; f < n_fams; ++f) {
                try {
                    estimate_set e = cfg.families[f] == est_family::clse ? clse(obs) : wclse(obs);
                    e.seed = seed;
                    slot[f] = e;
                } catch (const std::exception&) {
                    slot[f] = failed_row(cfg.families[f], n, seed);
                }
            }
        } catch (const std::exception&) {
            // simulation blew up; record the whole replication as degenerate
            for (std::size_t f = 0; f < n_fams; ++f)
                slot[f] = failed_row(cfg.families[f], n, seed);
        }
    };

    int workers = std::max(1, cfg.threads);
    if (static_cast<std::size_t>(workers) > n_tasks) workers = static_cast<int>(n_tasks);
    if (workers == 1) {
        for (std::size_t t = 0; t < n_tasks; ++t) run_task(t);
    } else {
        std::atomic<std::size_t> next(0);
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t t = next.fetch_add(1);
                    if (t >= n_tasks) return;
                    run_task(t);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    // Aggregate cells against the campaign's own ground truth.
    derived_params truth = derive(cfg.params);
    for (std::size_t f = 0; f < n_fams; ++f) {
        std::vector<double> med_b_by_n;
        std::vector<double> ns_with_med;
        for (std::size_t in = 0; in < n_sizes; ++in) {
            campaign_cell cell;
            cell.family = cfg.families[f];
            cell.n = cfg.ns[in];
            cell.replications = reps;
            std::vector<double> eg, er, eb, ea;
            for (std::size_t rep = 0; rep < reps; ++rep) {
                const estimate_set& e = result.estimates[(in * reps + rep) * n_fams + f];
                if (!e.drift_defined) {
                    ++cell.degenerate_count;
                    continue;
                }
                eg.push_back(std::fabs(e.gamma_hat - truth.gamma));
                er.push_back(std::fabs(e.rho_hat - truth.rho));
                eb.push_back(std::fabs(e.b_hat - cfg.params.b));
                ea.push_back(std::fabs(e.a_hat - cfg.params.a));
            }
            cell.med_abs_err_gamma = quantile(eg, 0.5);
            cell.med_abs_err_rho = quantile(er, 0.5);
            cell.med_abs_err_b = quantile(eb, 0.5);
            cell.med_abs_err_a = quantile(ea, 0.5);
            cell.q25_abs_err_b = quantile(eb, 0.25);
            cell.q75_abs_err_b = quantile(eb, 0.75);
            if (cell.degenerate_count * 5 > reps) { // > 20%
                result.failed = true;
                std::ostringstream os;
                os << "cell " << family_name(cell.family) << " n=" << cell.n << " has "
                   << cell.degenerate_count << "/" << reps << " degenerate replications";
                if (!result.failure_reason.empty()) result.failure_reason += "; ";
                result.failure_reason += os.str();
            }
            if (std::isfinite(cell.med_abs_err_b) && cell.med_abs_err_b > 0.0) {
                med_b_by_n.push_back(cell.med_abs_err_b);
                ns_with_med.push_back(static_cast<double>(cell.n));
            }
            result.cells.push_back(cell);
        }
        if (ns_with_med.size() >= 2) {
            campaign_rate cr;
            cr.family = cfg.families[f];
            cr.fit = rate_regression(ns_with_med, med_b_by_n);
            result.rates.push_back(cr);
        }
    }

    if (!cfg.output_dir.empty()) {
        std::filesystem::create_directories(cfg.output_dir);
        write_estimates_csv(result.estimates, cfg.output_dir + "/estimates.csv");
        std::ofstream out(cfg.output_dir + "/summary.csv");
        if (!out) throw std::runtime_error("cannot open for writing: " + cfg.output_dir
                                           + "/summary.csv");
        out << "family,n,replications,degenerate,med_abs_gamma,med_abs_rho,med_abs_b,med_abs_a,"
               "q25_abs_b,q75_abs_b\n";
        for (const auto& c : result.cells) {
            out << family_name(c.family) << ',' << c.n << ',' << c.replications << ','
                << c.degenerate_count << ',' << format_double(c.med_abs_err_gamma) << ','
                << format_double(c.med_abs_err_rho) << ',' << format_double(c.med_abs_err_b)
                << ',' << format_double(c.med_abs_err_a) << ','
                << format_double(c.q25_abs_err_b) << ',' << format_double(c.q75_abs_err_b)
                << '\n';
        }
    }

    return result;
}

} // namespace scir
