// Command-line harness: simulation, estimation, Monte Carlo campaigns,
// limit-CF comparison tables, the oracle validation battery, and tail and
// mixing diagnostics. Configured by a flat JSON document with the frozen
// key set {a, b, sigma, alpha, dt, ns, replications, base_seed, families,
// p, delta, output_dir}.

#include "scir/campaign.hpp"
#include "scir/csv.hpp"
#include "scir/kahan.hpp"
#include "scir/diagnostics.hpp"
#include "scir/estimate.hpp"
#include "scir/limits.hpp"
#include "scir/model.hpp"
#include "scir/rng.hpp"
#include "scir/simulate.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

// ============================================================
// Configuration
// ============================================================

struct app_config {
    double a = 1.0;
    double b = 1.0;
    double sigma = 1.0;
    double alpha = 1.5;
    double dt = 1e-2;
    std::vector<std::size_t> ns = {1000};
    std::size_t replications = 8;
    std::uint64_t base_seed = 20260816;
    std::vector<std::string> families = {"wclse", "clse"};
    double p = -1.0;     // < 0: use default_p(alpha)
    double delta = -1.0; // < 0: use default_delta(alpha)
    std::string output_dir = "out";
};

app_config load_config(const std::string& file) {
    app_config cfg;
    if (file.empty()) return cfg;
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open config: " + file);
    json doc = json::parse(in);
    if (!doc.is_object()) throw std::runtime_error("config must be a JSON object");

    static const std::vector<std::string> known = {
        "a", "b", "sigma", "alpha", "dt", "ns", "replications",
        "base_seed", "families", "p", "delta", "output_dir"};
    for (const auto& item : doc.items()) {
        if (std::find(known.begin(), known.end(), item.key()) == known.end())
            throw std::runtime_error("unknown config key: " + item.key());
    }

    if (doc.contains("a")) cfg.a = doc["a"].get<double>();
    if (doc.contains("b")) cfg.b = doc["b"].get<double>();
    if (doc.contains("sigma")) cfg.sigma = doc["sigma"].get<double>();
    if (doc.contains("alpha")) cfg.alpha = doc["alpha"].get<double>();
    if (doc.contains("dt")) cfg.dt = doc["dt"].get<double>();
    if (doc.contains("ns")) cfg.ns = doc["ns"].get<std::vector<std::size_t>>();
    if (doc.contains("replications")) cfg.replications = doc["replications"].get<std::size_t>();
    if (doc.contains("base_seed")) cfg.base_seed = doc["base_seed"].get<std::uint64_t>();
    if (doc.contains("families")) cfg.families = doc["families"].get<std::vector<std::string>>();
    if (doc.contains("p")) cfg.p = doc["p"].get<double>();
    if (doc.contains("delta")) cfg.delta = doc["delta"].get<double>();
    if (doc.contains("output_dir")) cfg.output_dir = doc["output_dir"].get<std::string>();
    return cfg;
}

scir::model_params params_of(const app_config& cfg) {
    return scir::model_params(cfg.a, cfg.b, cfg.sigma, cfg.alpha);
}

std::vector<scir::est_family> families_of(const app_config& cfg) {
    std::vector<scir::est_family> out;
    for (const auto& f : cfg.families) {
        if (f == "clse") out.push_back(scir::est_family::clse);
        else if (f == "wclse") out.push_back(scir::est_family::wclse);
        else throw std::runtime_error("unknown estimator family: " + f);
    }
    return out;
}

std::string out_path(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return dir + "/" + name;
}

// ============================================================
// validate: oracle battery
// ============================================================

// One RK4 pass for dv/dt = -phi(v), v(0) = lam, the independent check of
// the closed-form cumulant.
double rk4_v(const scir::model_params& p, double lam, double t, int steps) {
    double h = t / steps;
    double y = lam;
    for (int i = 0; i < steps; ++i) {
        double k1 = -scir::phi(p, y);
        double k2 = -scir::phi(p, y + 0.5 * h * k1);
        double k3 = -scir::phi(p, y + 0.5 * h * k2);
        double k4 = -scir::phi(p, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

int run_validate(const app_config& cfg, std::uint64_t seed) {
    scir::model_params p = params_of(cfg);
    int failures = 0;
    auto check = [&](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS " : "FAIL ") << name;
        if (!detail.empty()) std::cout << "  (" << detail << ")";
        std::cout << '\n';
        if (!ok) ++failures;
    };

    // cumulant closed form vs RK4
    double worst_rel = 0.0;
    for (double lam : {0.5, 1.0, 2.0, 5.0})
        for (double t : {0.25, 1.0, 4.0}) {
            double closed = scir::v(p, lam, t);
            double ode = rk4_v(p, lam, t, 40000);
            worst_rel = std::max(worst_rel, std::fabs(closed - ode) / ode);
        }
    check("cumulant_vs_rk4", worst_rel < 1e-8, "worst rel " + scir::format_double(worst_rel));

    // semigroup v_{r+t}(lam) = v_r(v_t(lam))
    double worst_sg = 0.0;
    for (double lam : {0.5, 1.0, 2.0}) {
        double lhs = scir::v(p, lam, 2.0);
        double rhs = scir::v(p, scir::v(p, lam, 1.3), 0.7);
        worst_sg = std::max(worst_sg, std::fabs(lhs - rhs) / lhs);
    }
    check("semigroup_identity", worst_sg < 1e-8, "worst rel " + scir::format_double(worst_sg));

    // envelope v_t(lam) <= lam e^{-bt}
    bool env_ok = true;
    for (double lam : {0.5, 1.0, 2.0, 5.0})
        for (double t : {0.25, 1.0, 4.0})
            env_ok = env_ok && scir::v(p, lam, t) <= lam * std::exp(-p.b * t) * (1.0 + 1e-12);
    check("cumulant_envelope", env_ok, "");

    // transition mean, Monte Carlo vs closed form
    {
        const std::size_t n_paths = 20000;
        double x0 = 2.0 * p.a / p.b, horizon = 1.0, dt = 1e-3;
        scir::kahan_sum sum, sumsq;
        scir::rng_stream rng(seed, 1);
        for (std::size_t i = 0; i < n_paths; ++i) {
            scir::path pa = scir::simulate_path(p, x0, horizon, dt, rng);
            double xt = pa.values.back();
            sum.add(xt);
            sumsq.add(xt * xt);
        }
        double mean = sum.value() / n_paths;
        double var = sumsq.value() / n_paths - mean * mean;
        double se = std::sqrt(std::max(var, 0.0) / n_paths);
        double truth = scir::transition_mean(p, x0, horizon);
        double tol = 3.0 * se + 0.01 * truth;
        check("transition_mean_mc", std::fabs(mean - truth) < tol,
              "mc " + scir::format_double(mean) + " vs " + scir::format_double(truth));
    }

    // stationary mean and Laplace transform
    {
        const std::size_t n_draws = 20000;
        scir::rng_stream rng(seed, 2);
        std::vector<double> draws;
        draws.reserve(n_draws);
        scir::observations obs = scir::sample_low_frequency(p, n_draws, rng, cfg.dt);
        draws.assign(obs.x.begin() + 1, obs.x.end());
        scir::kahan_sum sum;
        for (double x : draws) sum.add(x);
        double mean = sum.value() / static_cast<double>(draws.size());
        double truth = scir::stationary_mean(p);
        check("stationary_mean", std::fabs(mean - truth) / truth < 0.03,
              "mc " + scir::format_double(mean) + " vs " + scir::format_double(truth));
        double dev = scir::laplace_compare(
            draws, {0.5, 1.0, 2.0}, [&](double lam) { return scir::stationary_laplace(p, lam); });
        check("stationary_laplace", dev < 0.02, "worst rel " + scir::format_double(dev));
    }

    // extremal constant p_alpha(t) vs its integral representation
    {
        double t = 1.0;
        int steps = 20000;
        double h = t / steps, acc = 0.0;
        for (int i = 0; i < steps; ++i) {
            double s0 = i * h, s1 = s0 + h, sm = s0 + 0.5 * h;
            auto f = [&](double s) { return std::exp(-p.b * s - p.alpha * p.b * (t - s)); };
            acc += h / 6.0 * (f(s0) + 4.0 * f(sm) + f(s1));
        }
        double closed = scir::tail_constants(p, t).p_alpha_t;
        check("extremal_constant_quadrature", std::fabs(acc - closed) / closed < 1e-9,
              scir::format_double(closed));
    }

    // ergodicity bound decreasing in t, vbar decreasing
    {
        bool dec = true;
        double prev = scir::tv_bound(p, 5.0 * p.a / p.b, 1.0);
        for (double t = 2.0; t <= 12.0; t += 1.0) {
            double cur = scir::tv_bound(p, 5.0 * p.a / p.b, t);
            dec = dec && cur <= prev * (1.0 + 1e-12);
            prev = cur;
        }
        check("tv_bound_decreasing", dec, "");
        dec = true;
        prev = scir::vbar(p, 0.5);
        for (double t = 1.0; t <= 8.0; t += 0.5) {
            double cur = scir::vbar(p, t);
            dec = dec && cur <= prev * (1.0 + 1e-12);
            prev = cur;
        }
        check("vbar_decreasing", dec, "");
    }

    std::cout << (failures == 0 ? "validate: all checks passed\n"
                                : "validate: " + std::to_string(failures) + " check(s) failed\n");
    return failures == 0 ? 0 : 1;
}

// ============================================================
// limits: CF comparison table
// ============================================================

int run_limits(const app_config& cfg, std::uint64_t seed, const std::string& out_dir) {
    scir::model_params p = params_of(cfg);

    // stationary pool for the ergodic functionals and the CF expectation
    const std::size_t pool_n = 200000;
    scir::rng_stream pool_rng(seed, 3);
    scir::observations pool_obs = scir::sample_low_frequency(p, pool_n, pool_rng, cfg.dt);
    std::vector<double> pool(pool_obs.x.begin() + 1, pool_obs.x.end());
    scir::ergodic_functionals erg = scir::estimate_ergodic_functionals(p, pool);

    auto grid = scir::wclse_cf_grid(p, erg, pool);

    // empirical side: scaled error vectors of the weighted estimator
    std::size_t n = cfg.ns.back();
    double rate = scir::normalization(p.alpha, static_cast<double>(n)).wclse_rate;
    std::vector<std::array<double, 2>> errors;
    for (std::size_t r = 0; r < cfg.replications; ++r) {
        scir::rng_stream rng(scir::replication_seed(seed, n, r), 0);
        scir::observations obs = scir::sample_low_frequency(p, n, rng, cfg.dt);
        scir::estimate_set e = scir::wclse(obs);
        if (!e.drift_defined) continue;
        errors.push_back({rate * (e.b_hat - p.b), rate * (e.a_hat - p.a)});
    }
    if (errors.size() < 2) {
        std::cerr << "limits: too few non-degenerate replications\n";
        return 1;
    }

    std::vector<scir::cf_row> rows;
    for (const auto& t : grid) {
        scir::cf_row row;
        row.lam1 = t[0];
        row.lam2 = t[1];
        row.theory = scir::wclse_limit_charfn(p, erg, pool, t[0], t[1]);
        row.empirical = scir::empirical_charfn(errors, t[0], t[1]);
        rows.push_back(row);
    }
    std::string file = out_path(out_dir, "cf_comparison.csv");
    scir::write_cf_csv(rows, file);

    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.abs_err());
    std::cout << "limits: lambda_bar " << scir::format_double(erg.lambda_bar) << ", F "
              << scir::format_double(erg.f_const) << ", " << errors.size()
              << " replications at n=" << n << ", worst |CF| deviation "
              << scir::format_double(worst) << "\n"
              << "limits: wrote " << file << "\n";
    return 0;
}

// ============================================================
// diagnose: tail and mixing report
// ============================================================

int run_diagnose(const app_config& cfg, std::uint64_t seed, const std::string& out_dir) {
    scir::model_params p = params_of(cfg);
    const double horizon = 1e4;
    scir::rng_stream rng(seed, 4);

    // burn in, then one long path
    double x0 = scir::sample_stationary(p, rng, cfg.dt);
    scir::path pa = scir::simulate_path(p, x0, horizon, cfg.dt, rng);

    // unit-spaced skeleton
    auto stride = static_cast<std::size_t>(std::llround(1.0 / cfg.dt));
    scir::observations obs;
    obs.mode = scir::obs_mode::low_frequency;
    for (std::size_t i = 0; i < pa.values.size(); i += stride) obs.x.push_back(pa.values[i]);

    std::vector<double> xs(obs.x.begin() + 1, obs.x.end());
    std::size_t k = scir::hill_default_k(xs.size());
    double hill_x = scir::hill(xs, k);

    scir::residual_seq res = scir::residuals(obs, scir::derive(p));
    std::vector<double> abs_eps;
    for (double e : res.eps)
        if (std::fabs(e) > 0.0) abs_eps.push_back(std::fabs(e));
    double hill_eps = scir::hill(abs_eps, scir::hill_default_k(abs_eps.size()));

    std::vector<double> prod;
    for (std::size_t i = 0; i < res.eps.size(); ++i) {
        double v = std::fabs(obs.x[i] * res.eps[i]);
        if (v > 0.0) prod.push_back(v);
    }
    double hill_prod = scir::hill(prod, scir::hill_default_k(prod.size()));

    double mix_rate = scir::mixing_decay(pa, {1.0, 2.0, 3.0, 4.0, 5.0});

    json report;
    report["alpha"] = p.alpha;
    report["n_unit_samples"] = xs.size();
    report["hill_k"] = k;
    report["hill_x"] = hill_x;
    report["hill_abs_eps"] = hill_eps;
    report["hill_abs_x_eps"] = hill_prod;
    report["hill_x_target"] = p.alpha;
    report["hill_abs_x_eps_target"] = p.alpha * p.alpha / (p.alpha + 1.0);
    report["mixing_rate"] = mix_rate;
    report["mixing_window"] = {0.5 * p.b, 1.5 * p.b};
    if (p.alpha < 2.0) {
        // top-decile tail constant ratio, empirical vs stationary theory
        std::vector<double> sorted(xs);
        std::sort(sorted.begin(), sorted.end());
        double x90 = sorted[static_cast<std::size_t>(0.9 * (sorted.size() - 1))];
        double frac = 0.0;
        for (double x : xs)
            if (x > x90) frac += 1.0;
        frac /= static_cast<double>(xs.size());
        double emp_const = std::pow(x90, p.alpha) * frac;
        report["tail_constant_empirical"] = emp_const;
        report["tail_constant_theory"] = scir::stationary_tail_constant(p);
    }

    std::string file = out_path(out_dir, "diagnose.json");
    std::ofstream out(file);
    out << report.dump(2) << '\n';
    std::cout << report.dump(2) << '\n';
    std::cout << "diagnose: wrote " << file << '\n';
    return 0;
}

} // namespace

// ============================================================
// main
// ============================================================

int main(int argc, char** argv) {
    CLI::App app{"stable CIR model: simulation, estimation, and limit-law toolkit"};
    app.require_subcommand(1);

    std::string config_file;
    std::string out_dir;
    std::uint64_t seed_flag = 0;
    bool seed_given = false;
    int threads = 1;
    app.add_option("--config", config_file, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed_flag, "override base_seed")->each([&](const std::string&) {
        seed_given = true;
    });
    app.add_option("--out", out_dir, "output directory (default: config output_dir)");
    app.add_option("--threads", threads, "worker threads for mc campaigns")
        ->check(CLI::PositiveNumber);

    auto* cmd_sim = app.add_subcommand("simulate", "emit one Euler path as CSV");
    double horizon = 10.0;
    double x0 = -1.0;
    cmd_sim->add_option("--horizon", horizon, "path horizon in time units");
    cmd_sim->add_option("--x0", x0, "initial state (default: stationary mean a/b)");

    auto* cmd_est = app.add_subcommand("estimate", "estimate drift from an observation CSV");
    std::string in_file;
    cmd_est->add_option("--in", in_file, "observation CSV (k,x with # mode= line)")
        ->required()
        ->check(CLI::ExistingFile);

    auto* cmd_mc = app.add_subcommand("mc", "run a Monte Carlo estimation campaign");
    auto* cmd_limits = app.add_subcommand("limits", "emit limit-CF comparison CSV");
    auto* cmd_validate = app.add_subcommand("validate", "run the oracle battery");
    auto* cmd_diagnose = app.add_subcommand("diagnose", "tail/mixing report JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        app_config cfg = load_config(config_file);
        std::uint64_t seed = seed_given ? seed_flag : cfg.base_seed;
        std::string dir = out_dir.empty() ? cfg.output_dir : out_dir;

        if (cmd_sim->parsed()) {
            scir::model_params p = params_of(cfg);
            scir::rng_stream rng(seed, 0);
            double start = x0 >= 0.0 ? x0 : p.a / p.b;
            scir::path pa = scir::simulate_path(p, start, horizon, cfg.dt, rng);
            pa.seed = seed;
            std::string file = out_path(dir, "path.csv");
            scir::write_path_csv(pa, file);
            std::cout << "simulate: " << pa.values.size() << " points, horizon "
                      << scir::format_double(pa.horizon()) << ", wrote " << file << '\n';

            // unit-stride skeleton, the input format of `estimate`
            auto stride = static_cast<std::size_t>(std::llround(1.0 / cfg.dt));
            if (stride >= 1 && std::fabs(stride * cfg.dt - 1.0) < 1e-9
                && pa.values.size() > 2 * stride) {
                scir::observations skel;
                skel.mode = scir::obs_mode::low_frequency;
                for (std::size_t i = 0; i < pa.values.size(); i += stride)
                    skel.x.push_back(pa.values[i]);
                std::string sfile = out_path(dir, "skeleton.csv");
                scir::write_observations_csv(skel, sfile);
                std::cout << "simulate: " << skel.x.size() << " unit-spaced observations, wrote "
                          << sfile << '\n';
            }
            return 0;
        }

        if (cmd_est->parsed()) {
            scir::observations obs = scir::read_observations_csv(in_file);
            if (obs.mode != scir::obs_mode::low_frequency) {
                std::cerr << "estimate: drift estimators need low-frequency observations\n";
                return 1;
            }
            std::vector<scir::estimate_set> rows;
            for (scir::est_family f : families_of(cfg))
                rows.push_back(f == scir::est_family::clse ? scir::clse(obs) : scir::wclse(obs));
            std::string file = out_path(dir, "estimates.csv");
            scir::write_estimates_csv(rows, file);
            for (const auto& e : rows) {
                std::cout << scir::family_name(e.family) << ": gamma "
                          << scir::format_double(e.gamma_hat) << ", rho "
                          << scir::format_double(e.rho_hat);
                if (e.drift_defined)
                    std::cout << ", b " << scir::format_double(e.b_hat) << ", a "
                              << scir::format_double(e.a_hat);
                else
                    std::cout << ", drift undefined (gamma outside (0,1))";
                std::cout << '\n';
            }
            std::cout << "estimate: wrote " << file << '\n';
            return 0;
        }

        if (cmd_mc->parsed()) {
            scir::mc_campaign camp(params_of(cfg));
            camp.families = families_of(cfg);
            camp.ns = cfg.ns;
            camp.replications = cfg.replications;
            camp.base_seed = seed;
            camp.dt = cfg.dt;
            camp.threads = threads;
            camp.output_dir = dir;
            scir::campaign_result res = scir::run_campaign(camp);
            for (const auto& c : res.cells) {
                std::cout << scir::family_name(c.family) << " n=" << c.n << ": med|b-b0| "
                          << scir::format_double(c.med_abs_err_b) << ", med|a-a0| "
                          << scir::format_double(c.med_abs_err_a) << ", degenerate "
                          << c.degenerate_count << "/" << c.replications << '\n';
            }
            for (const auto& r : res.rates)
                std::cout << scir::family_name(r.family) << " rate slope "
                          << scir::format_double(r.fit.slope) << " (r2 "
                          << scir::format_double(r.fit.r2) << ")\n";
            if (res.failed) {
                std::cerr << "mc: FAILED: " << res.failure_reason << '\n';
                return 1;
            }
            std::cout << "mc: wrote " << dir << "/estimates.csv and summary.csv\n";
            return 0;
        }

        if (cmd_limits->parsed()) return run_limits(cfg, seed, dir);
        if (cmd_validate->parsed()) return run_validate(cfg, seed);
        if (cmd_diagnose->parsed()) return run_diagnose(cfg, seed, dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
