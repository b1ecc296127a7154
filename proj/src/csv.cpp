#include "scir/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scir {

namespace {

std::ofstream open_out(const std::string& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open for writing: " + file);
    return out;
}

std::ifstream open_in(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open for reading: " + file);
    return in;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const std::string& file) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("bad numeric field '" + s + "' in " + file);
    }
}

} // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// ============================================================
// Path files
// ============================================================

void write_path_csv(const path& p, const std::string& file) {
    std::ofstream out = open_out(file);
    out << "t,x\n";
    for (std::size_t i = 0; i < p.values.size(); ++i) {
        double t = p.t0 + p.dt * static_cast<double>(i);
        out << format_double(t) << ',' << format_double(p.values[i]) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + file);
}

path read_path_csv(const std::string& file) {
    std::ifstream in = open_in(file);
    std::string line;
    if (!std::getline(in, line) || split_fields(line) != std::vector<std::string>{"t", "x"})
        throw std::runtime_error("missing t,x header in " + file);
    std::vector<double> ts, xs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_fields(line);
        if (f.size() != 2) throw std::runtime_error("bad row in " + file);
        ts.push_back(parse_double(f[0], file));
        xs.push_back(parse_double(f[1], file));
    }
    if (ts.size() < 2) throw std::runtime_error("path file needs >= 2 rows: " + file);
    path p;
    p.t0 = ts.front();
    p.dt = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
    p.values = std::move(xs);
    return p;
}

// ============================================================
// Observation files
// ============================================================

void write_observations_csv(const observations& obs, const std::string& file) {
    std::ofstream out = open_out(file);
    out << "# mode="
        << (obs.mode == obs_mode::low_frequency ? "low_frequency" : "high_frequency") << '\n';
    out << "k,x\n";
    for (std::size_t k = 0; k < obs.x.size(); ++k)
        out << k << ',' << format_double(obs.x[k]) << '\n';
    if (!out) throw std::runtime_error("write failed: " + file);
}

observations read_observations_csv(const std::string& file) {
    std::ifstream in = open_in(file);
    observations obs;
    bool have_mode = false, have_header = false;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("# mode=", 0) == 0) {
            std::string mode = line.substr(7);
            if (!mode.empty() && mode.back() == '\r') mode.pop_back();
            if (mode == "low_frequency") obs.mode = obs_mode::low_frequency;
            else if (mode == "high_frequency") obs.mode = obs_mode::high_frequency;
            else throw std::runtime_error("unknown mode '" + mode + "' in " + file);
            have_mode = true;
            continue;
        }
        if (!have_header) {
            if (split_fields(line) != std::vector<std::string>{"k", "x"})
                throw std::runtime_error("missing k,x header in " + file);
            have_header = true;
            continue;
        }
        auto f = split_fields(line);
        if (f.size() != 2) throw std::runtime_error("bad row in " + file);
        auto k = static_cast<std::size_t>(parse_double(f[0], file));
        if (k != obs.x.size()) throw std::runtime_error("non-contiguous k index in " + file);
        obs.x.push_back(parse_double(f[1], file));
    }
    if (!have_mode) throw std::runtime_error("missing '# mode=' line in " + file);
    if (!have_header || obs.x.empty()) throw std::runtime_error("no data rows in " + file);
    return obs;
}

// ============================================================
// Estimate files
// ============================================================

void write_estimates_csv(const std::vector<estimate_set>& rows, const std::string& file) {
    std::ofstream out = open_out(file);
    out << "family,n,seed,gamma,rho,b,a,degenerate\n";
    for (const auto& e : rows) {
        // lowercase tokens in files; family_name() is the display form
        out << (e.family == est_family::clse ? "clse" : "wclse") << ',' << e.n << ',' << e.seed << ','
            << format_double(e.gamma_hat) << ',' << format_double(e.rho_hat) << ','
            << format_double(e.b_hat) << ',' << format_double(e.a_hat) << ','
            << (e.drift_defined ? 0 : 1) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + file);
}

std::vector<estimate_set> read_estimates_csv(const std::string& file) {
    std::ifstream in = open_in(file);
    std::string line;
    if (!std::getline(in, line)
        || split_fields(line)
               != std::vector<std::string>{"family", "n", "seed", "gamma", "rho", "b", "a",
                                           "degenerate"})
        throw std::runtime_error("missing estimates header in " + file);
    std::vector<estimate_set> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_fields(line);
        if (f.size() != 8) throw std::runtime_error("bad row in " + file);
        estimate_set e;
        if (f[0] == "clse") e.family = est_family::clse;
        else if (f[0] == "wclse") e.family = est_family::wclse;
        else throw std::runtime_error("unknown family '" + f[0] + "' in " + file);
        e.n = static_cast<std::size_t>(std::stoull(f[1]));
        e.seed = std::stoull(f[2]);
        e.gamma_hat = parse_double(f[3], file);
        e.rho_hat = parse_double(f[4], file);
        e.b_hat = parse_double(f[5], file);
        e.a_hat = parse_double(f[6], file);
        e.drift_defined = (f[7] == "0");
        rows.push_back(e);
    }
    return rows;
}

// ============================================================
// CF comparison files
// ============================================================

void write_cf_csv(const std::vector<cf_row>& rows, const std::string& file) {
    std::ofstream out = open_out(file);
    out << "lam1,lam2,re_theory,im_theory,re_emp,im_emp,abs_err\n";
    for (const auto& r : rows) {
        out << format_double(r.lam1) << ',' << format_double(r.lam2) << ','
            << format_double(r.theory.real()) << ',' << format_double(r.theory.imag()) << ','
            << format_double(r.empirical.real()) << ',' << format_double(r.empirical.imag())
            << ',' << format_double(r.abs_err()) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + file);
}

} // namespace scir
