#include "gcss/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gcss {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {
std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    return f;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open for reading: " + path);
    return f;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}
}  // namespace

void write_trace_csv(const Trace& tr, const std::string& path) {
    tr.validate();
    auto f = open_out(path);
    f << "tau_fs,value,sigma\n";
    for (std::size_t i = 0; i < tr.size(); ++i)
        f << format_full(tr.delays[i]) << ',' << format_full(tr.values[i]) << ','
          << format_full(tr.sigma[i]) << '\n';
}

Trace read_trace_csv(const std::string& path) {
    auto f = open_in(path);
    std::string line;
    if (!std::getline(f, line) || line.rfind("tau_fs,value,sigma", 0) != 0)
        throw ConfigError("trace csv: bad header in " + path);
    Trace tr;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() != 3) throw ConfigError("trace csv: bad row in " + path);
        tr.delays.push_back(std::stod(cells[0]));
        tr.values.push_back(std::stod(cells[1]));
        tr.sigma.push_back(std::stod(cells[2]));
    }
    tr.uniform = true;
    for (std::size_t i = 2; i < tr.delays.size(); ++i) {
        const double d0 = tr.delays[1] - tr.delays[0];
        if (std::abs((tr.delays[i] - tr.delays[i - 1]) - d0) > 1e-9 * std::max(1.0, std::abs(d0)))
            tr.uniform = false;
    }
    tr.validate();
    return tr;
}

nlohmann::json trace_to_json(const Trace& tr) {
    tr.validate();
    return {{"tau_fs", tr.delays}, {"value", tr.values}, {"sigma", tr.sigma},
            {"uniform", tr.uniform}};
}

Trace trace_from_json(const nlohmann::json& j) {
    Trace tr;
    tr.delays = j.at("tau_fs").get<std::vector<double>>();
    tr.values = j.at("value").get<std::vector<double>>();
    tr.sigma = j.at("sigma").get<std::vector<double>>();
    tr.uniform = j.value("uniform", false);
    tr.validate();
    return tr;
}

void write_wigner_csv(const WignerField& w, const std::string& path) {
    auto f = open_out(path);
    f << "x_axis";
    for (int i = 0; i < w.grid.nx; ++i) f << ',' << format_full(w.grid.x(i));
    f << "\np_axis";
    for (int j = 0; j < w.grid.np; ++j) f << ',' << format_full(w.grid.p(j));
    f << '\n';
    for (int i = 0; i < w.grid.nx; ++i) {
        for (int j = 0; j < w.grid.np; ++j) {
            if (j) f << ',';
            f << format_full(w.values(i, j));
        }
        f << '\n';
    }
}

nlohmann::json wigner_to_json(const WignerField& w) {
    nlohmann::json grid{{"x0", w.grid.x0},       {"p0", w.grid.p0}, {"half_x", w.grid.half_x},
                        {"half_p", w.grid.half_p}, {"nx", w.grid.nx}, {"np", w.grid.np}};
    std::vector<std::vector<double>> rows(w.grid.nx, std::vector<double>(w.grid.np));
    for (int i = 0; i < w.grid.nx; ++i)
        for (int j = 0; j < w.grid.np; ++j) rows[i][j] = w.values(i, j);
    return {{"grid", grid}, {"values", rows}};
}

void write_shots_csv(const std::vector<ShotRecord>& shots, const std::string& path,
                     bool with_truth) {
    auto f = open_out(path);
    f << (with_truth ? "s_ir,s_hh,is_hhg_event\n" : "s_ir,s_hh\n");
    for (const auto& s : shots) {
        f << format_full(s.s_ir) << ',' << format_full(s.s_hh);
        if (with_truth) f << ',' << (s.is_hhg_event ? 1 : 0);
        f << '\n';
    }
}

std::vector<ShotRecord> read_shots_csv(const std::string& path) {
    auto f = open_in(path);
    std::string line;
    if (!std::getline(f, line) || line.rfind("s_ir,s_hh", 0) != 0)
        throw ConfigError("shots csv: bad header in " + path);
    const bool with_truth = line.find("is_hhg_event") != std::string::npos;
    std::vector<ShotRecord> shots;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() != (with_truth ? 3u : 2u))
            throw ConfigError("shots csv: bad row in " + path);
        ShotRecord s;
        s.s_ir = std::stod(cells[0]);
        s.s_hh = std::stod(cells[1]);
        // the monitor reading is not exported; callers fall back to s_ir
        s.s_monitor = s.s_ir;
        if (with_truth) s.is_hhg_event = std::stoi(cells[2]) != 0;
        shots.push_back(s);
    }
    return shots;
}

void write_histogram_csv(const PnHistogram& h, const std::string& path) {
    auto f = open_out(path);
    f << "loss,probability\n";
    for (std::size_t b = 0; b < h.probabilities.size(); ++b)
        f << format_full(h.center(b)) << ',' << format_full(h.probabilities[b]) << '\n';
}

nlohmann::json trajectory_to_json(const ShgTrajectory& traj) {
    return {{"n_max_w", traj.n_max_w}, {"n_max_2w", traj.n_max_2w}, {"times", traj.times},
            {"n_w", traj.n_w},         {"n_2w", traj.n_2w},         {"conserved", traj.conserved},
            {"energy", traj.energy},   {"leakage", traj.leakage},   {"steps_used", traj.steps_used}};
}

void write_density_csv(const FockDensity& rho, const std::string& path) {
    auto f = open_out(path);
    f << "i,j,re,im\n";
    for (int i = 0; i < rho.dim(); ++i)
        for (int j = 0; j < rho.dim(); ++j)
            f << i << ',' << j << ',' << format_full(rho.matrix()(i, j).real()) << ','
              << format_full(rho.matrix()(i, j).imag()) << '\n';
}

void write_text_file(const std::string& path, const std::string& content) {
    auto f = open_out(path);
    f << content;
}

void write_json_file(const nlohmann::json& j, const std::string& path) {
    auto f = open_out(path);
    f << j.dump(2) << '\n';
}

}  // namespace gcss
