#include "gcss/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gcss {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (...) {
        throw ConfigError("config: bad number '" + v + "' for " + where);
    }
}

long to_long(const std::string& v, const std::string& where) {
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (...) {
        throw ConfigError("config: bad integer '" + v + "' for " + where);
    }
}

bool to_bool(const std::string& v, const std::string& where) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: bad boolean '" + v + "' for " + where);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cell = trim(cell);
        if (!cell.empty()) out.push_back(cell);
    }
    return out;
}

struct PolarPair {
    double alpha_abs = 12.0, alpha_arg_deg = 0.0;
    double delta_abs = 0.24, delta_arg_deg = 180.0;
};

Complex from_polar_deg(double mag, double deg) {
    return std::polar(mag, deg * constants::pi / 180.0);
}

}  // namespace

void ExperimentConfig::validate() const {
    state.validate();
    trace.grid.validate(state.pulse);
    shg.system.validate();
    qspec.validate();
    if (trace.points_per_cycle < 2) throw ConfigError("config: points_per_cycle must be >= 2");
    if (trace.block_above_inv_fs <= 0.0) throw ConfigError("config: filter cutoff must be positive");
    if (wigner.n < 16) throw ConfigError("config: wigner grid must have >= 16 points");
    if (wigner.halfwidth <= 0.0) throw ConfigError("config: wigner halfwidth must be positive");
    for (double d : sweep.delta_alpha_abs)
        if (d < 0.0) throw ConfigError("config: sweep delta_alpha values must be >= 0");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig c;
    PolarPair polar;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": bad section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "experiment" && section != "pulse" && section != "state" &&
                section != "trace" && section != "sweep" && section != "shg" &&
                section != "qspec" && section != "wigner")
                throw ConfigError("config: unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string where = "[" + section + "] " + key;
        if (section.empty()) throw ConfigError("config: key '" + key + "' before any section");

        if (section == "experiment") {
            if (key == "name") c.name = val;
            else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_long(val, where));
            else if (key == "threads") c.threads = static_cast<int>(to_long(val, where));
            else if (key == "out_dir") c.out_dir = val;
            else throw ConfigError("config: unknown key " + where);
        } else if (section == "pulse") {
            if (key == "lambda_nm") c.state.pulse.lambda_nm = to_double(val, where);
            else if (key == "fwhm_fs") c.state.pulse.fwhm_fs = to_double(val, where);
            else if (key == "envelope") {
                if (val == "gaussian") c.state.pulse.envelope = Envelope::gaussian;
                else if (val == "flat") c.state.pulse.envelope = Envelope::flat;
                else throw ConfigError("config: envelope must be gaussian|flat");
            } else throw ConfigError("config: unknown key " + where);
        } else if (section == "state") {
            if (key == "alpha_abs") polar.alpha_abs = to_double(val, where);
            else if (key == "alpha_arg_deg") polar.alpha_arg_deg = to_double(val, where);
            else if (key == "delta_alpha_abs") polar.delta_abs = to_double(val, where);
            else if (key == "delta_alpha_arg_deg") polar.delta_arg_deg = to_double(val, where);
            else if (key == "tau_fs") c.state.tau_fs = to_double(val, where);
            else if (key == "xi_q_factor") c.state.xi_q_factor = to_double(val, where);
            else throw ConfigError("config: unknown key " + where);
        } else if (section == "trace") {
            if (key == "tau_min") c.trace.grid.tau_min = to_double(val, where);
            else if (key == "tau_max") c.trace.grid.tau_max = to_double(val, where);
            else if (key == "tau_step") c.trace.grid.tau_step = to_double(val, where);
            else if (key == "t_halfwidth") c.trace.grid.t_halfwidth = to_double(val, where);
            else if (key == "t_step") c.trace.grid.t_step = to_double(val, where);
            else if (key == "block_above_inv_fs") c.trace.block_above_inv_fs = to_double(val, where);
            else if (key == "points_per_cycle")
                c.trace.points_per_cycle = static_cast<int>(to_long(val, where));
            else if (key == "intensity_model") {
                if (val == "normal_ordered") c.trace.model = IntensityModel::normal_ordered;
                else if (val == "full") c.trace.model = IntensityModel::full;
                else throw ConfigError("config: intensity_model must be normal_ordered|full");
            } else if (key == "conditioning") {
                if (val == "postselected") c.trace.weight = ConditioningWeight::postselected;
                else if (val == "conditional") c.trace.weight = ConditioningWeight::conditional;
                else throw ConfigError("config: conditioning must be postselected|conditional");
            } else if (key == "metrics_max_lo") c.trace.windows.max_window_lo = to_double(val, where);
            else if (key == "metrics_max_hi") c.trace.windows.max_window_hi = to_double(val, where);
            else if (key == "metrics_min_hi") c.trace.windows.min_window_hi = to_double(val, where);
            else if (key == "background_fraction")
                c.trace.windows.background_fraction = to_double(val, where);
            else throw ConfigError("config: unknown key " + where);
        } else if (section == "sweep") {
            if (key == "alpha_abs") c.sweep.alpha_abs = to_double(val, where);
            else if (key == "delta_alpha_values") {
                c.sweep.delta_alpha_abs.clear();
                for (const auto& cell : split_list(val))
                    c.sweep.delta_alpha_abs.push_back(to_double(cell, where));
                if (c.sweep.delta_alpha_abs.empty())
                    throw ConfigError("config: sweep grid must be non-empty");
            } else throw ConfigError("config: unknown key " + where);
        } else if (section == "shg") {
            if (key == "n_max_w") c.shg.system.n_max_w = static_cast<int>(to_long(val, where));
            else if (key == "n_max_2w") c.shg.system.n_max_2w = static_cast<int>(to_long(val, where));
            else if (key == "chi") c.shg.system.chi = to_double(val, where);
            else if (key == "t_final") c.shg.system.t_final = to_double(val, where);
            else if (key == "snapshots") c.shg.snapshots = static_cast<int>(to_long(val, where));
            else if (key == "tol") c.shg.tol = to_double(val, where);
            else if (key == "target_n_2w") c.shg.target_n_2w = to_double(val, where);
            else throw ConfigError("config: unknown key " + where);
        } else if (section == "qspec") {
            if (key == "n_shots") c.qspec.n_shots = to_long(val, where);
            else if (key == "ir_mean") c.qspec.ir_mean = to_double(val, where);
            else if (key == "ir_fluct_sigma") c.qspec.ir_fluct_sigma = to_double(val, where);
            else if (key == "hhg_prob") c.qspec.hhg_prob = to_double(val, where);
            else if (key == "n_q") c.qspec.n_q = to_double(val, where);
            else if (key == "n_q_poisson") c.qspec.n_q_poisson = to_bool(val, where);
            else if (key == "q_orders") {
                c.qspec.q_orders.clear();
                for (const auto& cell : split_list(val))
                    c.qspec.q_orders.push_back(static_cast<int>(to_long(cell, where)));
            } else if (key == "absorption_a") c.qspec.absorption_a = to_double(val, where);
            else if (key == "a_hh") c.qspec.a_hh = to_double(val, where);
            else if (key == "b_ir") c.qspec.b_ir = to_double(val, where);
            else if (key == "noise_ir") c.qspec.noise_ir = to_double(val, where);
            else if (key == "noise_hh") c.qspec.noise_hh = to_double(val, where);
            else if (key == "stray_hh") c.qspec.stray_hh = to_double(val, where);
            else if (key == "stability_threshold")
                c.qspec.stability_threshold = to_double(val, where);
            else if (key == "band_halfwidth") c.qspec.band_halfwidth = to_double(val, where);
            else if (key == "bin_width") c.qspec.bin_width = to_double(val, where);
            else if (key == "monitor_correct") c.qspec.monitor_correct = to_bool(val, where);
            else throw ConfigError("config: unknown key " + where);
        } else if (section == "wigner") {
            if (key == "n") c.wigner.n = static_cast<int>(to_long(val, where));
            else if (key == "halfwidth") c.wigner.halfwidth = to_double(val, where);
            else if (key == "center") {
                if (val == "alpha") c.wigner.center_on_alpha = true;
                else if (val == "origin") c.wigner.center_on_alpha = false;
                else throw ConfigError("config: wigner center must be alpha|origin");
            } else throw ConfigError("config: unknown key " + where);
        }
    }

    c.state.alpha = from_polar_deg(polar.alpha_abs, polar.alpha_arg_deg);
    c.state.delta_alpha = from_polar_deg(polar.delta_abs, polar.delta_arg_deg);
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
    return {
        {"experiment",
         {{"name", c.name}, {"seed", c.seed}, {"threads", c.threads}, {"out_dir", c.out_dir}}},
        {"pulse",
         {{"lambda_nm", c.state.pulse.lambda_nm},
          {"fwhm_fs", c.state.pulse.fwhm_fs},
          {"envelope", c.state.pulse.envelope == Envelope::gaussian ? "gaussian" : "flat"},
          {"omega_rad_fs", c.state.pulse.omega()},
          {"cycle_fs", c.state.pulse.cycle_fs()}}},
        {"state",
         {{"alpha_re", c.state.alpha.real()},
          {"alpha_im", c.state.alpha.imag()},
          {"delta_alpha_re", c.state.delta_alpha.real()},
          {"delta_alpha_im", c.state.delta_alpha.imag()},
          {"tau_fs", c.state.tau_fs},
          {"xi_q_factor", c.state.xi_q_factor}}},
        {"trace",
         {{"tau_min", c.trace.grid.tau_min},
          {"tau_max", c.trace.grid.tau_max},
          {"tau_step", c.trace.grid.tau_step},
          {"t_halfwidth", c.trace.grid.t_halfwidth},
          {"t_step", c.trace.grid.t_step},
          {"block_above_inv_fs", c.trace.block_above_inv_fs},
          {"points_per_cycle", c.trace.points_per_cycle},
          {"intensity_model",
           c.trace.model == IntensityModel::normal_ordered ? "normal_ordered" : "full"},
          {"conditioning", c.trace.weight == ConditioningWeight::postselected ? "postselected"
                                                                              : "conditional"}}},
        {"sweep", {{"alpha_abs", c.sweep.alpha_abs}, {"delta_alpha_values", c.sweep.delta_alpha_abs}}},
        {"shg",
         {{"n_max_w", c.shg.system.n_max_w},
          {"n_max_2w", c.shg.system.n_max_2w},
          {"chi", c.shg.system.chi},
          {"t_final", c.shg.system.t_final},
          {"snapshots", c.shg.snapshots},
          {"tol", c.shg.tol},
          {"target_n_2w", c.shg.target_n_2w}}},
        {"qspec",
         {{"n_shots", c.qspec.n_shots},
          {"ir_mean", c.qspec.ir_mean},
          {"ir_fluct_sigma", c.qspec.ir_fluct_sigma},
          {"hhg_prob", c.qspec.hhg_prob},
          {"n_q", c.qspec.n_q},
          {"n_q_poisson", c.qspec.n_q_poisson},
          {"q_orders", c.qspec.q_orders},
          {"absorption_a", c.qspec.absorption_a},
          {"a_hh", c.qspec.a_hh},
          {"b_ir", c.qspec.b_ir},
          {"noise_ir", c.qspec.noise_ir},
          {"noise_hh", c.qspec.noise_hh},
          {"stray_hh", c.qspec.stray_hh},
          {"stability_threshold", c.qspec.stability_threshold},
          {"band_halfwidth", c.qspec.band_halfwidth},
          {"bin_width", c.qspec.bin_width},
          {"monitor_correct", c.qspec.monitor_correct}}},
        {"wigner",
         {{"n", c.wigner.n},
          {"halfwidth", c.wigner.halfwidth},
          {"center", c.wigner.center_on_alpha ? "alpha" : "origin"}}}};
}

}  // namespace gcss
