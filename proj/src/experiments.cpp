#include "gcss/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>

namespace gcss {

namespace {

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory: " + dir);
}

std::size_t index_nearest_zero(const std::vector<double>& delays) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < delays.size(); ++i)
        if (std::abs(delays[i]) < std::abs(delays[best])) best = i;
    return best;
}

struct ProcessedTrace {
    Trace raw;  // coherent-peak normalized
    Trace iac;  // filtered + cycle-averaged, coherent-IAC normalized
    TraceMetrics metrics;
};

// Full pipeline for one parameter set: raw 2-AC traces for the three state
// families, band-block filter, cycle average, then both stages normalized to
// the coherent reference at tau = 0.
std::map<std::string, ProcessedTrace> run_trace_pipeline(const GcssParams& state,
                                                         const TraceSettings& ts, int threads) {
    const auto coherent_fn = coherent_intensity_fn(state, ts.model);
    std::map<std::string, IntensityFn> fns;
    fns["coherent"] = coherent_fn;
    fns["gcss"] = gcss_intensity_fn(state, ts.model, ts.weight);
    fns["mixture"] = mixture_intensity_fn(state, ts.model);

    std::map<std::string, ProcessedTrace> out;
    for (auto& [name, fn] : fns)
        out[name].raw = ac_trace(fn, state.pulse, ts.grid, Normalization::raw, nullptr, threads);

    const std::size_t i0 = index_nearest_zero(out["coherent"].raw.delays);
    const double raw_anchor = out["coherent"].raw.values[i0];

    for (auto& [name, pt] : out) {
        pt.iac = cycle_average(band_block_filter(pt.raw, ts.block_above_inv_fs),
                               ts.points_per_cycle);
        pt.raw = scaled(std::move(pt.raw), raw_anchor);
    }
    const double iac_anchor = out["coherent"].iac.values[index_nearest_zero(out["coherent"].iac.delays)];
    for (auto& [name, pt] : out) {
        pt.iac = scaled(std::move(pt.iac), iac_anchor);
        pt.metrics = trace_metrics(pt.iac, ts.windows);
    }
    return out;
}

void write_multicolumn_csv(const std::string& path,
                           const std::map<std::string, ProcessedTrace>& traces, bool iac_stage) {
    std::string body = "tau_fs";
    const auto& first = iac_stage ? traces.begin()->second.iac : traces.begin()->second.raw;
    for (const auto& [name, pt] : traces) {
        body += "," + name;
        if (iac_stage) body += "," + name + "_sigma";
    }
    body += "\n";
    for (std::size_t i = 0; i < first.size(); ++i) {
        body += format_full(first.delays[i]);
        for (const auto& [name, pt] : traces) {
            const Trace& tr = iac_stage ? pt.iac : pt.raw;
            body += "," + format_full(tr.values[i]);
            if (iac_stage) body += "," + format_full(tr.sigma[i]);
        }
        body += "\n";
    }
    write_text_file(path, body);
}

}  // namespace

nlohmann::json cmd_trace(const ExperimentConfig& config) {
    config.validate();
    ensure_out_dir(config.out_dir);
    std::cerr << "[trace] " << config.name << ": computing 2-AC traces for coherent, gcss, mixture\n";

    auto traces = run_trace_pipeline(config.state, config.trace, config.threads);

    write_multicolumn_csv(config.out_dir + "/trace_raw.csv", traces, false);
    write_multicolumn_csv(config.out_dir + "/trace_iac.csv", traces, true);

    nlohmann::json metrics;
    for (const auto& [name, pt] : traces)
        metrics[name] = {{"s_zero", pt.metrics.s_zero},
                         {"m_depth", pt.metrics.m_depth},
                         {"background", pt.metrics.background}};
    write_json_file(metrics, config.out_dir + "/metrics.json");

    return {{"command", "trace"},
            {"experiment", config.name},
            {"outputs", {"trace_raw.csv", "trace_iac.csv", "metrics.json"}},
            {"metrics", metrics}};
}

nlohmann::json cmd_sweep(const ExperimentConfig& config) {
    config.validate();
    ensure_out_dir(config.out_dir);
    std::cerr << "[sweep] " << config.name << ": |alpha|=" << config.sweep.alpha_abs << ", "
              << config.sweep.delta_alpha_abs.size() << " depletion points\n";

    std::string csv = "delta_alpha_abs,s_zero_gcss,m_gcss,s_zero_coherent,m_coherent,note\n";
    nlohmann::json rows = nlohmann::json::array();
    for (double dal : config.sweep.delta_alpha_abs) {
        GcssParams p = config.state;
        p.alpha = Complex{config.sweep.alpha_abs, 0.0};
        p.delta_alpha = std::polar(dal, std::arg(config.state.delta_alpha));
        std::string note;
        TraceMetrics gm{}, cm{};
        if (dal == 0.0) {
            // Conditioning on nothing: the trace falls back to the coherent
            // reference by definition.
            gm.s_zero = 1.0;
            gm.m_depth = 0.0;
            cm.s_zero = 1.0;
            cm.m_depth = 0.0;
            note = "degenerate: delta_alpha=0 handled as coherent limit";
            std::cerr << "[sweep] warning: " << note << "\n";
        } else {
            auto traces = run_trace_pipeline(p, config.trace, config.threads);
            gm = traces["gcss"].metrics;
            cm = traces["coherent"].metrics;
        }
        csv += format_full(dal) + "," + format_full(gm.s_zero) + "," + format_full(gm.m_depth) +
               "," + format_full(cm.s_zero) + "," + format_full(cm.m_depth) + "," + note + "\n";
        rows.push_back({{"delta_alpha_abs", dal},
                        {"s_zero", gm.s_zero},
                        {"m_depth", gm.m_depth},
                        {"deviates", std::abs(1.0 - gm.s_zero) > 0.01 || gm.m_depth > 0.01},
                        {"note", note}});
    }
    write_text_file(config.out_dir + "/sweep.csv", csv);

    return {{"command", "sweep"},
            {"experiment", config.name},
            {"alpha_abs", config.sweep.alpha_abs},
            {"outputs", {"sweep.csv"}},
            {"rows", rows}};
}

nlohmann::json cmd_shg(const ExperimentConfig& config) {
    config.validate();
    ensure_out_dir(config.out_dir);

    ShgSystem sys = config.shg.system;
    const FockOperator h = build_hamiltonian(sys);

    if (config.shg.target_n_2w > 0.0) {
        const auto probe = initial_state(ShgInput::coherent, config.state, sys);
        sys.t_final = tune_interaction_time(h, probe, sys, config.shg.target_n_2w, config.shg.tol);
        std::cerr << "[shg] tuned t_final=" << sys.t_final << " for <n_2w>="
                  << config.shg.target_n_2w << "\n";
    }

    nlohmann::json trajectories;
    nlohmann::json minima;
    for (const ShgInput kind : {ShgInput::coherent, ShgInput::gcss}) {
        const std::string name = kind == ShgInput::coherent ? "coherent" : "gcss";
        std::cerr << "[shg] evolving " << name << " input (n_max " << sys.n_max_w << "/"
                  << sys.n_max_2w << ", chi*t=" << sys.chi * sys.t_final << ")\n";
        const auto psi0 = initial_state(kind, config.state, sys);
        const auto traj = evolve(h, psi0, sys, config.shg.snapshots, config.shg.tol);
        trajectories[name] = trajectory_to_json(traj);

        const FockDensity rho = second_harmonic_state(traj);
        const double n2w = traj.n_2w.back();
        PhaseGrid grid;
        grid.nx = grid.np = config.wigner.n;
        grid.half_x = grid.half_p = config.wigner.halfwidth + 2.0 * std::sqrt(n2w + 1.0);
        const WignerField w = wigner_fock(rho, grid, config.threads);
        const auto ex = wigner_extrema(w);
        minima[name] = {{"min_w", ex.min_value},
                        {"negative_volume", ex.negative_volume},
                        {"n_2w_final", n2w}};
        if (kind == ShgInput::gcss) {
            write_density_csv(rho, config.out_dir + "/rho_2w.csv");
            write_wigner_csv(w, config.out_dir + "/wigner_2w.csv");
        }
    }
    write_json_file(trajectories, config.out_dir + "/trajectory.json");

    return {{"command", "shg"},
            {"experiment", config.name},
            {"t_final", sys.t_final},
            {"chi_t", sys.chi * sys.t_final},
            {"outputs", {"trajectory.json", "rho_2w.csv", "wigner_2w.csv"}},
            {"wigner_minima", minima}};
}

nlohmann::json cmd_qspec(const ExperimentConfig& config, bool with_truth) {
    config.validate();
    ensure_out_dir(config.out_dir);
    std::cerr << "[qspec] synthesizing " << config.qspec.n_shots << " shots (seed " << config.seed
              << ")\n";

    const auto shots = synthesize_shots(config.qspec, config.seed);
    write_shots_csv(shots, config.out_dir + "/shots.csv", with_truth);

    auto stable = stability_filter(shots, config.qspec.stability_threshold);
    const double stability_retained =
        static_cast<double>(stable.size()) / static_cast<double>(shots.size());
    if (config.qspec.monitor_correct) stable = monitor_correct(stable, config.qspec.b_ir);

    auto balanced = balance_variances(std::move(stable));
    const double baseline = mean_s_ir(balanced.shots);
    auto selection = select_anticorrelated(balanced.shots, config.qspec.band_halfwidth);
    if (selection.selected.empty())
        throw DegenerateBatchError("cmd_qspec: selection kept no shots");
    write_shots_csv(selection.selected, config.out_dir + "/selected.csv", with_truth);

    const auto hist = photon_loss_histogram(selection.selected, baseline, config.qspec.bin_width,
                                            config.qspec.b_ir);
    write_histogram_csv(hist, config.out_dir + "/pn_hist.csv");
    const auto peaks = histogram_peaks(hist);
    const auto spacings = peak_spacings(peaks);

    const double base_events = event_fraction(balanced.shots);
    const double sel_events = event_fraction(selection.selected);
    nlohmann::json report{{"n_shots", config.qspec.n_shots},
                          {"stability_retained", stability_retained},
                          {"balance_scale", balanced.scale},
                          {"retained_fraction", selection.retained_fraction},
                          {"selected_count", selection.selected.size()},
                          {"event_fraction_batch", base_events},
                          {"event_fraction_selected", sel_events},
                          {"enrichment", base_events > 0.0 ? sel_events / base_events : 0.0},
                          {"peaks", peaks},
                          {"peak_spacings", spacings}};
    write_json_file(report, config.out_dir + "/report.json");

    return {{"command", "qspec"},
            {"experiment", config.name},
            {"outputs", {"shots.csv", "selected.csv", "pn_hist.csv", "report.json"}},
            {"report", report}};
}

}  // namespace gcss
