#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gcss/experiments.hpp"

namespace {

struct GlobalOptions {
    std::string config_path;
    std::string out_dir;
    long seed = -1;
    int threads = -1;
    bool dry_run = false;
    bool with_truth = false;
};

gcss::ExperimentConfig resolve(const GlobalOptions& o) {
    gcss::ExperimentConfig c = gcss::load_config(o.config_path);
    if (!o.out_dir.empty()) c.out_dir = o.out_dir;
    if (o.seed >= 0) c.seed = static_cast<std::uint64_t>(o.seed);
    if (o.threads >= 0) c.threads = o.threads;
    c.validate();
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gcss: intense coherent-state-superposition optics simulator"};
    app.require_subcommand(1);

    GlobalOptions opt;
    app.add_option("--config", opt.config_path, "experiment config file")->required();
    app.add_option("--out", opt.out_dir, "output directory (overrides config)");
    app.add_option("--seed", opt.seed, "RNG seed (overrides config)");
    app.add_option("--threads", opt.threads, "worker threads, 0 = all cores");
    app.add_flag("--dry-run", opt.dry_run, "validate config, print resolved parameters, exit");
    app.add_flag("--with-truth", opt.with_truth, "include the hidden event flag in shot exports");

    auto* trace = app.add_subcommand("trace", "2-AC traces, filtering, metrics");
    auto* sweep = app.add_subcommand("sweep", "s_zero and M over a depletion grid");
    auto* shg = app.add_subcommand("shg", "two-mode conversion dynamics and 2w Wigner");
    auto* qspec = app.add_subcommand("qspec", "synthetic shot statistics and post-selection");

    CLI11_PARSE(app, argc, argv);

    try {
        const gcss::ExperimentConfig config = resolve(opt);
        if (opt.dry_run) {
            std::cout << gcss::config_to_json(config).dump() << std::endl;
            return 0;
        }
        nlohmann::json summary;
        if (trace->parsed()) summary = gcss::cmd_trace(config);
        else if (sweep->parsed()) summary = gcss::cmd_sweep(config);
        else if (shg->parsed()) summary = gcss::cmd_shg(config);
        else if (qspec->parsed()) summary = gcss::cmd_qspec(config, opt.with_truth);
        std::cout << summary.dump() << std::endl;
        return 0;
    } catch (const gcss::ConfigError& e) {
        std::cerr << "config error: " << e.what() << std::endl;
        return 2;
    } catch (const gcss::Error& e) {
        std::cerr << "numerical failure: " << e.what() << std::endl;
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
}
