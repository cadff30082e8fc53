#pragma once

#include <string>
#include <vector>

#include "gcss/autocorr.hpp"
#include "gcss/qspec.hpp"
#include "gcss/shg.hpp"

#include "json.hpp"

namespace gcss {

struct TraceSettings {
    AcGrid grid{};
    IntensityModel model = IntensityModel::normal_ordered;
    ConditioningWeight weight = ConditioningWeight::postselected;
    double block_above_inv_fs = 0.2;
    int points_per_cycle = 25;
    MetricsWindows windows{};
};

struct SweepSettings {
    double alpha_abs = 30.0;
    std::vector<double> delta_alpha_abs{0.05, 0.1, 0.15, 0.2, 0.25, 0.29,
                                        0.35, 0.4, 0.5,  0.7, 1.0};
};

struct ShgSettings {
    ShgSystem system{};
    int snapshots = 9;
    double tol = 1e-9;
    double target_n_2w = 0.0;  // > 0 enables interaction-time tuning
};

struct WignerSettings {
    int n = 201;
    double halfwidth = 6.0;        // vacuum widths past the declared center
    bool center_on_alpha = true;   // fundamental-mode fields; harmonic uses origin
};

// One experiment = one config file. Physical defaults follow the published
// parameter set (800 nm, 25 fs, |alpha| = 12, |delta_alpha| in {0.24, 1.44}).
struct ExperimentConfig {
    std::string name = "experiment";
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out_dir = "out";

    GcssParams state{};
    TraceSettings trace{};
    SweepSettings sweep{};
    ShgSettings shg{};
    QspecParams qspec{};
    WignerSettings wigner{};

    void validate() const;
};

// Flat key=value text with [section] headers; '#' starts a comment.
// Unknown sections or keys are rejected.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Resolved parameter set, for --dry-run and the run summaries.
nlohmann::json config_to_json(const ExperimentConfig& c);

}  // namespace gcss
