#pragma once

#include "gcss/config.hpp"
#include "gcss/io.hpp"

namespace gcss {

// Each command writes its artifact files into config.out_dir and returns the
// machine-readable run summary (one JSON object).
nlohmann::json cmd_trace(const ExperimentConfig& config);
nlohmann::json cmd_sweep(const ExperimentConfig& config);
nlohmann::json cmd_shg(const ExperimentConfig& config);
nlohmann::json cmd_qspec(const ExperimentConfig& config, bool with_truth = false);

}  // namespace gcss
