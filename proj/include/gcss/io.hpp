#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "gcss/autocorr.hpp"
#include "gcss/qspec.hpp"
#include "gcss/shg.hpp"
#include "gcss/wigner.hpp"

// vendored nlohmann/json lives at vendor/json.hpp
#include "json.hpp"

namespace gcss {

// Traces: CSV with header tau_fs,value,sigma; 17 significant digits so the
// round trip is bit exact.
void write_trace_csv(const Trace& tr, const std::string& path);
Trace read_trace_csv(const std::string& path);
nlohmann::json trace_to_json(const Trace& tr);
Trace trace_from_json(const nlohmann::json& j);

// Wigner fields: CSV with x/p axis header rows, then the nx x np matrix
// (rows = x); JSON carries the full grid metadata.
void write_wigner_csv(const WignerField& w, const std::string& path);
nlohmann::json wigner_to_json(const WignerField& w);

// Shots: CSV s_ir,s_hh, plus is_hhg_event when with_truth is set.
void write_shots_csv(const std::vector<ShotRecord>& shots, const std::string& path,
                     bool with_truth);
std::vector<ShotRecord> read_shots_csv(const std::string& path);

void write_histogram_csv(const PnHistogram& h, const std::string& path);

nlohmann::json trajectory_to_json(const ShgTrajectory& traj);
void write_density_csv(const FockDensity& rho, const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
void write_json_file(const nlohmann::json& j, const std::string& path);

std::string format_full(double v);  // %.17g

}  // namespace gcss
