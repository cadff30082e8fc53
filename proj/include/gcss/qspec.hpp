#pragma once

#include <cstdint>
#include <vector>

#include "gcss/errors.hpp"

namespace gcss {

// One laser shot as seen by the three detectors. s_monitor is the
// pre-interaction energy reading (PD0), s_ir and s_hh the post-interaction
// IR and harmonic photocurrents in detector units. is_hhg_event is the
// hidden simulation truth, never used by the selection chain.
struct ShotRecord {
    double s_monitor = 0.0;
    double s_ir = 0.0;
    double s_hh = 0.0;
    bool is_hhg_event = false;
};

struct QspecParams {
    long n_shots = 500000;
    double ir_mean = 2.0e4;        // photons per shot before the interaction
    double ir_fluct_sigma = 0.01;  // relative shot-to-shot fluctuation
    double hhg_prob = 0.0035;      // per-order probability of harmonic emission
    double n_q = 30.0;             // photons emitted per active order
    bool n_q_poisson = false;      // draw N_q ~ Poisson(n_q) instead of fixed
    std::vector<int> q_orders{11};
    double absorption_a = 1.2;       // A: IR photons lost per emitted photon, x order
    double a_hh = 3.0;               // harmonic attenuation (>= 1)
    double b_ir = 100.0;             // IR attenuation (>= 1)
    double noise_ir = 0.02;          // additive detector noise, IR channel
    double noise_hh = 0.02;          // additive detector noise, harmonic channel
    double stray_hh = 0.12;          // harmonic background from competing processes
    double stability_threshold = 0.005;
    double band_halfwidth = 0.2;     // balanced units; tuned for the 0.4% target
    double bin_width = 20.0;         // P_n histogram, IR-photon units
    bool monitor_correct = true;     // subtract the PD0 common mode before selection

    void validate() const;
};

// Forward model, deterministic per (seed, shot index): per shot draw the
// input photon number, let each order emit independently, deduct
// sum_q q*A*N_q from the IR, attenuate, add noise. Non-event shots carry a
// stray harmonic background in place of a signal.
std::vector<ShotRecord> synthesize_shots(const QspecParams& p, std::uint64_t seed);

// Keep shots whose pre-interaction reading deviates from the batch mean by
// less than `threshold` (relative). Throws DegenerateBatchError when empty.
std::vector<ShotRecord> stability_filter(const std::vector<ShotRecord>& shots, double threshold);

// Subtract the common-mode input fluctuation measured by PD0 from s_ir.
std::vector<ShotRecord> monitor_correct(const std::vector<ShotRecord>& shots, double b_ir);

struct BalanceResult {
    std::vector<ShotRecord> shots;
    double scale = 1.0;  // factor applied to s_hh
};
// Rescale s_hh so both channel variances match.
BalanceResult balance_variances(std::vector<ShotRecord> shots);

struct SelectionResult {
    std::vector<ShotRecord> selected;
    double retained_fraction = 0.0;
};
// Keep shots with |(s_ir - mean_ir) + (s_hh - mean_hh)| < band_halfwidth:
// the -45 degree diagonal in balanced coordinates.
SelectionResult select_anticorrelated(const std::vector<ShotRecord>& shots,
                                      double band_halfwidth);

struct PnHistogram {
    std::vector<double> edges;          // bin edges, IR-photon-loss units
    std::vector<double> probabilities;  // sums to 1

    double center(std::size_t bin) const { return 0.5 * (edges[bin] + edges[bin + 1]); }
};

// Histogram of inferred IR loss (baseline minus s_ir, de-attenuated by b_ir).
// Requires at least 100 selected shots.
PnHistogram photon_loss_histogram(const std::vector<ShotRecord>& selected,
                                  double baseline_s_ir, double bin_width, double b_ir);

// Local maxima above 5% of the histogram peak; returns bin centers.
std::vector<double> histogram_peaks(const PnHistogram& h);
std::vector<double> peak_spacings(const std::vector<double>& peaks);

double mean_s_ir(const std::vector<ShotRecord>& shots);
double mean_s_hh(const std::vector<ShotRecord>& shots);
double event_fraction(const std::vector<ShotRecord>& shots);
double pearson_ir_hh(const std::vector<ShotRecord>& shots);

// Depletion amplitude from a measured harmonic yield: |delta_alpha| =
// k*sqrt(yield). The proportionality constant is a config input.
double delta_alpha_from_yield(double yield, double k);

}  // namespace gcss
