#pragma once

#include <functional>
#include <vector>

#include "gcss/states.hpp"

namespace gcss {

// Sampled S_2w(tau) curve. Values are detector-arbitrary unless normalized.
struct Trace {
    std::vector<double> delays;  // fs, strictly increasing
    std::vector<double> values;
    std::vector<double> sigma;  // per-point uncertainty, >= 0
    bool uniform = false;

    std::size_t size() const { return delays.size(); }
    void validate() const;
};

struct TraceMetrics {
    double s_zero = 0.0;     // value at the grid point nearest tau=0
    double m_depth = 0.0;    // modulation depth, >= 0
    double background = 0.0; // large-|tau| plateau level
};

struct MetricsWindows {
    double max_window_lo = 10.0;  // S_max over |tau| in [lo, hi]
    double max_window_hi = 30.0;
    double min_window_hi = 10.0;  // S_min over |tau| <= hi
    double background_fraction = 0.1;  // outermost fraction of the delay span
};

// Intensity content of the trace integrand.
//   normal_ordered: <(a^dag)^2 a^2>, the two-photon conversion rate and the
//                   high-photon-number form used for the published traces.
//   full:           <(a^dag)^2 a^2> + <a^dag a> = <I^2>, I = a^dag a.
enum class IntensityModel { normal_ordered, full };

// How the conditioned state enters the signal.
//   postselected: raw matrix element on psi - xi|ref> (carries the
//                 post-selection weight; the published-trace convention).
//   conditional:  expectation in the normalized conditioned state.
enum class ConditioningWeight { postselected, conditional };

enum class Normalization { raw, coherent_peak };

struct AcGrid {
    double tau_min = -80.0;
    double tau_max = 80.0;
    double tau_step = 0.1;
    double t_halfwidth = 62.5;
    double t_step = 0.05;

    std::vector<double> tau_grid() const;
    // t window must cover >= 4 envelope FWHM; t step <= cycle/20.
    void validate(const PulseParams& pulse) const;
};

using IntensityFn = std::function<double(double t, double tau)>;

// <I^2> = <(a^dag)^2 a^2> + <a^dag a> for a normalized state.
double intensity_squared(const CoherentSuperposition& s, double t);
double intensity_squared(const CoherentSnapshot& snap);

// Cached operators for the Fock evaluation route.
struct IntensityOps {
    explicit IntensityOps(int n_max);
    FockOperator pair_rate;  // (a^dag)^2 a^2
    FockOperator number;     // a^dag a
};
double intensity_squared(const FockVector& v, const IntensityOps& ops);
double intensity_squared(const FockDensity& rho, const IntensityOps& ops);

// Per-point trace integrands for the three state families.
IntensityFn coherent_intensity_fn(const GcssParams& p, IntensityModel model);
IntensityFn gcss_intensity_fn(const GcssParams& p, IntensityModel model,
                              ConditioningWeight weight);
IntensityFn mixture_intensity_fn(const GcssParams& p, IntensityModel model);

// Fock-route integrand for cross checks (renders the state at each point).
IntensityFn gcss_intensity_fock_fn(const GcssParams& p, IntensityModel model,
                                   ConditioningWeight weight, int n_max);

// Per-tau trapezoidal time integral of the intensity function, pairwise
// summation, parallel over delays. coherent_peak mode divides the trace by
// the reference integrand's tau=0 integral (reference defaults to fn itself).
Trace ac_trace(const IntensityFn& fn, const PulseParams& pulse, const AcGrid& grid,
               Normalization normalization = Normalization::raw,
               const IntensityFn* reference = nullptr, int threads = 0);

// Resample to a uniform grid, hard-block every frequency above the cutoff
// (1/fs), inverse transform. DC passes untouched.
Trace band_block_filter(const Trace& tr, double block_above_inv_fs);

// Sliding-window mean over one interferogram cycle;
// sigma_out = window sample std / sqrt(window size).
Trace cycle_average(const Trace& tr, int points_per_cycle);

TraceMetrics trace_metrics(const Trace& iac, const MetricsWindows& windows = {});

// Divide values and sigmas by a scale (normalization helper).
Trace scaled(Trace tr, double divisor);

}  // namespace gcss
