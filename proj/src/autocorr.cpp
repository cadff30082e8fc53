#include "gcss/autocorr.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

namespace gcss {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// Instantaneous two-arm and reference amplitudes, hand-inlined for the
// inner trace loops.
struct PointAmps {
    Complex psi;
    Complex ref;
};

PointAmps eval_amps(const GcssParams& p, double t, double tau) {
    const double w = p.pulse.omega();
    const Complex half = 0.5 * (p.alpha + p.delta_alpha);
    const Complex arm_p = half * p.pulse.envelope_at(t + tau / 2.0) *
                          std::polar(1.0, w * (t + tau / 2.0));
    const Complex arm_m = half * p.pulse.envelope_at(t - tau / 2.0) *
                          std::polar(1.0, w * (t - tau / 2.0));
    const Complex ref = p.alpha * p.pulse.envelope_at(t) * std::polar(1.0, w * t);
    return {arm_p + arm_m, ref};
}

double coherent_point(const GcssParams& p, double t, double tau, IntensityModel model) {
    const auto a = eval_amps(p, t, tau);
    const double n = std::norm(a.psi);
    return model == IntensityModel::full ? n * n + n : n * n;
}

// Two-component Gram algebra for the conditioned state, in a cancellation-
// stable form (norm^2 via expm1).
double gcss_point(const GcssParams& p, double t, double tau, IntensityModel model,
                  ConditioningWeight weight) {
    const auto a = eval_amps(p, t, tau);
    const Complex b1 = a.psi, b2 = a.ref;
    const Complex expo = -0.5 * std::norm(b2) - 0.5 * std::norm(b1) + std::conj(b2) * b1;
    Complex xi{0.0, 0.0};
    if (expo.real() > -700.0) xi = std::exp(expo);  // <b2|b1>
    const Complex c2 = -p.xi_q_factor * xi;
    const Complex o12 = std::conj(xi);  // <b1|b2>

    auto moment_num = [&](int k) {  // <(a^dag)^k a^k> numerator
        Complex b1k{1.0, 0.0}, b2k{1.0, 0.0};
        for (int i = 0; i < k; ++i) {
            b1k *= b1;
            b2k *= b2;
        }
        const Complex cross = c2 * std::conj(b1k) * b2k * o12;
        return std::norm(b1k) + 2.0 * cross.real() + std::norm(c2) * std::norm(b2k);
    };

    double value = moment_num(2);
    if (model == IntensityModel::full) value += moment_num(1);
    if (weight == ConditioningWeight::postselected) return value;

    // norm^2 = 1 - |xi|^2 (2 q - q^2) = (1 - |xi|^2) + |xi|^2 (1-q)^2, q = xi_q
    const double u = std::exp(2.0 * std::min(expo.real(), 0.0));  // |xi|^2
    const double q = p.xi_q_factor;
    double n2 = -std::expm1(2.0 * std::min(expo.real(), 0.0)) + u * (1.0 - q) * (1.0 - q);
    if (n2 < 1e-24) throw NullStateError("gcss intensity: conditioned state has zero norm");
    return value / n2;
}

double mixture_point(const GcssParams& p, double t, double tau, IntensityModel model) {
    const auto a = eval_amps(p, t, tau);
    const double u = std::norm(coherent_overlap(a.ref, a.psi));
    auto intens = [&](const Complex& amp) {
        const double n = std::norm(amp);
        return model == IntensityModel::full ? n * n + n : n * n;
    };
    return (intens(a.psi) + u * intens(a.ref)) / (1.0 + u);
}

}  // namespace

void Trace::validate() const {
    if (delays.size() != values.size() || delays.size() != sigma.size())
        throw ConfigError("Trace: column lengths differ");
    for (std::size_t i = 1; i < delays.size(); ++i)
        if (!(delays[i] > delays[i - 1])) throw ConfigError("Trace: delays must be strictly increasing");
    for (double v : values)
        if (!std::isfinite(v)) throw ConfigError("Trace: non-finite value");
    for (double s : sigma)
        if (!(s >= 0.0)) throw ConfigError("Trace: sigma must be >= 0");
}

std::vector<double> AcGrid::tau_grid() const {
    std::vector<double> taus;
    const long n = std::lround((tau_max - tau_min) / tau_step);
    taus.reserve(n + 1);
    for (long i = 0; i <= n; ++i) taus.push_back(tau_min + i * tau_step);
    return taus;
}

void AcGrid::validate(const PulseParams& pulse) const {
    if (!(tau_max > tau_min) || tau_step <= 0.0 || t_halfwidth <= 0.0 || t_step <= 0.0)
        throw ConfigError("AcGrid: degenerate grid");
    if (pulse.envelope == Envelope::gaussian && 2.0 * t_halfwidth < 4.0 * pulse.fwhm_fs)
        throw ConfigError("AcGrid: t window must cover at least 4 envelope FWHM");
    if (t_step > pulse.cycle_fs() / 20.0)
        throw ConfigError("AcGrid: t step undersamples the optical cycle (need <= cycle/20)");
}

double intensity_squared(const CoherentSnapshot& snap) {
    return snapshot_moment(snap, 2, 2).real() + snapshot_moment(snap, 1, 1).real();
}

double intensity_squared(const CoherentSuperposition& s, double t) {
    return intensity_squared(snapshot_at(s, t));
}

namespace {
FockOperator make_pair_rate(int n_max) {
    auto ops = ladder_operators(n_max);
    return ops.creation * ops.creation * ops.annihilation * ops.annihilation;
}
}  // namespace

IntensityOps::IntensityOps(int n_max)
    : pair_rate(make_pair_rate(n_max)), number(ladder_operators(n_max).number) {}

double intensity_squared(const FockVector& v, const IntensityOps& ops) {
    const double n2 = v.squared_norm();
    if (n2 < 1e-24) throw NullStateError("intensity_squared: zero-norm Fock vector");
    return (expectation_value(ops.pair_rate, v).real() +
            expectation_value(ops.number, v).real()) / n2;
}

double intensity_squared(const FockDensity& rho, const IntensityOps& ops) {
    const double tr = rho.trace_real();
    if (std::abs(tr) < 1e-24) throw NullStateError("intensity_squared: zero-trace density");
    return (expectation_value(ops.pair_rate, rho).real() +
            expectation_value(ops.number, rho).real()) / tr;
}

IntensityFn coherent_intensity_fn(const GcssParams& p, IntensityModel model) {
    p.validate();
    return [p, model](double t, double tau) { return coherent_point(p, t, tau, model); };
}

IntensityFn gcss_intensity_fn(const GcssParams& p, IntensityModel model,
                              ConditioningWeight weight) {
    p.validate();
    return [p, model, weight](double t, double tau) {
        return gcss_point(p, t, tau, model, weight);
    };
}

IntensityFn mixture_intensity_fn(const GcssParams& p, IntensityModel model) {
    p.validate();
    return [p, model](double t, double tau) { return mixture_point(p, t, tau, model); };
}

IntensityFn gcss_intensity_fock_fn(const GcssParams& p, IntensityModel model,
                                   ConditioningWeight weight, int n_max) {
    p.validate();
    auto ops = std::make_shared<IntensityOps>(n_max);
    return [p, model, weight, ops, n_max](double t, double tau) {
        GcssParams q = p;
        q.tau_fs = tau;
        const auto a = eval_amps(q, t, tau);
        const Complex xi = q.xi_q_factor * coherent_overlap(a.ref, a.psi);
        FockVector v = coherent_fock(a.psi, n_max);
        FockVector r = coherent_fock(a.ref, n_max);
        Eigen::VectorXcd amp = v.amplitudes() - xi * r.amplitudes();
        FockVector g(n_max, std::move(amp));
        double num = expectation_value(ops->pair_rate, g).real();
        if (model == IntensityModel::full) num += expectation_value(ops->number, g).real();
        if (weight == ConditioningWeight::postselected) return num;
        const double n2 = g.squared_norm();
        if (n2 < 1e-24) throw NullStateError("gcss fock intensity: zero norm");
        return num / n2;
    };
}

Trace ac_trace(const IntensityFn& fn, const PulseParams& pulse, const AcGrid& grid,
               Normalization normalization, const IntensityFn* reference, int threads) {
    grid.validate(pulse);
    const std::vector<double> taus = grid.tau_grid();
    const long nt = std::lround(2.0 * grid.t_halfwidth / grid.t_step);
    std::vector<double> tgrid(nt + 1);
    for (long i = 0; i <= nt; ++i) tgrid[i] = -grid.t_halfwidth + i * grid.t_step;

    auto integrate = [&](const IntensityFn& f, double tau) {
        std::vector<double> integrand(tgrid.size());
        for (std::size_t i = 0; i < tgrid.size(); ++i) integrand[i] = f(tgrid[i], tau);
        return trapezoid_uniform(integrand, grid.t_step);
    };

    Trace tr;
    tr.delays = taus;
    tr.values.assign(taus.size(), 0.0);
    tr.sigma.assign(taus.size(), 0.0);
    tr.uniform = true;

    parallel_for(taus.size(), threads,
                 [&](std::size_t i) { tr.values[i] = integrate(fn, taus[i]); });

    if (normalization == Normalization::coherent_peak) {
        const IntensityFn& ref = reference ? *reference : fn;
        const double anchor = integrate(ref, 0.0);
        if (std::abs(anchor) < 1e-300)
            throw NullStateError("ac_trace: zero reference anchor at tau=0");
        for (auto& v : tr.values) v /= anchor;
    }
    return tr;
}

Trace band_block_filter(const Trace& tr, double block_above_inv_fs) {
    tr.validate();
    const std::size_t n = tr.size();
    if (n < 64) throw ConfigError("band_block_filter: need at least 64 points");
    if (block_above_inv_fs <= 0.0) throw ConfigError("band_block_filter: cutoff must be positive");

    // Resample onto a uniform grid by linear interpolation.
    const double t0 = tr.delays.front(), t1 = tr.delays.back();
    const double dt = (t1 - t0) / static_cast<double>(n - 1);
    std::vector<double> u_delays(n), u_values(n), u_sigma(n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t0 + dt * static_cast<double>(i);
        u_delays[i] = t;
        while (k + 2 < n && tr.delays[k + 1] < t) ++k;
        const double span = tr.delays[k + 1] - tr.delays[k];
        const double w = std::clamp((t - tr.delays[k]) / span, 0.0, 1.0);
        u_values[i] = (1.0 - w) * tr.values[k] + w * tr.values[k + 1];
        u_sigma[i] = (1.0 - w) * tr.sigma[k] + w * tr.sigma[k + 1];
    }

    static std::mutex plan_mutex;
    std::vector<double> in(u_values);
    std::vector<fftw_complex> spec(n / 2 + 1);
    fftw_plan fwd, bwd;
    {
        std::lock_guard<std::mutex> lock(plan_mutex);
        fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), spec.data(), FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec.data(), in.data(), FFTW_ESTIMATE);
    }
    fftw_execute(fwd);
    for (std::size_t b = 0; b < spec.size(); ++b) {
        const double freq = static_cast<double>(b) / (static_cast<double>(n) * dt);
        if (freq > block_above_inv_fs) {
            spec[b][0] = 0.0;
            spec[b][1] = 0.0;
        }
    }
    fftw_execute(bwd);
    {
        std::lock_guard<std::mutex> lock(plan_mutex);
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }

    Trace out;
    out.delays = std::move(u_delays);
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = in[i] / static_cast<double>(n);
    out.sigma = std::move(u_sigma);
    out.uniform = true;
    return out;
}

Trace cycle_average(const Trace& tr, int points_per_cycle) {
    tr.validate();
    if (points_per_cycle < 2) throw ConfigError("cycle_average: need at least 2 points per cycle");
    const std::size_t n = tr.size();
    if (static_cast<std::size_t>(points_per_cycle) > n)
        throw ConfigError("cycle_average: window longer than trace");
    const int half = points_per_cycle / 2;

    Trace out;
    out.delays = tr.delays;
    out.values.resize(n);
    out.sigma.resize(n);
    out.uniform = tr.uniform;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= static_cast<std::size_t>(half) ? i - half : 0;
        const std::size_t hi = std::min(n, i + static_cast<std::size_t>(half) + 1);
        const std::size_t m = hi - lo;
        double mean = 0.0;
        for (std::size_t j = lo; j < hi; ++j) mean += tr.values[j];
        mean /= static_cast<double>(m);
        double var = 0.0;
        for (std::size_t j = lo; j < hi; ++j) {
            const double d = tr.values[j] - mean;
            var += d * d;
        }
        var = m > 1 ? var / static_cast<double>(m - 1) : 0.0;
        out.values[i] = mean;
        out.sigma[i] = std::sqrt(var) / std::sqrt(static_cast<double>(m));
    }
    return out;
}

TraceMetrics trace_metrics(const Trace& iac, const MetricsWindows& w) {
    iac.validate();
    if (iac.size() == 0) throw ConfigError("trace_metrics: empty trace");

    double smax = -1e300, smin = 1e300;
    bool have_max = false, have_min = false;
    std::size_t i_zero = 0;
    double best = 1e300;
    const double span = std::max(std::abs(iac.delays.front()), std::abs(iac.delays.back()));
    const double bg_lo = (1.0 - w.background_fraction) * span;
    double bg_sum = 0.0;
    std::size_t bg_n = 0;

    for (std::size_t i = 0; i < iac.size(); ++i) {
        const double at = std::abs(iac.delays[i]);
        if (at >= w.max_window_lo && at <= w.max_window_hi) {
            smax = std::max(smax, iac.values[i]);
            have_max = true;
        }
        if (at <= w.min_window_hi) {
            smin = std::min(smin, iac.values[i]);
            have_min = true;
        }
        if (at < best) {
            best = at;
            i_zero = i;
        }
        if (at >= bg_lo) {
            bg_sum += iac.values[i];
            ++bg_n;
        }
    }
    if (!have_max || !have_min) throw ConfigError("trace_metrics: extremum window is empty");

    TraceMetrics m;
    m.s_zero = iac.values[i_zero];
    const double denom = smax + smin;
    m.m_depth = std::abs(denom) > 1e-300 ? std::max(0.0, 2.0 * (smax - smin) / denom) : 0.0;
    m.background = bg_n > 0 ? bg_sum / static_cast<double>(bg_n) : 0.0;
    return m;
}

Trace scaled(Trace tr, double divisor) {
    if (std::abs(divisor) < 1e-300) throw ConfigError("scaled: zero divisor");
    for (auto& v : tr.values) v /= divisor;
    for (auto& s : tr.sigma) s /= divisor;
    return tr;
}

}  // namespace gcss
