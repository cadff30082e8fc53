#include "gcss/qspec.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gcss {

void QspecParams::validate() const {
    if (n_shots < 1) throw ConfigError("QspecParams: n_shots must be >= 1");
    if (hhg_prob < 0.0 || hhg_prob > 1.0) throw ConfigError("QspecParams: hhg_prob must be in [0,1]");
    if (ir_fluct_sigma < 0.0) throw ConfigError("QspecParams: ir_fluct_sigma must be >= 0");
    if (a_hh < 1.0 || b_ir < 1.0) throw ConfigError("QspecParams: attenuations must be >= 1");
    if (absorption_a <= 0.0) throw ConfigError("QspecParams: absorption factor must be positive");
    if (n_q <= 0.0) throw ConfigError("QspecParams: n_q must be positive");
    if (q_orders.empty()) throw ConfigError("QspecParams: q_orders must be non-empty");
    for (int q : q_orders)
        if (q < 11 || q % 2 == 0) throw ConfigError("QspecParams: orders must be odd and >= 11");
    if (bin_width <= 0.0) throw ConfigError("QspecParams: bin_width must be positive");
    if (band_halfwidth <= 0.0) throw ConfigError("QspecParams: band_halfwidth must be positive");
}

namespace {
// splitmix64: per-shot stream seeding so synthesis stays deterministic under
// any parallel schedule.
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace

std::vector<ShotRecord> synthesize_shots(const QspecParams& p, std::uint64_t seed) {
    p.validate();
    std::vector<ShotRecord> shots(static_cast<std::size_t>(p.n_shots));
    for (long i = 0; i < p.n_shots; ++i) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(i))));
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> uni(0.0, 1.0);

        const double n_ir = p.ir_mean * (1.0 + p.ir_fluct_sigma * gauss(rng));
        double loss = 0.0;
        double n_hh = 0.0;
        bool event = false;
        for (int q : p.q_orders) {
            if (uni(rng) >= p.hhg_prob) continue;
            double nq = p.n_q;
            if (p.n_q_poisson) {
                std::poisson_distribution<long> pois(p.n_q);
                nq = static_cast<double>(pois(rng));
            }
            if (nq <= 0.0) continue;
            loss += static_cast<double>(q) * p.absorption_a * nq;
            n_hh += nq;
            event = true;
        }

        ShotRecord s;
        s.is_hhg_event = event;
        s.s_monitor = n_ir;
        s.s_ir = (n_ir - loss) / p.b_ir + p.noise_ir * gauss(rng);
        double hh = n_hh / p.a_hh;
        if (!event) hh += p.stray_hh * std::abs(gauss(rng));
        s.s_hh = hh + p.noise_hh * gauss(rng);
        shots[static_cast<std::size_t>(i)] = s;
    }
    return shots;
}

std::vector<ShotRecord> stability_filter(const std::vector<ShotRecord>& shots, double threshold) {
    if (threshold <= 0.0) throw ConfigError("stability_filter: threshold must be positive");
    if (shots.empty()) throw DegenerateBatchError("stability_filter: empty batch");
    double mean = 0.0;
    for (const auto& s : shots) mean += s.s_monitor;
    mean /= static_cast<double>(shots.size());

    std::vector<ShotRecord> kept;
    kept.reserve(shots.size());
    for (const auto& s : shots)
        if (std::abs(s.s_monitor - mean) < threshold * std::abs(mean)) kept.push_back(s);
    if (kept.empty()) throw DegenerateBatchError("stability_filter: no shot passed the threshold");
    return kept;
}

std::vector<ShotRecord> monitor_correct(const std::vector<ShotRecord>& shots, double b_ir) {
    if (shots.empty()) throw DegenerateBatchError("monitor_correct: empty batch");
    double mean = 0.0;
    for (const auto& s : shots) mean += s.s_monitor;
    mean /= static_cast<double>(shots.size());
    std::vector<ShotRecord> out = shots;
    for (auto& s : out) s.s_ir -= (s.s_monitor - mean) / b_ir;
    return out;
}

namespace {
double channel_std(const std::vector<ShotRecord>& shots, double ShotRecord::*field) {
    const double n = static_cast<double>(shots.size());
    double mean = 0.0;
    for (const auto& s : shots) mean += s.*field;
    mean /= n;
    double var = 0.0;
    for (const auto& s : shots) {
        const double d = s.*field - mean;
        var += d * d;
    }
    return std::sqrt(var / n);
}
}  // namespace

BalanceResult balance_variances(std::vector<ShotRecord> shots) {
    if (shots.size() < 2) throw DegenerateBatchError("balance_variances: need at least 2 shots");
    const double sd_ir = channel_std(shots, &ShotRecord::s_ir);
    const double sd_hh = channel_std(shots, &ShotRecord::s_hh);
    if (sd_ir <= 0.0 || sd_hh <= 0.0)
        throw DegenerateBatchError("balance_variances: zero variance in a channel");
    const double scale = sd_ir / sd_hh;
    for (auto& s : shots) s.s_hh *= scale;
    return {std::move(shots), scale};
}

SelectionResult select_anticorrelated(const std::vector<ShotRecord>& shots,
                                      double band_halfwidth) {
    if (shots.empty()) throw DegenerateBatchError("select_anticorrelated: empty batch");
    const double m_ir = mean_s_ir(shots);
    const double m_hh = mean_s_hh(shots);
    SelectionResult out;
    for (const auto& s : shots)
        if (std::abs((s.s_ir - m_ir) + (s.s_hh - m_hh)) < band_halfwidth)
            out.selected.push_back(s);
    out.retained_fraction =
        static_cast<double>(out.selected.size()) / static_cast<double>(shots.size());
    return out;
}

PnHistogram photon_loss_histogram(const std::vector<ShotRecord>& selected,
                                  double baseline_s_ir, double bin_width, double b_ir) {
    if (selected.size() < 100)
        throw DegenerateBatchError("photon_loss_histogram: need at least 100 selected shots");
    if (bin_width <= 0.0) throw ConfigError("photon_loss_histogram: bin_width must be positive");

    std::vector<double> loss(selected.size());
    for (std::size_t i = 0; i < selected.size(); ++i)
        loss[i] = (baseline_s_ir - selected[i].s_ir) * b_ir;
    const auto [lo_it, hi_it] = std::minmax_element(loss.begin(), loss.end());
    const double lo = std::floor(*lo_it / bin_width) * bin_width;
    const std::size_t nbins =
        static_cast<std::size_t>(std::floor((*hi_it - lo) / bin_width)) + 1;

    PnHistogram h;
    h.edges.resize(nbins + 1);
    for (std::size_t b = 0; b <= nbins; ++b) h.edges[b] = lo + bin_width * static_cast<double>(b);
    h.probabilities.assign(nbins, 0.0);
    const double w = 1.0 / static_cast<double>(loss.size());
    for (double v : loss) {
        auto b = static_cast<std::size_t>((v - lo) / bin_width);
        if (b >= nbins) b = nbins - 1;
        h.probabilities[b] += w;
    }
    return h;
}

std::vector<double> histogram_peaks(const PnHistogram& h) {
    std::vector<double> peaks;
    const std::size_t n = h.probabilities.size();
    if (n == 0) return peaks;
    const double floor = 0.05 * *std::max_element(h.probabilities.begin(), h.probabilities.end());
    for (std::size_t i = 0; i < n; ++i) {
        const double v = h.probabilities[i];
        if (v < floor || v <= 0.0) continue;
        const double left = i > 0 ? h.probabilities[i - 1] : -1.0;
        const double right = i + 1 < n ? h.probabilities[i + 1] : -1.0;
        if (v >= left && v > right) peaks.push_back(h.center(i));
        else if (v > left && v >= right && i + 1 == n) peaks.push_back(h.center(i));
    }
    return peaks;
}

std::vector<double> peak_spacings(const std::vector<double>& peaks) {
    std::vector<double> out;
    for (std::size_t i = 1; i < peaks.size(); ++i) out.push_back(peaks[i] - peaks[i - 1]);
    return out;
}

double mean_s_ir(const std::vector<ShotRecord>& shots) {
    double m = 0.0;
    for (const auto& s : shots) m += s.s_ir;
    return m / static_cast<double>(shots.size());
}

double mean_s_hh(const std::vector<ShotRecord>& shots) {
    double m = 0.0;
    for (const auto& s : shots) m += s.s_hh;
    return m / static_cast<double>(shots.size());
}

double event_fraction(const std::vector<ShotRecord>& shots) {
    if (shots.empty()) return 0.0;
    double c = 0.0;
    for (const auto& s : shots) c += s.is_hhg_event ? 1.0 : 0.0;
    return c / static_cast<double>(shots.size());
}

double pearson_ir_hh(const std::vector<ShotRecord>& shots) {
    if (shots.size() < 2) throw DegenerateBatchError("pearson_ir_hh: need at least 2 shots");
    const double m_ir = mean_s_ir(shots), m_hh = mean_s_hh(shots);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const auto& s : shots) {
        const double x = s.s_ir - m_ir, y = s.s_hh - m_hh;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    if (sxx <= 0.0 || syy <= 0.0) throw DegenerateBatchError("pearson_ir_hh: zero variance");
    return sxy / std::sqrt(sxx * syy);
}

double delta_alpha_from_yield(double yield, double k) {
    if (yield < 0.0 || k < 0.0) throw ConfigError("delta_alpha_from_yield: negative input");
    return k * std::sqrt(yield);
}

}  // namespace gcss
