#include "gcss/coherent.hpp"

#include <cmath>

namespace gcss {

namespace {
constexpr double kLn2 = 0.6931471805599453;
constexpr double kUnderflowExponent = -700.0;

Complex ipow(Complex base, int n) {
    Complex r{1.0, 0.0};
    for (int i = 0; i < n; ++i) r *= base;
    return r;
}
}  // namespace

double PulseParams::omega() const { return 2.0 * constants::pi * constants::c_nm_per_fs / lambda_nm; }

double PulseParams::cycle_fs() const { return lambda_nm / constants::c_nm_per_fs; }

double PulseParams::envelope_at(double t) const {
    if (envelope == Envelope::flat) return 1.0;
    const double u = t / fwhm_fs;
    return std::exp(-2.0 * kLn2 * u * u);
}

void PulseParams::validate() const {
    if (lambda_nm <= 0.0) throw ConfigError("PulseParams: lambda must be positive");
    if (fwhm_fs <= 0.0) throw ConfigError("PulseParams: duration must be positive");
}

CompositeAmplitude::CompositeAmplitude(std::vector<AmplitudeTerm> terms, PulseParams pulse)
    : terms_(std::move(terms)), pulse_(pulse) {
    pulse_.validate();
}

Complex CompositeAmplitude::operator()(double t) const {
    const double w = pulse_.omega();
    Complex sum{0.0, 0.0};
    for (const auto& term : terms_)
        sum += term.scale * pulse_.envelope_at(t - term.center_fs) *
               std::polar(1.0, w * (t - term.phase_fs));
    return sum;
}

CoherentSuperposition::CoherentSuperposition(std::vector<WeightedAmplitude> components,
                                             bool normalized)
    : components_(std::move(components)), normalized_(normalized) {
    if (components_.empty())
        throw ConfigError("CoherentSuperposition: at least one component required");
}

CoherentSnapshot snapshot_at(const CoherentSuperposition& s, double t) {
    CoherentSnapshot snap;
    snap.coeff.reserve(s.size());
    snap.alpha.reserve(s.size());
    for (const auto& c : s.components()) {
        snap.coeff.push_back(c.coefficient);
        snap.alpha.push_back(c.amplitude(t));
    }
    return snap;
}

Complex coherent_overlap(Complex beta, Complex gamma) {
    const Complex expo = -0.5 * std::norm(beta) - 0.5 * std::norm(gamma) + std::conj(beta) * gamma;
    if (expo.real() < kUnderflowExponent) return {0.0, 0.0};
    return std::exp(expo);
}

Complex evaluate_amplitude(const CompositeAmplitude& a, double t) { return a(t); }

double snapshot_norm_squared(const CoherentSnapshot& s) {
    const std::size_t n = s.size();
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            acc += std::conj(s.coeff[j]) * s.coeff[k] * coherent_overlap(s.alpha[j], s.alpha[k]);
    return acc.real();
}

double superposition_norm(const CoherentSuperposition& s, double t) {
    const double n2 = snapshot_norm_squared(snapshot_at(s, t));
    const double n = std::sqrt(std::max(n2, 0.0));
    if (n < 1e-12) throw NullStateError("superposition_norm: state collapsed to zero norm");
    return n;
}

Complex snapshot_moment_unnormalized(const CoherentSnapshot& s, int p, int q) {
    if (p < 0 || q < 0) throw ConfigError("snapshot_moment: p,q must be >= 0");
    const std::size_t n = s.size();
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            const Complex g = coherent_overlap(s.alpha[j], s.alpha[k]);
            acc += std::conj(s.coeff[j]) * s.coeff[k] * ipow(std::conj(s.alpha[j]), p) *
                   ipow(s.alpha[k], q) * g;
        }
    return acc;
}

Complex snapshot_moment(const CoherentSnapshot& s, int p, int q) {
    const double n2 = snapshot_norm_squared(s);
    if (n2 < 1e-24) throw NullStateError("snapshot_moment: state collapsed to zero norm");
    return snapshot_moment_unnormalized(s, p, q) / n2;
}

Complex normal_ordered_moment(const CoherentSuperposition& s, int p, int q, double t) {
    return snapshot_moment(snapshot_at(s, t), p, q);
}

}  // namespace gcss
