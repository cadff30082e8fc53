#include "gcss/states.hpp"

#include <cmath>

namespace gcss {

void GcssParams::validate() const {
    pulse.validate();
    if (std::abs(delta_alpha) > std::abs(alpha))
        throw ConfigError("GcssParams: |delta_alpha| must not exceed |alpha|");
    if (xi_q_factor < 0.0 || xi_q_factor > 1.0)
        throw ConfigError("GcssParams: xi_q_factor must lie in [0,1]");
}

CompositeAmplitude interferometer_amplitude(Complex scale, double tau_fs,
                                            const PulseParams& pulse) {
    std::vector<AmplitudeTerm> terms{
        {0.5 * scale, -tau_fs / 2.0, -tau_fs / 2.0},
        {0.5 * scale, +tau_fs / 2.0, +tau_fs / 2.0},
    };
    return CompositeAmplitude(std::move(terms), pulse);
}

CoherentSuperposition interferometer_state(const GcssParams& p) {
    p.validate();
    return CoherentSuperposition(
        {{Complex{1.0, 0.0}, interferometer_amplitude(p.alpha + p.delta_alpha, p.tau_fs, p.pulse)}},
        true);
}

CompositeAmplitude reference_amplitude(const GcssParams& p) {
    return CompositeAmplitude({{p.alpha, 0.0, 0.0}}, p.pulse);
}

Complex gcss_xi_ir(const GcssParams& p, double t) {
    const Complex psi = interferometer_amplitude(p.alpha + p.delta_alpha, p.tau_fs, p.pulse)(t);
    const Complex ref = reference_amplitude(p)(t);
    return coherent_overlap(ref, psi);
}

CoherentSuperposition gcss_state(const GcssParams& p, double t) {
    p.validate();
    if (p.delta_alpha == Complex{0.0, 0.0} && p.tau_fs == 0.0)
        throw NullStateError("gcss_state: delta_alpha=0 at tau=0 gives the null state");
    auto psi_amp = interferometer_amplitude(p.alpha + p.delta_alpha, p.tau_fs, p.pulse);
    auto ref_amp = reference_amplitude(p);
    const Complex xi = p.xi_q_factor * coherent_overlap(ref_amp(t), psi_amp(t));

    CoherentSuperposition raw({{Complex{1.0, 0.0}, psi_amp}, {-xi, ref_amp}}, false);
    const double norm = superposition_norm(raw, t);  // throws NullStateError when degenerate
    return CoherentSuperposition(
        {{Complex{1.0, 0.0} / norm, psi_amp}, {-xi / norm, ref_amp}}, true);
}

MixtureSnapshot mixture_snapshot(const GcssParams& p, double t) {
    const Complex psi = interferometer_amplitude(p.alpha + p.delta_alpha, p.tau_fs, p.pulse)(t);
    const Complex ref = reference_amplitude(p)(t);
    const double xi2 = std::norm(coherent_overlap(ref, psi));
    const double z = 1.0 + xi2;
    return {{1.0 / z, xi2 / z}, {psi, ref}};
}

MixedState mixed_state(const GcssParams& p, double t, int n_max) {
    p.validate();
    auto snap = mixture_snapshot(p, t);
    FockVector vpsi = coherent_fock(snap.alpha[0], n_max);
    FockVector vref = coherent_fock(snap.alpha[1], n_max);
    Eigen::MatrixXcd m =
        snap.weight[0] * (vpsi.amplitudes() * vpsi.amplitudes().adjoint()) +
        snap.weight[1] * (vref.amplitudes() * vref.amplitudes().adjoint());
    FockDensity rho(n_max, std::move(m));
    return {rho.normalized(), snap.weight[0], snap.weight[1]};
}

CoherentSuperposition parity_cat(Complex alpha, int sign) {
    if (sign != 1 && sign != -1) throw ConfigError("parity_cat: sign must be +1 or -1");
    if (alpha == Complex{0.0, 0.0} && sign == -1)
        throw NullStateError("parity_cat: odd cat at alpha=0 is the null state");
    PulseParams pulse;
    pulse.envelope = Envelope::flat;
    CompositeAmplitude plus({{alpha, 0.0, 0.0}}, pulse);
    CompositeAmplitude minus({{-alpha, 0.0, 0.0}}, pulse);
    const double s = static_cast<double>(sign);
    CoherentSuperposition raw({{Complex{1.0, 0.0}, plus}, {Complex{s, 0.0}, minus}}, false);
    const double norm = superposition_norm(raw, 0.0);
    return CoherentSuperposition(
        {{Complex{1.0, 0.0} / norm, plus}, {Complex{s, 0.0} / norm, minus}}, true);
}

}  // namespace gcss
