#pragma once

#include "gcss/coherent.hpp"
#include "gcss/fock.hpp"

namespace gcss {

// Parameters of the conditioned infrared state. alpha is the post-attenuation
// amplitude before depletion, delta_alpha the depletion shift (real negative
// by convention unless overridden).
struct GcssParams {
    Complex alpha{12.0, 0.0};
    Complex delta_alpha{-0.24, 0.0};
    double tau_fs = 0.0;
    PulseParams pulse{};
    double xi_q_factor = 1.0;  // harmonic-vacuum overlap scalar in [0,1]

    void validate() const;
};

// Interferometer output: one coherent component with amplitude
//   (alpha+delta_alpha)/2 [ f(t+tau/2) e^{iw(t+tau/2)} + f(t-tau/2) e^{iw(t-tau/2)} ].
CoherentSuperposition interferometer_state(const GcssParams& p);

// Same two-arm composite for an arbitrary scale (helpers for references).
CompositeAmplitude interferometer_amplitude(Complex scale, double tau_fs, const PulseParams& pulse);

// The undepleted single-pulse reference alpha f(t) e^{iwt}.
CompositeAmplitude reference_amplitude(const GcssParams& p);

// Conditioned state psi - xi_q * xi_ir(t,tau) * |alpha(t)>, normalized at t.
// xi_ir = <alpha(t)|psi(t,tau)> evaluated on the instantaneous amplitudes.
// Throws NullStateError when the two components coincide (|xi| -> 1).
CoherentSuperposition gcss_state(const GcssParams& p, double t);

// Instantaneous overlap <alpha(t)|psi(t,tau)>.
Complex gcss_xi_ir(const GcssParams& p, double t);

// Classical two-component mixture descriptor: per-(t,tau) weights
// (1, |xi_ir|^2) / (1 + |xi_ir|^2) on the psi and reference amplitudes.
struct MixtureSnapshot {
    std::vector<double> weight;
    std::vector<Complex> alpha;
};
MixtureSnapshot mixture_snapshot(const GcssParams& p, double t);

struct MixedState {
    FockDensity density;
    double weight_psi = 0.0;
    double weight_ref = 0.0;
};
// Trace-normalized Fock rendering of the mixture at instant t.
MixedState mixed_state(const GcssParams& p, double t, int n_max);

// N(|alpha> + sign |-alpha>), normalized; flat envelope, evaluate at t=0.
CoherentSuperposition parity_cat(Complex alpha, int sign);

}  // namespace gcss
