#pragma once

#include <vector>

#include "gcss/errors.hpp"
#include "gcss/numerics.hpp"

namespace gcss {

enum class Envelope { gaussian, flat };

// Carrier + envelope description of the drive pulse. Times in fs,
// frequencies in rad/fs.
struct PulseParams {
    double lambda_nm = 800.0;
    double fwhm_fs = 25.0;  // intensity FWHM
    Envelope envelope = Envelope::gaussian;

    double omega() const;     // 2*pi*c/lambda
    double cycle_fs() const;  // optical period, lambda/c
    // f(t): gaussian exp(-2 ln2 (t/T)^2) or identically 1
    double envelope_at(double t) const;

    void validate() const;
};

struct AmplitudeTerm {
    Complex scale;
    double center_fs = 0.0;  // envelope center
    double phase_fs = 0.0;   // carrier reference time
};

// Time-parametrized coherent amplitude
//   A(t) = sum_k scale_k * f(t - center_k) * exp(i w (t - phase_k)).
class CompositeAmplitude {
public:
    CompositeAmplitude(std::vector<AmplitudeTerm> terms, PulseParams pulse);

    Complex operator()(double t) const;

    const std::vector<AmplitudeTerm>& terms() const { return terms_; }
    const PulseParams& pulse() const { return pulse_; }

private:
    std::vector<AmplitudeTerm> terms_;
    PulseParams pulse_;
};

struct WeightedAmplitude {
    Complex coefficient;
    CompositeAmplitude amplitude;
};

// Finite superposition of time-dependent coherent states sharing one clock.
// When `normalized` is set the coefficients include the normalization
// constant computed at the builder's evaluation instant.
class CoherentSuperposition {
public:
    CoherentSuperposition(std::vector<WeightedAmplitude> components, bool normalized);

    const std::vector<WeightedAmplitude>& components() const { return components_; }
    bool normalized() const { return normalized_; }
    std::size_t size() const { return components_.size(); }

private:
    std::vector<WeightedAmplitude> components_;
    bool normalized_;
};

// The superposition frozen at one instant: plain complex amplitudes.
struct CoherentSnapshot {
    std::vector<Complex> coeff;
    std::vector<Complex> alpha;

    std::size_t size() const { return coeff.size(); }
};

CoherentSnapshot snapshot_at(const CoherentSuperposition& s, double t);

// <beta|gamma> = exp(-|beta|^2/2 - |gamma|^2/2 + conj(beta) gamma),
// evaluated through the exponent; magnitudes below exp(-700) flush to 0.
Complex coherent_overlap(Complex beta, Complex gamma);

Complex evaluate_amplitude(const CompositeAmplitude& a, double t);

// sqrt(sum_jk conj(c_j) c_k <a_j|a_k>) at instant t.
// Throws NullStateError when the norm falls below 1e-12.
double superposition_norm(const CoherentSuperposition& s, double t);
double snapshot_norm_squared(const CoherentSnapshot& s);

// <(a^dag)^p a^q> = sum_jk conj(c_j) c_k conj(a_j)^p a_k^q <a_j|a_k> / norm^2.
Complex normal_ordered_moment(const CoherentSuperposition& s, int p, int q, double t);
Complex snapshot_moment(const CoherentSnapshot& s, int p, int q);
// Same sum without the norm^2 division (the raw matrix element).
Complex snapshot_moment_unnormalized(const CoherentSnapshot& s, int p, int q);

}  // namespace gcss
