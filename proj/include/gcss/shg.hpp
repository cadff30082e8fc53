#pragma once

#include "gcss/fock.hpp"
#include "gcss/states.hpp"

namespace gcss {

// Two-mode conversion system: fundamental (mode a) feeds photon pairs into
// the second harmonic (mode b). Only the product chi*t_final matters.
struct ShgSystem {
    int n_max_w = 60;
    int n_max_2w = 30;
    double chi = 1.0;      // coupling, 1/time
    double t_final = 0.16;

    void validate() const;
};

struct ShgTrajectory {
    int n_max_w = 0;
    int n_max_2w = 0;
    std::vector<double> times;
    std::vector<TwoModeVector> states;
    std::vector<double> n_w;        // <n_omega>
    std::vector<double> n_2w;       // <n_2omega>
    std::vector<double> conserved;  // <n_omega + 2 n_2omega>
    std::vector<double> energy;     // <H>
    std::vector<double> leakage;
    long steps_used = 0;
};

// chi (a_w^2 a_2w^dag + (a_w^dag)^2 a_2w) on the product space; sparse,
// Hermitian, purely off-diagonal.
FockOperator build_hamiltonian(const ShgSystem& sys);

enum class ShgInput { coherent, gcss };

// Fundamental-mode state (coherent amplitude of the interferometer output at
// tau=0 with a flat envelope, or the conditioned superposition rendered in
// the Fock basis) tensored with the harmonic vacuum. The pulse envelope is
// forced flat and tau forced to 0 regardless of the incoming params.
TwoModeVector initial_state(ShgInput kind, const GcssParams& params, const ShgSystem& sys);

// Fixed-step RK4 with step-doubling until the total norm drift stays below
// tol. No renormalization anywhere: the drift is the error signal.
// Throws IntegrationError when conservation is violated beyond 100*tol and
// TruncationError when boundary leakage exceeds 1e-6.
ShgTrajectory evolve(const FockOperator& hamiltonian, const TwoModeVector& psi0,
                     const ShgSystem& sys, int snapshots, double tol);

// Reduced second-harmonic density of the final snapshot.
FockDensity second_harmonic_state(const ShgTrajectory& traj);

// Bisection on t_final until <n_2w>(t_final) hits the target within 2%
// (monotone in the depletion-free regime). Returns the tuned t_final.
double tune_interaction_time(const FockOperator& hamiltonian, const TwoModeVector& psi0,
                             const ShgSystem& sys, double target_n_2w, double tol = 1e-9);

}  // namespace gcss
