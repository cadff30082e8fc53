#include "gcss/shg.hpp"

#include <cmath>

namespace gcss {

void ShgSystem::validate() const {
    if (n_max_w < 1 || n_max_2w < 1) throw ConfigError("ShgSystem: cutoffs must be >= 1");
    if (chi <= 0.0) throw ConfigError("ShgSystem: chi must be positive");
    if (t_final <= 0.0) throw ConfigError("ShgSystem: t_final must be positive");
}

FockOperator build_hamiltonian(const ShgSystem& sys) {
    sys.validate();
    const int da = sys.n_max_w + 1, db = sys.n_max_2w + 1;
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(2 * static_cast<std::size_t>(da) * db);
    for (int i = 2; i < da; ++i) {
        for (int j = 0; j + 1 < db; ++j) {
            // a_w^2 a_2w^dag : |i, j> -> sqrt(i(i-1)) sqrt(j+1) |i-2, j+1>
            const double amp =
                sys.chi * std::sqrt(static_cast<double>(i) * (i - 1)) * std::sqrt(j + 1.0);
            const int col = i * db + j;
            const int row = (i - 2) * db + (j + 1);
            trip.emplace_back(row, col, amp);
            trip.emplace_back(col, row, amp);
        }
    }
    SparseOp h(da * db, da * db);
    h.setFromTriplets(trip.begin(), trip.end());
    return FockOperator(std::move(h));
}

TwoModeVector initial_state(ShgInput kind, const GcssParams& params, const ShgSystem& sys) {
    sys.validate();
    GcssParams p = params;
    p.tau_fs = 0.0;
    p.pulse.envelope = Envelope::flat;
    p.validate();

    FockVector fundamental(sys.n_max_w);
    if (kind == ShgInput::coherent) {
        fundamental = coherent_fock(p.alpha + p.delta_alpha, sys.n_max_w);
    } else {
        // Fock rendering of the conditioned superposition at t=0.
        const CoherentSuperposition g = gcss_state(p, 0.0);
        Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(sys.n_max_w + 1);
        for (const auto& comp : g.components())
            amp += comp.coefficient * coherent_fock(comp.amplitude(0.0), sys.n_max_w).amplitudes();
        fundamental = FockVector(sys.n_max_w, std::move(amp));
    }
    if (fundamental.leakage() > 1e-6)
        throw TruncationError("initial_state: fundamental-mode leakage exceeds 1e-6");
    return tensor_product(fundamental, FockVector::basis_state(0, sys.n_max_2w));
}

namespace {

struct ModeObservables {
    Eigen::VectorXd n_w;
    Eigen::VectorXd n_2w;
};

ModeObservables mode_numbers(int da, int db) {
    ModeObservables m;
    m.n_w.resize(da * db);
    m.n_2w.resize(da * db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < db; ++j) {
            m.n_w(i * db + j) = i;
            m.n_2w(i * db + j) = j;
        }
    return m;
}

void rk4_run(const SparseOp& h, Eigen::VectorXcd& psi, double t_total, long steps) {
    const double dt = t_total / static_cast<double>(steps);
    const Complex mi{0.0, -1.0};
    Eigen::VectorXcd k1, k2, k3, k4, tmp;
    for (long s = 0; s < steps; ++s) {
        k1 = mi * (h * psi);
        tmp = psi + (0.5 * dt) * k1;
        k2 = mi * (h * tmp);
        tmp = psi + (0.5 * dt) * k2;
        k3 = mi * (h * tmp);
        tmp = psi + dt * k3;
        k4 = mi * (h * tmp);
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
}

}  // namespace

ShgTrajectory evolve(const FockOperator& hamiltonian, const TwoModeVector& psi0,
                     const ShgSystem& sys, int snapshots, double tol) {
    sys.validate();
    if (tol < 1e-12) throw ConfigError("evolve: tol must be >= 1e-12");
    if (snapshots < 2) throw ConfigError("evolve: need at least 2 snapshots");
    if (hamiltonian.dim() != psi0.dim()) throw DimensionError("evolve: dimension mismatch");
    if (std::abs(psi0.squared_norm() - 1.0) > 1e-9)
        throw ConfigError("evolve: psi0 must be normalized");

    const int da = sys.n_max_w + 1, db = sys.n_max_2w + 1;
    const auto obs = mode_numbers(da, db);
    const SparseOp& h = hamiltonian.sparse();

    // RK4 stability bound from the max row sum, then refine by doubling until
    // the norm drift over the whole run stays below tol.
    double row_max = 0.0;
    for (int k = 0; k < h.outerSize(); ++k) {
        double s = 0.0;
        for (SparseOp::InnerIterator it(h, k); it; ++it) s += std::abs(it.value());
        row_max = std::max(row_max, s);
    }
    long steps_per_leg = std::max<long>(8, std::lround(sys.t_final * row_max));

    const double leg = sys.t_final / static_cast<double>(snapshots - 1);
    ShgTrajectory traj;
    for (int attempt = 0;; ++attempt) {
        traj = ShgTrajectory{};
        traj.n_max_w = sys.n_max_w;
        traj.n_max_2w = sys.n_max_2w;
        Eigen::VectorXcd psi = psi0.amp;
        bool drift_ok = true;

        for (int snap = 0; snap < snapshots; ++snap) {
            if (snap > 0) rk4_run(h, psi, leg, steps_per_leg);
            const double t = leg * snap;
            TwoModeVector state{sys.n_max_w, sys.n_max_2w, psi};
            const double norm2 = psi.squaredNorm();
            if (std::abs(norm2 - 1.0) > tol) {
                drift_ok = false;
                break;
            }
            const Eigen::VectorXd prob = psi.cwiseAbs2();
            traj.times.push_back(t);
            traj.n_w.push_back(prob.dot(obs.n_w));
            traj.n_2w.push_back(prob.dot(obs.n_2w));
            traj.conserved.push_back(prob.dot(obs.n_w) + 2.0 * prob.dot(obs.n_2w));
            traj.energy.push_back(psi.dot(h * psi).real());
            traj.leakage.push_back(state.leakage());
            traj.states.push_back(std::move(state));
        }
        if (drift_ok) break;
        steps_per_leg *= 2;
        if (attempt >= 24) throw IntegrationError("evolve: step control failed to converge");
    }
    traj.steps_used = steps_per_leg * (snapshots - 1);

    const double n0 = traj.conserved.front();
    for (std::size_t i = 0; i < traj.conserved.size(); ++i) {
        if (std::abs(traj.conserved[i] - n0) > 100.0 * tol * std::max(1.0, std::abs(n0)))
            throw IntegrationError("evolve: excitation-number conservation violated");
        if (traj.leakage[i] > 1e-6)
            throw TruncationError("evolve: boundary leakage exceeds 1e-6, raise the cutoffs");
    }
    return traj;
}

FockDensity second_harmonic_state(const ShgTrajectory& traj) {
    if (traj.states.empty()) throw ConfigError("second_harmonic_state: empty trajectory");
    if (traj.leakage.back() > 1e-6)
        throw TruncationError("second_harmonic_state: final snapshot fails the leakage check");
    return partial_trace(traj.states.back(), Mode::b);
}

double tune_interaction_time(const FockOperator& hamiltonian, const TwoModeVector& psi0,
                             const ShgSystem& sys, double target_n_2w, double tol) {
    if (target_n_2w <= 0.0) throw ConfigError("tune_interaction_time: target must be positive");
    auto n2w_at = [&](double t) {
        ShgSystem probe = sys;
        probe.t_final = t;
        return evolve(hamiltonian, psi0, probe, 2, tol).n_2w.back();
    };
    double hi = sys.t_final;
    double v_hi = n2w_at(hi);
    int guard = 0;
    while (v_hi < target_n_2w) {
        hi *= 2.0;
        v_hi = n2w_at(hi);
        if (++guard > 12)
            throw IntegrationError("tune_interaction_time: target unreachable before cutoff effects");
    }
    double lo = 0.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v = n2w_at(mid);
        if (std::abs(v - target_n_2w) <= 0.02 * target_n_2w) return mid;
        (v < target_n_2w ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace gcss
