#include "doctest.h"

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>

#include "gcss/shg.hpp"
#include "gcss/wigner.hpp"

using namespace gcss;

namespace {

GcssParams desk_params(double delta = -0.24) {
    GcssParams p;
    p.alpha = {4.0, 0.0};
    p.delta_alpha = {delta, 0.0};
    p.tau_fs = 0.0;
    return p;
}

}  // namespace

TEST_CASE("conversion Hamiltonian structure") {
    ShgSystem sys;
    sys.n_max_w = 6;
    sys.n_max_2w = 3;
    sys.chi = 1.3;
    auto h = build_hamiltonian(sys);
    const auto& m = h.dense();
    const int db = sys.n_max_2w + 1;

    SUBCASE("pair-conversion matrix element") {
        // <0,1|H|2,0> = chi sqrt(2)
        CHECK(std::abs(m(0 * db + 1, 2 * db + 0) - Complex{sys.chi * std::sqrt(2.0), 0.0}) <
              1e-12);
    }
    SUBCASE("diagonal vanishes") {
        CHECK(m.diagonal().cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("hermitian, bounded fill") {
        CHECK(h.hermiticity_defect() < 1e-12);
        CHECK(h.nonzeros() <= 2 * (sys.n_max_w + 1) * (sys.n_max_2w + 1));
    }
    SUBCASE("commutes with the excitation number away from the cutoffs") {
        Eigen::VectorXd diag(h.dim());
        for (int i = 0; i <= sys.n_max_w; ++i)
            for (int j = 0; j <= sys.n_max_2w; ++j) diag(i * db + j) = i + 2.0 * j;
        Eigen::MatrixXcd N = diag.asDiagonal().toDenseMatrix().cast<Complex>();
        Eigen::MatrixXcd comm = m * N - N * m;
        CHECK(comm.cwiseAbs().maxCoeff() < 1e-12);  // exact here: each term shifts n_w by -+2, n_2w by +-1
    }
}

TEST_CASE("initial states") {
    ShgSystem sys;  // 60 / 30
    SUBCASE("zero amplitude gives the two-mode vacuum") {
        GcssParams p = desk_params();
        p.alpha = {0.0, 0.0};
        p.delta_alpha = {0.0, 0.0};
        auto psi = initial_state(ShgInput::coherent, p, sys);
        CHECK(std::abs(psi.amp(0) - Complex{1.0, 0.0}) < 1e-15);
        CHECK(psi.amp.tail(psi.dim() - 1).norm() < 1e-15);
    }
    SUBCASE("coherent input photon numbers") {
        GcssParams p = desk_params(0.0);
        auto psi = initial_state(ShgInput::coherent, p, sys);
        const int db = sys.n_max_2w + 1;
        double nw = 0.0, n2w = 0.0;
        for (int i = 0; i <= sys.n_max_w; ++i)
            for (int j = 0; j <= sys.n_max_2w; ++j) {
                nw += i * std::norm(psi.amp(i * db + j));
                n2w += j * std::norm(psi.amp(i * db + j));
            }
        CHECK(nw == doctest::Approx(16.0).epsilon(1e-9));
        CHECK(n2w == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("conditioned input is normalized with an empty harmonic mode") {
        auto psi = initial_state(ShgInput::gcss, desk_params(), sys);
        CHECK(std::abs(psi.squared_norm() - 1.0) < 1e-9);
        const int db = sys.n_max_2w + 1;
        for (int i = 0; i <= sys.n_max_w; ++i)
            for (int j = 1; j <= sys.n_max_2w; ++j) CHECK(psi.amp(i * db + j) == Complex{0.0, 0.0});
    }
}

TEST_CASE("evolution") {
    SUBCASE("vacuum is stationary") {
        ShgSystem sys;
        sys.n_max_w = 4;
        sys.n_max_2w = 2;
        auto h = build_hamiltonian(sys);
        auto vac = tensor_product(FockVector::basis_state(0, sys.n_max_w),
                                  FockVector::basis_state(0, sys.n_max_2w));
        auto traj = evolve(h, vac, sys, 5, 1e-10);
        for (const auto& st : traj.states)
            CHECK((st.amp - vac.amp).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("two-level pair exchange matches the closed form") {
        ShgSystem sys;
        sys.n_max_w = 4;
        sys.n_max_2w = 2;
        sys.chi = 0.7;
        sys.t_final = 2.0;
        auto h = build_hamiltonian(sys);
        auto psi0 = tensor_product(FockVector::basis_state(2, sys.n_max_w),
                                   FockVector::basis_state(0, sys.n_max_2w));
        auto traj = evolve(h, psi0, sys, 9, 1e-10);
        const int db = sys.n_max_2w + 1;
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            const double expected =
                std::pow(std::cos(std::sqrt(2.0) * sys.chi * traj.times[k]), 2);
            const double p20 = std::norm(traj.states[k].amp(2 * db + 0));
            CHECK(p20 == doctest::Approx(expected).epsilon(1e-8));
        }
    }
    SUBCASE("small system matches dense matrix exponentiation") {
        ShgSystem sys;
        sys.n_max_w = 6;
        sys.n_max_2w = 3;
        sys.chi = 0.9;
        sys.t_final = 1.1;
        auto h = build_hamiltonian(sys);
        auto psi0 = initial_state(ShgInput::coherent,
                                  [] {
                                      GcssParams p;
                                      p.alpha = {1.2, 0.0};
                                      p.delta_alpha = {0.0, 0.0};
                                      return p;
                                  }(),
                                  sys);
        auto traj = evolve(h, psi0, sys, 3, 1e-11);
        Eigen::MatrixXcd u = (Complex{0.0, -1.0} * sys.t_final * h.dense()).exp();
        Eigen::VectorXcd expected = u * psi0.amp;
        CHECK((traj.states.back().amp - expected).cwiseAbs().maxCoeff() < 1e-8);
    }
    SUBCASE("conservation at desk scale") {
        ShgSystem sys;
        sys.t_final = 0.12;  // <n_2w> near 2 for the coherent input
        auto h = build_hamiltonian(sys);
        auto psi0 = initial_state(ShgInput::coherent, desk_params(), sys);
        auto traj = evolve(h, psi0, sys, 7, 1e-9);
        CHECK(traj.n_2w.back() > 1.0);
        const double n0 = traj.conserved.front();
        for (std::size_t k = 0; k < traj.conserved.size(); ++k) {
            CHECK(std::abs(traj.conserved[k] - n0) / n0 < 1e-8);
            CHECK(std::abs(traj.energy[k] - traj.energy.front()) <=
                  1e-8 * std::max(1.0, std::abs(traj.energy.front())));
            CHECK(std::abs(traj.states[k].squared_norm() - 1.0) < 1e-9);
            CHECK(traj.leakage[k] < 1e-6);
        }
    }
}

TEST_CASE("second-harmonic state and its Wigner") {
    ShgSystem sys;
    auto h = build_hamiltonian(sys);

    SUBCASE("zero-duration evolution leaves the harmonic vacuum") {
        ShgSystem tiny = sys;
        tiny.t_final = 1e-9;
        auto traj = evolve(h, initial_state(ShgInput::coherent, desk_params(), tiny), tiny, 2, 1e-10);
        auto rho = second_harmonic_state(traj);
        CHECK(std::abs(rho.matrix()(0, 0) - Complex{1.0, 0.0}) < 1e-9);
        PhaseGrid grid;
        grid.nx = grid.np = 65;
        grid.half_x = grid.half_p = 5.0;
        auto w = wigner_fock(rho, grid);
        auto ex = wigner_extrema(w);
        CHECK(ex.max_value == doctest::Approx(1.0 / constants::pi).epsilon(1e-6));
    }
    SUBCASE("coherent drive keeps the harmonic Wigner non-negative") {
        ShgSystem run = sys;
        run.t_final = 0.16;
        auto traj = evolve(h, initial_state(ShgInput::coherent, desk_params(), run), run, 3, 1e-9);
        auto rho = second_harmonic_state(traj);
        PhaseGrid grid;
        grid.nx = grid.np = 101;
        grid.half_x = grid.half_p = 6.0 + 2.0 * std::sqrt(traj.n_2w.back() + 1.0);
        CHECK(wigner_extrema(wigner_fock(rho, grid)).min_value >= -1e-3);
    }
    SUBCASE("conditioned drive transfers negativity, growing with chi*t") {
        double last_min = 0.0;
        double last_n2w = 0.0;
        for (double t_final : {0.12, 0.16, 0.2}) {
            ShgSystem run = sys;
            run.t_final = t_final;
            auto traj = evolve(h, initial_state(ShgInput::gcss, desk_params(), run), run, 3, 1e-9);
            CHECK(traj.n_2w.back() > last_n2w);  // conversion grows with chi*t
            last_n2w = traj.n_2w.back();
            PhaseGrid grid;
            grid.nx = grid.np = 101;
            grid.half_x = grid.half_p = 6.0 + 2.0 * std::sqrt(traj.n_2w.back() + 1.0);
            const double w_min =
                wigner_extrema(wigner_fock(second_harmonic_state(traj), grid)).min_value;
            CHECK(w_min < 0.0);
            CHECK(w_min < last_min);  // non-classicality strengthens
            last_min = w_min;
        }
    }
}

TEST_CASE("interaction-time tuning") {
    ShgSystem sys;
    auto h = build_hamiltonian(sys);
    auto psi0 = initial_state(ShgInput::coherent, desk_params(), sys);
    const double target = 2.0;
    const double t = tune_interaction_time(h, psi0, sys, target);
    ShgSystem run = sys;
    run.t_final = t;
    auto traj = evolve(h, psi0, run, 2, 1e-9);
    CHECK(traj.n_2w.back() == doctest::Approx(target).epsilon(0.02));
}
