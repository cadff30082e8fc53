#include "doctest.h"

#include <cmath>

#include "gcss/qspec.hpp"

using namespace gcss;

namespace {

QspecParams clean_params() {
    QspecParams p;
    p.n_shots = 20000;
    p.ir_fluct_sigma = 0.0;
    p.noise_ir = 0.0;
    p.noise_hh = 0.0;
    p.stray_hh = 0.0;
    return p;
}

}  // namespace

TEST_CASE("synthesis determinism and bookkeeping") {
    SUBCASE("identical seeds give identical shot lists") {
        QspecParams p;
        p.n_shots = 5000;
        auto a = synthesize_shots(p, 99);
        auto b = synthesize_shots(p, 99);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].s_ir == b[i].s_ir);
            CHECK(a[i].s_hh == b[i].s_hh);
            CHECK(a[i].s_monitor == b[i].s_monitor);
            CHECK(a[i].is_hhg_event == b[i].is_hhg_event);
        }
        auto c = synthesize_shots(p, 100);
        bool differs = false;
        for (std::size_t i = 0; i < a.size() && !differs; ++i) differs = a[i].s_ir != c[i].s_ir;
        CHECK(differs);
    }
    SUBCASE("hhg_prob=0 leaves noise-only harmonic signals") {
        QspecParams p;
        p.n_shots = 2000;
        p.hhg_prob = 0.0;
        auto shots = synthesize_shots(p, 7);
        for (const auto& s : shots) {
            CHECK_FALSE(s.is_hhg_event);
            CHECK(std::abs(s.s_hh) < 10.0 * (p.noise_hh + p.stray_hh));
        }
    }
    SUBCASE("deterministic events lose exactly q*A*N_q photons") {
        QspecParams p = clean_params();
        p.hhg_prob = 1.0;
        p.q_orders = {11};
        p.n_q = 1.0;
        p.absorption_a = 1.0;
        p.a_hh = 1.0;
        p.b_ir = 1.0;
        auto shots = synthesize_shots(p, 3);
        for (const auto& s : shots) {
            CHECK(s.is_hhg_event);
            CHECK(s.s_ir == doctest::Approx(p.ir_mean - 11.0).epsilon(1e-12));
            CHECK(s.s_hh == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("energy bookkeeping holds exactly for every noise-free event") {
        QspecParams p = clean_params();
        p.hhg_prob = 0.3;
        p.q_orders = {11, 13};
        p.n_q = 5.0;
        auto shots = synthesize_shots(p, 12);
        for (const auto& s : shots) {
            const double loss = (p.ir_mean - s.s_ir * p.b_ir);
            if (!s.is_hhg_event) {
                CHECK(std::abs(loss) < 1e-9);
                continue;
            }
            // possible exact losses: 11 A Nq, 13 A Nq, 24 A Nq
            const double unit = p.absorption_a * p.n_q;
            const bool valid = std::abs(loss - 11.0 * unit) < 1e-9 ||
                               std::abs(loss - 13.0 * unit) < 1e-9 ||
                               std::abs(loss - 24.0 * unit) < 1e-9;
            CHECK(valid);
        }
    }
    SUBCASE("harmonic and IR signals anticorrelate over event shots") {
        QspecParams p;
        p.n_shots = 40000;
        p.hhg_prob = 0.5;
        p.n_q_poisson = true;  // per-shot photon-count variation drives the correlation
        p.n_q = 30.0;
        p.q_orders = {11, 13};
        p.ir_fluct_sigma = 0.001;
        auto shots = synthesize_shots(p, 21);
        std::vector<ShotRecord> events;
        for (const auto& s : shots)
            if (s.is_hhg_event) events.push_back(s);
        REQUIRE(events.size() >= 10000);
        CHECK(pearson_ir_hh(events) < -0.2);
    }
}

TEST_CASE("stability filter") {
    SUBCASE("identical shots are all retained") {
        std::vector<ShotRecord> shots(50);
        for (auto& s : shots) s.s_monitor = 100.0;
        CHECK(stability_filter(shots, 0.005).size() == 50);
    }
    SUBCASE("a 10% outlier is removed at the 0.5% threshold") {
        std::vector<ShotRecord> shots(100);
        for (auto& s : shots) s.s_monitor = 100.0;
        shots[17].s_monitor = 110.0;
        auto kept = stability_filter(shots, 0.005);
        CHECK(kept.size() == 99);
    }
    SUBCASE("gaussian fluctuations at 1% keep the erf fraction") {
        QspecParams p;
        p.n_shots = 200000;
        p.ir_fluct_sigma = 0.01;
        p.hhg_prob = 0.0;
        auto shots = synthesize_shots(p, 5);
        const double kept =
            static_cast<double>(stability_filter(shots, 0.005).size()) / shots.size();
        CHECK(kept == doctest::Approx(0.3829).epsilon(0.055));  // erf(0.5/sqrt(2))
    }
    SUBCASE("empty result raises a degenerate-batch error") {
        std::vector<ShotRecord> shots(10);
        for (std::size_t i = 0; i < shots.size(); ++i)
            shots[i].s_monitor = i % 2 == 0 ? 0.0 : 200.0;
        CHECK_THROWS_AS(stability_filter(shots, 1e-6), DegenerateBatchError);
    }
}

TEST_CASE("variance balancing") {
    SUBCASE("already balanced data keeps scale 1") {
        std::vector<ShotRecord> shots;
        for (int i = 0; i < 100; ++i) {
            ShotRecord s;
            s.s_ir = (i % 2 == 0) ? 1.0 : -1.0;
            s.s_hh = (i % 2 == 0) ? -1.0 : 1.0;
            shots.push_back(s);
        }
        CHECK(balance_variances(shots).scale == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("fourfold variance is scaled by one half") {
        std::vector<ShotRecord> shots;
        for (int i = 0; i < 100; ++i) {
            ShotRecord s;
            s.s_ir = (i % 2 == 0) ? 1.0 : -1.0;
            s.s_hh = (i % 2 == 0) ? 2.0 : -2.0;
            shots.push_back(s);
        }
        auto b = balance_variances(shots);
        CHECK(b.scale == doctest::Approx(0.5).epsilon(1e-12));
        // variances match afterwards
        double v_ir = 0.0, v_hh = 0.0;
        for (const auto& s : b.shots) {
            v_ir += s.s_ir * s.s_ir;
            v_hh += s.s_hh * s.s_hh;
        }
        CHECK(v_hh == doctest::Approx(v_ir).epsilon(1e-9));
    }
    SUBCASE("correlation is invariant under balancing") {
        QspecParams p;
        p.n_shots = 30000;
        p.hhg_prob = 0.3;
        auto shots = synthesize_shots(p, 8);
        const double before = pearson_ir_hh(shots);
        const double after = pearson_ir_hh(balance_variances(shots).shots);
        CHECK(after == doctest::Approx(before).epsilon(1e-9));
    }
    SUBCASE("zero variance is rejected") {
        std::vector<ShotRecord> shots(10);
        CHECK_THROWS_AS(balance_variances(shots), DegenerateBatchError);
    }
}

TEST_CASE("anticorrelation selection") {
    QspecParams p;  // tuned defaults
    p.n_shots = 100000;
    auto shots = synthesize_shots(p, 31);
    auto stable = stability_filter(shots, p.stability_threshold);
    stable = monitor_correct(stable, p.b_ir);
    auto balanced = balance_variances(std::move(stable));

    SUBCASE("an infinite band keeps everything") {
        auto sel = select_anticorrelated(balanced.shots, 1e9);
        CHECK(sel.retained_fraction == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("retained fraction is nondecreasing in the band width") {
        double prev = 0.0;
        for (double w : {0.05, 0.1, 0.2, 0.5, 1.0, 5.0}) {
            const double f = select_anticorrelated(balanced.shots, w).retained_fraction;
            CHECK(f >= prev);
            prev = f;
        }
    }
    SUBCASE("selection enriches true events and their harmonic signal") {
        auto sel = select_anticorrelated(balanced.shots, p.band_halfwidth);
        REQUIRE(!sel.selected.empty());
        CHECK(event_fraction(sel.selected) > event_fraction(balanced.shots));
        CHECK(mean_s_hh(sel.selected) > mean_s_hh(balanced.shots));
    }
}

TEST_CASE("photon loss histogram") {
    SUBCASE("single order piles up at q*A*N_q") {
        QspecParams p = clean_params();
        p.hhg_prob = 0.5;
        p.q_orders = {11};
        p.n_q = 30.0;
        p.bin_width = 20.0;
        auto shots = synthesize_shots(p, 17);
        auto hist = photon_loss_histogram(shots, p.ir_mean / p.b_ir, p.bin_width, p.b_ir);
        auto peaks = histogram_peaks(hist);
        REQUIRE(peaks.size() == 2);  // no-loss pile plus the event peak
        CHECK(std::abs(peaks.front()) <= p.bin_width);
        CHECK(std::abs(peaks.back() - 11.0 * p.absorption_a * p.n_q) <= p.bin_width);
    }
    SUBCASE("adjacent odd orders are spaced by 2*A*N_q") {
        QspecParams p = clean_params();
        p.n_shots = 50000;
        p.hhg_prob = 0.25;
        p.q_orders = {11, 13};
        p.n_q = 30.0;
        p.bin_width = 20.0;
        auto shots = synthesize_shots(p, 19);
        // drop the unconditioned pile: keep event shots only (clean separation)
        std::vector<ShotRecord> events;
        for (const auto& s : shots)
            if (s.is_hhg_event) events.push_back(s);
        auto hist = photon_loss_histogram(events, p.ir_mean / p.b_ir, p.bin_width, p.b_ir);
        auto peaks = histogram_peaks(hist);
        REQUIRE(peaks.size() >= 2);
        const double spacing = peaks[1] - peaks[0];
        CHECK(std::abs(spacing - 2.0 * p.absorption_a * p.n_q) <= p.bin_width);
    }
    SUBCASE("no-event batches peak at zero loss") {
        QspecParams p;
        p.n_shots = 2000;
        p.hhg_prob = 0.0;
        auto shots = synthesize_shots(p, 23);
        auto hist = photon_loss_histogram(shots, mean_s_ir(shots), 5.0, p.b_ir);
        auto peaks = histogram_peaks(hist);
        REQUIRE(!peaks.empty());
        CHECK(std::abs(peaks.front()) <= 5.0);
    }
    SUBCASE("too few shots are rejected") {
        std::vector<ShotRecord> few(50);
        CHECK_THROWS_AS(photon_loss_histogram(few, 0.0, 1.0, 1.0), DegenerateBatchError);
    }
}

TEST_CASE("yield mapping") {
    CHECK(delta_alpha_from_yield(4.0, 0.12) == doctest::Approx(0.24).epsilon(1e-12));
    CHECK_THROWS_AS(delta_alpha_from_yield(-1.0, 1.0), ConfigError);
}
