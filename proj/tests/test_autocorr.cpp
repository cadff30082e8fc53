#include "doctest.h"

#include <cmath>
#include <random>

#include "gcss/autocorr.hpp"

using namespace gcss;

namespace {

Trace synthetic_trace(int n, double dt, const std::function<double(double)>& f) {
    Trace tr;
    tr.uniform = true;
    for (int i = 0; i < n; ++i) {
        const double t = -0.5 * (n - 1) * dt + i * dt;
        tr.delays.push_back(t);
        tr.values.push_back(f(t));
        tr.sigma.push_back(0.0);
    }
    return tr;
}

double tone_amplitude(const Trace& tr, double freq) {
    // single-bin projection on the interior 80% to dodge edge effects
    double re = 0.0, im = 0.0;
    std::size_t n = 0;
    const double lo = tr.delays.front() * 0.8, hi = tr.delays.back() * 0.8;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        if (tr.delays[i] < lo || tr.delays[i] > hi) continue;
        re += tr.values[i] * std::cos(2.0 * constants::pi * freq * tr.delays[i]);
        im += tr.values[i] * std::sin(2.0 * constants::pi * freq * tr.delays[i]);
        ++n;
    }
    return 2.0 * std::hypot(re, im) / static_cast<double>(n);
}

AcGrid small_grid() {
    AcGrid g;
    g.tau_min = -50.0;
    g.tau_max = 50.0;
    g.tau_step = 0.1;
    g.t_halfwidth = 55.0;
    g.t_step = 0.1;
    return g;
}

}  // namespace

TEST_CASE("intensity_squared") {
    PulseParams flat;
    flat.envelope = Envelope::flat;
    SUBCASE("coherent alpha=2 gives 20") {
        CoherentSuperposition s({{Complex{1.0, 0.0},
                                  CompositeAmplitude({{Complex{2.0, 0.0}, 0.0, 0.0}}, flat)}},
                                 true);
        CHECK(intensity_squared(s, 0.0) == doctest::Approx(20.0).epsilon(1e-10));
    }
    SUBCASE("vacuum gives 0") {
        CoherentSuperposition s({{Complex{1.0, 0.0},
                                  CompositeAmplitude({{Complex{0.0, 0.0}, 0.0, 0.0}}, flat)}},
                                 true);
        CHECK(intensity_squared(s, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("Fock |2> gives 4") {
        IntensityOps ops(10);
        CHECK(intensity_squared(FockVector::basis_state(2, 10), ops) ==
              doctest::Approx(4.0).epsilon(1e-12));
    }
    SUBCASE("analytic and Fock paths agree for a conditioned state") {
        GcssParams p;
        p.alpha = {4.0, 0.0};
        p.delta_alpha = {-0.4, 0.0};
        p.tau_fs = 5.0;
        auto analytic = gcss_intensity_fn(p, IntensityModel::full, ConditioningWeight::conditional);
        auto fock = gcss_intensity_fock_fn(p, IntensityModel::full,
                                           ConditioningWeight::conditional, 80);
        for (double t : {-8.0, -1.3, 0.0, 2.7, 9.9}) {
            const double a = analytic(t, p.tau_fs);
            const double f = fock(t, p.tau_fs);
            CHECK(std::abs(a - f) <= 1e-8 * std::max(1.0, std::abs(f)));
        }
    }
}

TEST_CASE("coherent trace anchors") {
    GcssParams p;  // defaults: alpha 12, delta -0.24
    auto grid = small_grid();
    grid.tau_min = -80.0;
    grid.tau_max = 80.0;
    auto fn = coherent_intensity_fn(p, IntensityModel::normal_ordered);
    Trace tr = ac_trace(fn, p.pulse, grid, Normalization::coherent_peak);

    std::size_t i0 = 0, i75 = 0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        if (std::abs(tr.delays[i]) < std::abs(tr.delays[i0])) i0 = i;
        if (std::abs(tr.delays[i] - 75.0) < std::abs(tr.delays[i75] - 75.0)) i75 = i;
    }
    CHECK(tr.values[i0] == doctest::Approx(1.0).epsilon(1e-12));
    // peak-to-background 8:1, the non-overlapping-arm envelope identity
    CHECK(tr.values[i0] / tr.values[i75] == doctest::Approx(8.0).epsilon(0.01));
    SUBCASE("trace is symmetric in tau") {
        for (std::size_t i = 0; i < tr.size(); ++i) {
            const std::size_t j = tr.size() - 1 - i;
            CHECK(std::abs(tr.values[i] - tr.values[j]) <=
                  1e-6 * std::max(std::abs(tr.values[i]), 1e-12));
        }
    }
}

TEST_CASE("ac_trace validation and determinism") {
    GcssParams p;
    auto fn = coherent_intensity_fn(p, IntensityModel::normal_ordered);
    SUBCASE("undersampled cycle is rejected") {
        AcGrid g = small_grid();
        g.t_step = 0.5;
        CHECK_THROWS_AS(ac_trace(fn, p.pulse, g), ConfigError);
    }
    SUBCASE("narrow t window is rejected") {
        AcGrid g = small_grid();
        g.t_halfwidth = 20.0;
        CHECK_THROWS_AS(ac_trace(fn, p.pulse, g), ConfigError);
    }
    SUBCASE("thread count does not change the result") {
        AcGrid g = small_grid();
        g.tau_min = -20.0;
        g.tau_max = 20.0;
        Trace t1 = ac_trace(fn, p.pulse, g, Normalization::raw, nullptr, 1);
        Trace t4 = ac_trace(fn, p.pulse, g, Normalization::raw, nullptr, 4);
        for (std::size_t i = 0; i < t1.size(); ++i) CHECK(t1.values[i] == t4.values[i]);
    }
}

TEST_CASE("band_block_filter") {
    SUBCASE("constant trace passes untouched") {
        auto tr = synthetic_trace(512, 0.1, [](double) { return 3.25; });
        auto out = band_block_filter(tr, 0.2);
        for (double v : out.values) CHECK(v == doctest::Approx(3.25).epsilon(1e-12));
    }
    SUBCASE("interferogram frequency is blocked by over 40 dB") {
        auto tr = synthetic_trace(1601, 0.1, [](double t) {
            return std::cos(2.0 * constants::pi * 0.37 * t);
        });
        auto out = band_block_filter(tr, 0.2);
        CHECK(tone_amplitude(out, 0.37) < 0.01);
    }
    SUBCASE("passband tone survives within 2%") {
        auto tr = synthetic_trace(1601, 0.1, [](double t) {
            return std::cos(2.0 * constants::pi * 0.05 * t);
        });
        auto out = band_block_filter(tr, 0.2);
        CHECK(tone_amplitude(out, 0.05) == doctest::Approx(1.0).epsilon(0.02));
    }
    SUBCASE("non-monotonic delays are rejected") {
        auto tr = synthetic_trace(128, 0.1, [](double) { return 1.0; });
        std::swap(tr.delays[10], tr.delays[11]);
        CHECK_THROWS_AS(band_block_filter(tr, 0.2), ConfigError);
    }
    SUBCASE("short traces are rejected") {
        auto tr = synthetic_trace(32, 0.1, [](double) { return 1.0; });
        CHECK_THROWS_AS(band_block_filter(tr, 0.2), ConfigError);
    }
    SUBCASE("nonuniform input is resampled onto a uniform grid") {
        Trace tr;
        std::mt19937 rng(2);
        std::uniform_real_distribution<double> jitter(-0.02, 0.02);
        for (int i = 0; i < 256; ++i) {
            tr.delays.push_back(i * 0.1 + (i > 0 && i < 255 ? jitter(rng) : 0.0));
            tr.values.push_back(std::sin(0.05 * i));
            tr.sigma.push_back(0.0);
        }
        auto out = band_block_filter(tr, 0.2);
        CHECK(out.uniform);
        const double dt = out.delays[1] - out.delays[0];
        for (std::size_t i = 1; i < out.size(); ++i)
            CHECK(out.delays[i] - out.delays[i - 1] == doctest::Approx(dt).epsilon(1e-9));
    }
}

TEST_CASE("cycle_average") {
    SUBCASE("constant trace is unchanged with zero sigma") {
        auto tr = synthetic_trace(301, 0.1, [](double) { return 2.0; });
        auto out = cycle_average(tr, 25);
        for (std::size_t i = 0; i < out.size(); ++i) {
            CHECK(out.values[i] == doctest::Approx(2.0).epsilon(1e-12));
            CHECK(out.sigma[i] == doctest::Approx(0.0).epsilon(1e-12));
        }
    }
    SUBCASE("full-cycle window removes a pure oscillation") {
        const int w = 25;
        auto tr = synthetic_trace(1001, 0.1, [&](double t) {
            return std::cos(2.0 * constants::pi * t / (w * 0.1));
        });
        auto out = cycle_average(tr, w);
        for (std::size_t i = 100; i + 100 < out.size(); ++i) CHECK(std::abs(out.values[i]) < 0.01);
    }
    SUBCASE("sigma follows the window std over sqrt(window)") {
        std::mt19937 rng(9);
        std::normal_distribution<double> noise(0.0, 0.7);
        auto tr = synthetic_trace(20001, 0.1, [&](double) { return 5.0 + noise(rng); });
        auto out = cycle_average(tr, 25);
        double mean_sigma = 0.0;
        std::size_t n = 0;
        for (std::size_t i = 50; i + 50 < out.size(); ++i) {
            mean_sigma += out.sigma[i];
            ++n;
        }
        mean_sigma /= static_cast<double>(n);
        CHECK(mean_sigma == doctest::Approx(0.7 / 5.0).epsilon(0.05));
    }
    SUBCASE("window longer than the trace is rejected") {
        auto tr = synthetic_trace(10, 0.1, [](double) { return 1.0; });
        CHECK_THROWS_AS(cycle_average(tr, 25), ConfigError);
    }
}

TEST_CASE("trace_metrics") {
    SUBCASE("constant trace has zero modulation depth") {
        auto tr = synthetic_trace(801, 0.1, [](double) { return 1.0; });
        auto m = trace_metrics(tr);
        CHECK(m.m_depth == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(m.s_zero == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(m.background == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("triangle with S_max=3, S_min=1 gives M=1") {
        // min 1 at the center window, max 3 inside [10,30]
        auto tr = synthetic_trace(801, 0.1, [](double t) {
            const double a = std::abs(t);
            if (a <= 10.0) return 1.0;
            if (a <= 20.0) return 1.0 + 0.2 * (a - 10.0);
            if (a <= 30.0) return 3.0 - 0.2 * (a - 20.0);
            return 1.0;
        });
        CHECK(trace_metrics(tr).m_depth == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("empty windows raise a config error") {
        auto tr = synthetic_trace(64, 0.01, [](double) { return 1.0; });  // spans 0.64 fs
        CHECK_THROWS_AS(trace_metrics(tr), ConfigError);
    }
}

TEST_CASE("conditioned trace suppresses the center and beats at the tails") {
    GcssParams p;
    p.delta_alpha = {-0.24, 0.0};
    AcGrid grid;  // defaults: +-80 fs, 0.1 fs
    const auto coh = coherent_intensity_fn(p, IntensityModel::normal_ordered);
    const auto gcs = gcss_intensity_fn(p, IntensityModel::normal_ordered,
                                       ConditioningWeight::postselected);
    Trace tc = ac_trace(coh, p.pulse, grid, Normalization::raw, nullptr, 2);
    Trace tg = ac_trace(gcs, p.pulse, grid, Normalization::raw, nullptr, 2);
    auto ic = cycle_average(band_block_filter(tc, 0.2), 25);
    auto ig = cycle_average(band_block_filter(tg, 0.2), 25);

    std::size_t i0 = 0;
    for (std::size_t i = 0; i < ic.size(); ++i)
        if (std::abs(ic.delays[i]) < std::abs(ic.delays[i0])) i0 = i;
    const double anchor = ic.values[i0];

    CHECK(ig.values[i0] / anchor < 1.0);  // conditioning suppresses the center
    // sigma-scaled deviation present near |tau| ~ 45 fs
    double dev_tail = 0.0;
    for (std::size_t i = 0; i < ic.size(); ++i) {
        const double at = std::abs(ic.delays[i]);
        if (at < 40.0 || at > 50.0) continue;
        const double s = std::hypot(ic.sigma[i], ig.sigma[i]);
        if (s > 0.0) dev_tail = std::max(dev_tail, std::abs(ig.values[i] - ic.values[i]) / s);
    }
    CHECK(dev_tail > 3.0);
}
