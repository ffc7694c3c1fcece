#include <catch_amalgamated.hpp>

#include "ngd/error.hpp"
#include "ngd/feedback.hpp"

#include <cmath>
#include <random>

using namespace ngd;
using Catch::Approx;

namespace {

FeedbackConfig default_config(double s0 = 1.12, double dt = 1e-5) {
    AmplifierParams p;
    p.gamma = 15.0;
    p.omega_r = angular_frequency(51.0, FrequencyUnits::Cyclic);
    p.omega_r_units = FrequencyUnits::Cyclic;
    p.t0 = 2.94e-3;
    p.g0 = calibrate_g0(p.gamma, p.omega_r, *p.t0);
    const InputPulseSpec pulse{1.0, 41e-3, 0.0};
    return {pulse, p, s0, TimeGrid::spanning(-3.0 * pulse.tf, 12.0 * pulse.tf, dt), 1e-6};
}

double max_abs_diff(const SampledSignal& a, const SampledSignal& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("modulation is a step cutoff with theta(0) = 1", "[feedback][modulation]") {
    const double t2 = -1.5e-3;
    CHECK(modulation(t2 - 1e-3, t2) == 1.0);
    CHECK(modulation(t2 + 1e-3, t2) == 0.0);
    CHECK(modulation(t2, t2) == 1.0);
    static_assert(modulation(0.0, 0.0) == 1.0);
}

TEST_CASE("feedback solution for the published circuit", "[feedback][solve]") {
    const auto cfg = default_config();
    const auto sol = solve_feedback(cfg);
    REQUIRE(sol.triggered());
    REQUIRE(sol.crossings);

    const double t1 = sol.crossings->t1;
    const double t2 = sol.crossings->t2;
    CHECK(t1 < t2);
    CHECK(t2 < 0.0);  // the input is switched off before its own peak
    CHECK(sol.residual < 1e-6);

    SECTION("loop signal equals the open-loop output before the trigger") {
        for (std::size_t i = 0; i < cfg.grid.size() && cfg.grid.time(i) < t2; ++i) REQUIRE(sol.v[i] == sol.v_open[i]);
    }
    SECTION("nothing before the front") {
        for (std::size_t i = 0; i < cfg.grid.size() && cfg.grid.time(i) < -cfg.pulse.tf; ++i)
            REQUIRE(std::abs(sol.v[i]) <= 1e-9);
    }
    SECTION("the open-loop peak lies between the crossings") {
        const double t_peak = peak_time(sol.v_open);
        CHECK(t1 < t_peak);
        CHECK(t_peak < t2);
    }
    SECTION("self-consistency check reproduces trigger and residual") {
        CHECK(verify_self_consistency(sol, cfg) < 1e-6);
    }
    SECTION("a corrupted trigger time is caught") {
        auto bad = sol;
        bad.crossings->t2 += 5e-3;
        try {
            (void)verify_self_consistency(bad, cfg);
            FAIL("expected InconsistentTrigger");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::InconsistentTrigger);
        }
    }
    SECTION("fixed-point iteration converges to the same signal") {
        const auto picard = solve_feedback_picard(cfg);
        REQUIRE(picard.crossings);
        CHECK(picard.iterations <= 10);
        CHECK(std::abs(picard.crossings->t2 - t2) <= cfg.grid.dt());
        CHECK(max_abs_diff(picard.v, sol.v) < 1e-5);
    }
}

TEST_CASE("detector threshold above the output maximum", "[feedback][no-trigger]") {
    auto cfg = default_config();
    const auto probe = solve_feedback(cfg);
    cfg.s0 = 10.0 * probe.v_open.max_abs();
    const auto sol = solve_feedback(cfg);
    CHECK(sol.status == TriggerStatus::NoTrigger);
    CHECK_FALSE(sol.crossings);
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) REQUIRE(sol.v[i] == sol.v_open[i]);
    CHECK(sol.residual < 1e-12);
    CHECK(verify_self_consistency(sol, cfg) < 1e-12);

    const auto picard = solve_feedback_picard(cfg);
    CHECK_FALSE(picard.crossings);
    CHECK(max_abs_diff(picard.v, sol.v) < 1e-12);
}

TEST_CASE("trigger times move inward as the threshold rises", "[feedback][property]") {
    // A higher threshold cuts the first peak of |V_out| closer to its top, so
    // t1 never moves earlier and t2 never moves later.
    auto cfg = default_config();
    const double peak = solve_feedback(cfg).v_open.max_abs();
    double prev_t1 = -1.0, prev_t2 = 1.0;
    for (double s0 = 0.2; s0 < peak; s0 += 0.05) {
        cfg.s0 = s0;
        const auto sol = solve_feedback(cfg);
        REQUIRE(sol.crossings);
        CHECK(sol.crossings->t1 >= prev_t1);
        CHECK(sol.crossings->t2 <= prev_t2);
        prev_t1 = sol.crossings->t1;
        prev_t2 = sol.crossings->t2;
    }
}

TEST_CASE("every admissible configuration has a solution", "[feedback][property]") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> g0(0.0, 40.0), s0(0.05, 3.0), tf(20e-3, 60e-3), wc(0.0, 200.0);
    for (int trial = 0; trial < 12; ++trial) {
        auto cfg = default_config();
        cfg.amp.g0 = g0(rng);
        cfg.s0 = s0(rng);
        cfg.pulse.tf = tf(rng);
        cfg.pulse.omega_c = trial % 3 == 0 ? wc(rng) : 0.0;
        cfg.grid = TimeGrid::spanning(-3.0 * cfg.pulse.tf, 8.0 * cfg.pulse.tf, 2e-5);
        INFO("g0 " << cfg.amp.g0 << " s0 " << cfg.s0 << " tf " << cfg.pulse.tf << " wc " << cfg.pulse.omega_c);
        const auto sol = solve_feedback(cfg);
        CHECK(sol.residual < 1e-6);
        CHECK(verify_self_consistency(sol, cfg) < 1e-6);
        for (std::size_t i = 0; i < cfg.grid.size() && cfg.grid.time(i) < -cfg.pulse.tf; ++i)
            REQUIRE(std::abs(sol.v[i]) <= 1e-9);
    }
}

TEST_CASE("peak causality probe", "[feedback][probe]") {
    const auto cfg = default_config();
    const auto sol = solve_feedback(cfg);
    const double t2 = sol.crossings->t2;
    const double t_out = peak_time(sol.v_open);

    SECTION("no cut") {
        const auto probe = peak_causality_probe(cfg, cfg.pulse.tf);
        CHECK(probe.output_peak_survives);
        REQUIRE(probe.t_out);
        CHECK(*probe.t_out == Approx(t_out).margin(1e-9));
    }
    SECTION("cutting at the trigger time, before the input peak") {
        const auto probe = peak_causality_probe(cfg, t2);
        CHECK(probe.output_peak_survives);
        REQUIRE(probe.t_out);
        CHECK(*probe.t_out < 0.0);
    }
    SECTION("cutting at the front leaves nothing") {
        const auto probe = peak_causality_probe(cfg, -cfg.pulse.tf);
        CHECK_FALSE(probe.output_peak_survives);
        CHECK(probe.max_abs <= 1e-15);
    }
    SECTION("survival is monotone in the cut time") {
        bool seen_true = false;
        double critical = 0.0;
        for (double cut = -cfg.pulse.tf; cut <= 0.0; cut += 0.5e-3) {
            const bool survives = peak_causality_probe(cfg, cut).output_peak_survives;
            if (seen_true) REQUIRE(survives);
            if (survives && !seen_true) critical = cut;
            seen_true |= survives;
        }
        CHECK(seen_true);
        CHECK(critical < t2);  // the output peak depends on earlier input
    }
    SECTION("cut outside the grid") {
        CHECK_THROWS_AS(peak_causality_probe(cfg, 10.0), Error);
    }
}
