#include <catch_amalgamated.hpp>

#include "ngd/analysis.hpp"
#include "ngd/error.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace ngd;
using Catch::Approx;

namespace {

constexpr double kTf = 41e-3;

TimeGrid default_grid(double dt = 1e-5) { return TimeGrid::spanning(-3.0 * kTf, 12.0 * kTf, dt); }

AmplifierParams default_amp() {
    AmplifierParams p;
    p.gamma = 15.0;
    p.omega_r = angular_frequency(51.0, FrequencyUnits::Cyclic);
    p.g0 = calibrate_g0(p.gamma, p.omega_r, 2.94e-3);
    return p;
}

SampledSignal delayed(const InputPulseSpec& spec, const TimeGrid& grid, double delay) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = spec(grid.time(i) - delay);
    return {grid, std::move(v)};
}

std::vector<double> halving_thresholds(int count) {
    std::vector<double> s;
    for (int n = 1; n <= count; ++n) s.push_back(std::ldexp(1.0, -n));
    return s;
}

}  // namespace

TEST_CASE("group delay measurement", "[analysis][delay]") {
    const InputPulseSpec spec{1.0, kTf, 0.0};
    const auto grid = default_grid();
    const auto v_in = sample_input(spec, grid);

    const auto same = measure_group_delay(v_in, v_in);
    CHECK(same.t_g == 0.0);

    const auto later = measure_group_delay(v_in, delayed(spec, grid, 5e-3));
    CHECK(later.t_g == Approx(5e-3).margin(1e-7));
    CHECK(later.t_g == later.t_out - later.t_in);

    const auto v_out = open_loop_output(v_in, default_amp());
    const auto fwd = measure_group_delay(v_in, v_out);
    const auto back = measure_group_delay(v_out, v_in);
    CHECK(fwd.t_g == -back.t_g);
    CHECK(fwd.t_g < 0.0);

    SECTION("same sign and order of magnitude as the band-centre delay") {
        const double narrowband = group_delay_at(0.0, default_amp());
        CHECK(narrowband < 0.0);
        CHECK(fwd.t_g / narrowband > 0.5);
        CHECK(fwd.t_g / narrowband < 2.0);
    }
}

TEST_CASE("detection sweep on the pulse", "[analysis][sweep]") {
    const InputPulseSpec spec{1.0, kTf, 0.0};
    const auto s = sample_input(spec, default_grid());
    const auto thresholds = halving_thresholds(10);
    const auto series = detection_sweep(s, thresholds, -kTf);
    REQUIRE(series.size() == 10);
    CHECK(series.missed.empty());
    for (std::size_t n = 0; n < series.size(); ++n) {
        // Analytic inversion of the cos^2 envelope.
        const double expected = oracle::pulse_first_reach(thresholds[n], 1.0, kTf);
        CHECK(series.detection_times[n] == Approx(expected).margin(2e-8));
        CHECK(series.detection_times[n] >= -kTf);
        if (n > 0) CHECK(series.detection_times[n] < series.detection_times[n - 1]);
    }

    SECTION("a threshold just under the maximum fires just before the peak") {
        const double eps = 1e-6;
        const auto one = detection_sweep(s, std::vector<double>{1.0 - eps}, -kTf);
        REQUIRE(one.size() == 1);
        CHECK(one.detection_times[0] < 0.0);
        CHECK(one.detection_times[0] > -1e-3);
    }
    SECTION("thresholds above the maximum are reported as missed") {
        const auto miss = detection_sweep(s, std::vector<double>{2.0, 0.5}, -kTf);
        CHECK(miss.missed == std::vector<double>{2.0});
        CHECK(miss.size() == 1);
    }
    SECTION("thresholds must decrease") {
        CHECK_THROWS_AS(detection_sweep(s, std::vector<double>{0.1, 0.2}, -kTf), Error);
    }
}

TEST_CASE("front extrapolation", "[analysis][front]") {
    const InputPulseSpec spec{1.0, kTf, 0.0};
    const auto grid = default_grid();
    const auto s = sample_input(spec, grid);

    std::vector<double> down_to_1e4;
    for (int n = 1; n <= 8; ++n) down_to_1e4.push_back(std::pow(10.0, -0.5 * n));
    const double est = front_estimate(detection_sweep(s, down_to_1e4, -kTf));
    CHECK(std::abs(est + kTf) < 0.02 * kTf);

    SECTION("translation moves the estimate by the same amount") {
        const double delay = 3.7e-3;
        const double moved = front_estimate(detection_sweep(delayed(spec, grid, delay), down_to_1e4, -kTf + delay));
        CHECK(moved - est == Approx(delay).margin(2e-7));
    }
    SECTION("error shrinks as the smallest threshold shrinks") {
        double prev = 1.0;
        for (double smallest : {1e-2, 1e-3, 1e-4}) {
            std::vector<double> th;
            for (double x = 0.3; x >= smallest * 0.999; x /= std::sqrt(10.0)) th.push_back(x);
            const double err = std::abs(front_estimate(detection_sweep(s, th, -kTf)) + kTf);
            CHECK(err < prev);
            prev = err;
        }
    }
    SECTION("too few detections") {
        const auto two = detection_sweep(s, std::vector<double>{0.5, 0.25}, -kTf);
        try {
            (void)front_estimate(two);
            FAIL("expected InsufficientData");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::InsufficientData);
        }
    }
}

TEST_CASE("Kramers-Kronig residual", "[analysis][kk]") {
    AmplifierParams id;
    CHECK(kk_residual(id, 1e4, 1001) == 0.0);

    const auto p = default_amp();
    auto at = [&](double factor) {
        const double wmax = factor * p.omega_r;
        return kk_residual(p, wmax, static_cast<std::size_t>(wmax) + 1);
    };
    const double r100 = at(100.0);
    CHECK(r100 < 0.05);
    double prev = at(12.5);
    for (double f : {25.0, 50.0, 100.0}) {
        const double r = at(f);
        CHECK(r <= prev * 1.001);
        prev = r;
    }
    CHECK_THROWS_AS(kk_residual(p, 1e4, 64), Error);
}

TEST_CASE("envelope decay of a damped oscillation", "[analysis][decay]") {
    const TimeGrid g(0.0, 1e-5, 50000);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(-12.0 * g.time(i)) * std::cos(300.0 * g.time(i) + 0.3);
    CHECK(envelope_decay_rate(SampledSignal(g, v), 0.0) == Approx(12.0).epsilon(1e-4));
    CHECK_THROWS_AS(envelope_decay_rate(SampledSignal(g, v), 0.495), Error);
}
