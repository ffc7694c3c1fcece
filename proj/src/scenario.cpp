#include "ngd/scenario.hpp"

#include "ngd/analysis.hpp"
#include "ngd/error.hpp"
#include "ngd/feedback.hpp"
#include "ngd/simd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#ifndef NGD_VERSION
#define NGD_VERSION "0.0.0"
#endif

namespace ngd {

using nlohmann::json;

namespace {

json parameters_json(const RunConfig& cfg, const AmplifierParams& amp) {
    json a = {
        {"g0", amp.g0},
        {"g0_source", cfg.g0 ? "configured" : "calibrated"},
        {"gamma", amp.gamma},
        {"omega_r", amp.omega_r},
        {"omega_r_configured", cfg.omega_r},
        {"omega_r_units", to_string(amp.omega_r_units)},
    };
    a["t0"] = amp.t0 ? json(*amp.t0) : json(nullptr);
    return {
        {"amplifier", a},
        {"pulse", {{"v0", cfg.pulse.v0}, {"tf", cfg.pulse.tf}, {"omega_c", cfg.pulse.omega_c}}},
        {"s0", cfg.s0},
    };
}

json grid_json(const TimeGrid& g) {
    return {{"t_start", g.t_start()}, {"t_end", g.t_end()}, {"dt", g.dt()}, {"n", g.size()}};
}

json header(ScenarioKind kind, const RunConfig& cfg, const AmplifierParams& amp) {
    return {
        {"tool", "ngdlab"},
        {"version", tool_version()},
        {"scenario", to_string(kind)},
        {"simd_backend", simd::name(simd::active())},
        {"parameters", parameters_json(cfg, amp)},
    };
}

// Largest |V| strictly before the pulse front; zero for a causal response.
double pre_front_leak(const SampledSignal& s, double front) {
    double m = 0.0;
    for (std::size_t i = 0; i < s.size() && s.time(i) < front; ++i) m = std::max(m, std::abs(s[i]));
    return m;
}

std::string csv(std::initializer_list<std::string> names, std::initializer_list<const SampledSignal*> cols) {
    std::ostringstream os;
    const std::vector<std::string> n(names);
    const std::vector<const SampledSignal*> c(cols);
    write_csv(os, n, c);
    return os.str();
}

std::string series_csv(const DetectionSeries& s) {
    std::ostringstream os;
    os << "s_n,t_n\n";
    char buf[64];
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", s.thresholds[i], s.detection_times[i]);
        os << buf;
    }
    return os.str();
}

json series_json(const DetectionSeries& s) {
    json rows = json::array();
    for (std::size_t i = 0; i < s.size(); ++i) rows.push_back({{"s_n", s.thresholds[i]}, {"t_n", s.detection_times[i]}});
    return {{"detections", rows}, {"missed", s.missed}, {"front_time", s.front_time}};
}

}  // namespace

std::string_view to_string(ScenarioKind k) noexcept {
    switch (k) {
        case ScenarioKind::OpenLoop: return "open_loop";
        case ScenarioKind::Feedback: return "feedback";
        case ScenarioKind::ThresholdSweep: return "threshold_sweep";
        case ScenarioKind::Calibrate: return "calibrate";
        case ScenarioKind::KkCheck: return "kk_check";
    }
    return "unknown";
}

std::optional<ScenarioKind> parse_scenario(std::string_view s) noexcept {
    if (s == "open-loop") return ScenarioKind::OpenLoop;
    if (s == "feedback") return ScenarioKind::Feedback;
    if (s == "sweep") return ScenarioKind::ThresholdSweep;
    if (s == "calibrate") return ScenarioKind::Calibrate;
    if (s == "kk-check") return ScenarioKind::KkCheck;
    return std::nullopt;
}

std::string_view tool_version() noexcept { return NGD_VERSION; }

RunSummary run_open_loop(const RunConfig& cfg) {
    const auto amp = cfg.amplifier();
    const auto grid = cfg.grid();
    const auto v_in = sample_input(cfg.pulse, grid);
    const auto v_out = open_loop_output(v_in, amp);
    const auto delay = measure_group_delay(v_in, v_out);

    RunSummary run{header(ScenarioKind::OpenLoop, cfg, amp), {}};
    run.summary["grid"] = grid_json(grid);
    run.summary["results"] = {
        {"t_in", delay.t_in},
        {"t_out", delay.t_out},
        {"t_g", delay.t_g},
        {"group_delay_at_carrier", group_delay_at(cfg.pulse.omega_c, amp)},
        {"max_v_out", v_out.max_abs()},
        {"pre_front_max_abs", pre_front_leak(v_out, -cfg.pulse.tf)},
    };
    run.files.push_back({"open_loop.csv", csv({"v_in", "v_out"}, {&v_in, &v_out})});
    return run;
}

RunSummary run_feedback(const RunConfig& cfg) {
    const auto amp = cfg.amplifier();
    FeedbackConfig fc{cfg.pulse, amp, cfg.s0, cfg.grid(), cfg.residual_tolerance};
    const auto sol = solve_feedback(fc);
    const double verified = verify_self_consistency(sol, fc);
    const auto delay = measure_group_delay(sol.v_in, sol.v_open);

    RunSummary run{header(ScenarioKind::Feedback, cfg, amp), {}};
    run.summary["grid"] = grid_json(fc.grid);
    json r = {
        {"status", to_string(sol.status)},
        {"input_peak_time", delay.t_in},
        {"open_loop_peak_time", delay.t_out},
        {"t_g", delay.t_g},
        {"residual", sol.residual},
        {"verify_residual", verified},
        {"pre_front_max_abs", pre_front_leak(sol.v, -cfg.pulse.tf)},
    };
    r["t1"] = sol.crossings ? json(sol.crossings->t1) : json(nullptr);
    r["t2"] = sol.crossings ? json(sol.crossings->t2) : json(nullptr);
    if (sol.status == TriggerStatus::Grazing)
        r["note"] = "|V_out| touches s0 tangentially; treated as no trigger";
    run.summary["results"] = r;
    run.files.push_back({"feedback.csv", csv({"v_in", "v"}, {&sol.v_in, &sol.v})});
    return run;
}

RunSummary run_threshold_sweep(const RunConfig& cfg) {
    const auto amp = cfg.amplifier();
    const auto grid = cfg.grid();
    const auto v_in = sample_input(cfg.pulse, grid);
    const auto v_out = open_loop_output(v_in, amp);
    const auto thresholds = cfg.resolved_thresholds();
    const double front = -cfg.pulse.tf;

    const bool on_output = cfg.sweep_target == "output";
    const auto series = detection_sweep(on_output ? v_out : v_in, thresholds, front);
    const auto reference = detection_sweep(v_in, thresholds, front);

    RunSummary run{header(ScenarioKind::ThresholdSweep, cfg, amp), {}};
    run.summary["grid"] = grid_json(grid);
    json r = series_json(series);
    r["target"] = cfg.sweep_target;
    r["input_reference"] = series_json(reference);
    try {
        const double est = front_estimate(series, FrontFitModel{0.5, cfg.fit_points});
        r["front_estimate"] = est;
        r["front_relative_error"] = std::abs(est - front) / std::abs(front);
    } catch (const Error& e) {
        if (e.code() != Errc::InsufficientData) throw;
        r["front_estimate"] = nullptr;
        r["front_error"] = std::string(to_string(e.code()));
    }
    run.summary["results"] = r;
    run.files.push_back({"sweep.csv", series_csv(series)});
    return run;
}

RunSummary run_calibrate(const RunConfig& cfg) {
    const auto amp = cfg.amplifier();
    RunSummary run{header(ScenarioKind::Calibrate, cfg, amp), {}};
    run.summary["results"] = {
        {"g0", amp.g0},
        {"group_delay_at_0", group_delay_at(0.0, amp)},
        {"h_at_0", std::abs(transfer_function(0.0, amp).h)},
    };
    return run;
}

RunSummary run_kk_check(const RunConfig& cfg) {
    const auto amp = cfg.amplifier();
    auto residual_at = [&](double factor) {
        const double omega_max = factor * amp.omega_r;
        const auto n = static_cast<std::size_t>(std::ceil(2.0 * omega_max / cfg.kk_spacing)) + 1;
        return std::pair{n, kk_residual(amp, omega_max, std::max<std::size_t>(n, 128))};
    };
    const auto [n, residual] = residual_at(cfg.kk_omega_max_factor);
    const double residual_half = residual_at(0.5 * cfg.kk_omega_max_factor).second;

    RunSummary run{header(ScenarioKind::KkCheck, cfg, amp), {}};
    run.summary["results"] = {
        {"omega_max", cfg.kk_omega_max_factor * amp.omega_r},
        {"n_omega", std::max<std::size_t>(n, 128)},
        {"residual", residual},
        {"residual_half_omega_max", residual_half},
    };
    return run;
}

RunSummary run_scenario(ScenarioKind kind, const RunConfig& cfg) {
    switch (kind) {
        case ScenarioKind::OpenLoop: return run_open_loop(cfg);
        case ScenarioKind::Feedback: return run_feedback(cfg);
        case ScenarioKind::ThresholdSweep: return run_threshold_sweep(cfg);
        case ScenarioKind::Calibrate: return run_calibrate(cfg);
        case ScenarioKind::KkCheck: return run_kk_check(cfg);
    }
    throw Error(Errc::InvalidArgument, "unknown scenario");
}

}  // namespace ngd
