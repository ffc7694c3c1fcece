#include "ngd/feedback.hpp"

#include "ngd/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ngd {

std::string_view to_string(TriggerStatus s) noexcept {
    switch (s) {
        case TriggerStatus::Triggered: return "triggered";
        case TriggerStatus::NoTrigger: return "no_trigger";
        case TriggerStatus::Grazing: return "grazing";
    }
    return "unknown";
}

void FeedbackConfig::validate() const {
    pulse.validate();
    amp.validate();
    if (!(s0 > 0.0)) throw Error(Errc::InvalidArgument, "detector threshold s0 must be positive");
    if (!(residual_tolerance > 0.0)) throw Error(Errc::InvalidArgument, "residual tolerance must be positive");
}

namespace {

struct Detection {
    TriggerStatus status;
    std::optional<CrossingPair> crossings;
};

Detection detect(const SampledSignal& v, double s0) {
    try {
        return {TriggerStatus::Triggered, threshold_crossings(v, s0)};
    } catch (const Error& e) {
        switch (e.code()) {
            case Errc::NoCrossing:
            case Errc::SingleCrossing: return {TriggerStatus::NoTrigger, std::nullopt};
            case Errc::Grazing: return {TriggerStatus::Grazing, std::nullopt};
            default: throw;
        }
    }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Loop signal just before the cut, V(cut-): the ungated input plus the
// convolution integral up to the cut. Needed to locate a downward crossing
// correctly when the iterate jumps at the cut.
double left_limit(const SampledSignal& v_in, const AmplifierParams& p, double cut) {
    const auto& grid = v_in.grid();
    const auto k = grid.floor_index(cut);
    if (k < 0) return 0.0;
    const auto kk = static_cast<std::size_t>(k);
    const double dt = grid.dt();
    const auto v = v_in.values();

    double acc = 0.0;
    for (std::size_t j = 0; kk > 0 && j <= kk; ++j) {
        const double w = (j == 0 || j == kk) ? 0.5 : 1.0;
        acc += w * green_prime(cut - grid.time(j), p) * v[j];
    }
    const double width = cut - grid.time(kk);
    const double v_cut = kk + 1 < v.size() ? v[kk] + (v[kk + 1] - v[kk]) * (width / dt) : v[kk];
    const double tail = 0.5 * width * (green_prime(width, p) * v[kk] + green_prime(0.0, p) * v_cut);
    return v_cut + dt * acc + tail;
}

// Crossings of a signal that may jump at `cut`. Samples after the cut belong
// to the post-cut branch; the pre-cut branch ends at (cut, before).
std::optional<CrossingPair> crossings_with_jump(const SampledSignal& v, double s0, double cut, double before) {
    std::vector<double> t;
    std::vector<double> a;
    t.reserve(v.size() + 2);
    a.reserve(v.size() + 2);
    bool inserted = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double ti = v.time(i);
        if (!inserted && ti > cut) {
            t.push_back(cut);
            a.push_back(std::abs(before));
            inserted = true;
        }
        t.push_back(ti);
        a.push_back(std::abs(v[i]));
    }

    std::size_t i = 1;
    while (i < a.size() && a[i] < s0) ++i;
    if (i >= a.size() || a[0] >= s0) return std::nullopt;
    const double t1 = t[i] - (a[i] - s0) / (a[i] - a[i - 1]) * (t[i] - t[i - 1]);
    std::size_t j = i + 1;
    while (j < a.size() && a[j] >= s0) ++j;
    if (j >= a.size()) return std::nullopt;
    // A jump through the threshold happens at the cut itself.
    if (t[j - 1] == cut && inserted) return CrossingPair{t1, cut};
    const double t2 = t[j - 1] + (a[j - 1] - s0) / (a[j - 1] - a[j]) * (t[j] - t[j - 1]);
    if (!(t1 < t2)) return std::nullopt;
    return CrossingPair{t1, t2};
}

}  // namespace

SampledSignal loop_rhs(const SampledSignal& v_in, const AmplifierParams& p, std::optional<double> t2) {
    p.validate();
    const auto& grid = v_in.grid();
    const std::size_t n = grid.size();
    const double dt = grid.dt();

    std::vector<double> gated(n);
    for (std::size_t j = 0; j < n; ++j) gated[j] = (t2 ? modulation(grid.time(j), *t2) : 1.0) * v_in[j];
    std::vector<double> kernel(n);
    for (std::size_t m = 0; m < n; ++m) kernel[m] = green_prime(static_cast<double>(m) * dt, p);

    std::size_t lo = 0;
    while (lo < n && gated[lo] == 0.0) ++lo;
    std::size_t hi = n;
    while (hi > lo && gated[hi - 1] == 0.0) --hi;

    const std::ptrdiff_t k_cut = t2 ? grid.floor_index(*t2) : static_cast<std::ptrdiff_t>(n) - 1;

    // Trapezoid integral over [t_0, t_upper] of kernel(i - j) * gated(j).
    auto trapezoid = [&](std::size_t i, std::size_t upper) {
        if (upper == 0) return 0.0;
        double acc = 0.0;
        for (std::size_t j = lo; j < hi && j <= upper; ++j) acc += kernel[i - j] * gated[j];
        acc -= 0.5 * kernel[i] * gated[0] + 0.5 * kernel[i - upper] * gated[upper];
        return dt * acc;
    };

    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto si = static_cast<std::ptrdiff_t>(i);
        if (si <= k_cut) {
            out[i] = gated[i] + trapezoid(i, i);
        } else if (k_cut >= 0) {
            const auto k = static_cast<std::size_t>(k_cut);
            const double width = *t2 - grid.time(k);
            const double v_cut = k + 1 < n ? v_in[k] + (v_in[k + 1] - v_in[k]) * (width / dt) : v_in[k];
            out[i] = trapezoid(i, k) +
                     0.5 * width * (kernel[i - k] * v_in[k] + green_prime(grid.time(i) - *t2, p) * v_cut);
        }
    }
    return {grid, std::move(out)};
}

FeedbackSolution solve_feedback(const FeedbackConfig& cfg) {
    cfg.validate();
    auto v_in = sample_input(cfg.pulse, cfg.grid);
    auto v_open = open_loop_output(v_in, cfg.amp);
    const auto det = detect(v_open, cfg.s0);

    FeedbackSolution sol{v_in, v_open, v_open, det.status, det.crossings, 0.0};
    std::optional<double> cut;
    if (det.crossings) {
        cut = det.crossings->t2;
        const auto tail = gated_output(v_in, cfg.amp, *cut);
        std::vector<double> v(v_open.values().begin(), v_open.values().end());
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (cfg.grid.time(i) > *cut) v[i] = tail[i];
        }
        sol.v = SampledSignal(cfg.grid, std::move(v));
    }

    const auto rhs = loop_rhs(v_in, cfg.amp, cut);
    sol.residual = max_abs_diff(sol.v.values(), rhs.values());
    if (sol.residual > cfg.residual_tolerance * cfg.pulse.v0)
        throw Error(Errc::ResidualTooLarge, "loop equation residual " + std::to_string(sol.residual) +
                                                " exceeds tolerance");
    return sol;
}

double verify_self_consistency(const FeedbackSolution& sol, const FeedbackConfig& cfg) {
    cfg.validate();
    if (!(sol.v.grid() == cfg.grid)) throw Error(Errc::InvalidArgument, "solution grid does not match the config");

    const auto again = detect(sol.v, cfg.s0);
    const double cell = cfg.grid.dt();
    if (sol.crossings.has_value() != again.crossings.has_value())
        throw Error(Errc::InconsistentTrigger, "stored and recomputed trigger disagree on whether the detector fires");
    if (sol.crossings) {
        const double d1 = std::abs(again.crossings->t1 - sol.crossings->t1);
        const double d2 = std::abs(again.crossings->t2 - sol.crossings->t2);
        if (d1 > cell || d2 > cell)
            throw Error(Errc::InconsistentTrigger, "recomputed trigger times differ from the stored ones by more "
                                                   "than one grid cell");
    }

    const auto v_in = sample_input(cfg.pulse, cfg.grid);
    const auto rhs =
        loop_rhs(v_in, cfg.amp, sol.crossings ? std::optional<double>(sol.crossings->t2) : std::nullopt);
    return max_abs_diff(sol.v.values(), rhs.values());
}

PicardResult solve_feedback_picard(const FeedbackConfig& cfg, int max_iterations, double tolerance) {
    cfg.validate();
    const auto v_in = sample_input(cfg.pulse, cfg.grid);

    PicardResult res{SampledSignal::zeros(cfg.grid), std::nullopt, 0, 0.0};
    std::optional<double> cut;
    for (int it = 1; it <= max_iterations; ++it) {
        std::optional<CrossingPair> c;
        if (cut) {
            c = crossings_with_jump(res.v, cfg.s0, *cut, left_limit(v_in, cfg.amp, *cut));
        } else {
            c = detect(res.v, cfg.s0).crossings;
        }
        const std::optional<double> next_cut = c ? std::optional<double>(c->t2) : std::nullopt;
        auto next = loop_rhs(v_in, cfg.amp, next_cut);

        res.last_change = max_abs_diff(next.values(), res.v.values());
        res.iterations = it;
        const bool same_trigger = next_cut == cut;
        res.v = std::move(next);
        res.crossings = c;
        cut = next_cut;
        if (same_trigger && res.last_change <= tolerance) break;
    }
    return res;
}

PeakProbe peak_causality_probe(const FeedbackConfig& cfg, double cut_time) {
    cfg.validate();
    if (cut_time < cfg.grid.t_start() || cut_time > cfg.grid.t_end())
        throw Error(Errc::InvalidArgument, "cut time lies outside the grid span");

    const auto v_in = sample_input(cfg.pulse, cfg.grid);
    auto out = gated_output(v_in, cfg.amp, cut_time);
    PeakProbe probe{false, std::nullopt, out.max_abs(), out};
    probe.output_peak_survives = probe.max_abs > cfg.s0;
    if (probe.max_abs > 0.0) {
        try {
            probe.t_out = peak_time(out);
        } catch (const Error& e) {
            if (e.code() != Errc::PeakAtBoundary) throw;
        }
    }
    return probe;
}

}  // namespace ngd
