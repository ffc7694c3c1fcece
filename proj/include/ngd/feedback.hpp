#pragma once

#include "ngd/amplifier.hpp"
#include "ngd/signal.hpp"

#include <optional>
#include <string_view>

namespace ngd {

/// Threshold-triggered feedback loop: the detector watches the loop signal
/// V(t) and switches the amplifier input off at the second time |V| = s0.
struct FeedbackConfig {
    InputPulseSpec pulse;
    AmplifierParams amp;
    double s0 = 1.12;
    TimeGrid grid;
    double residual_tolerance = 1e-6;

    void validate() const;
};

enum class TriggerStatus {
    Triggered,
    NoTrigger,  ///< s0 above max |V_out|: the detector never fires
    Grazing,    ///< |V_out| touches s0 tangentially; treated as no trigger
};

[[nodiscard]] std::string_view to_string(TriggerStatus s) noexcept;

struct FeedbackSolution {
    SampledSignal v_in;
    SampledSignal v_open;  ///< open-loop output, which fixes t2
    SampledSignal v;       ///< self-consistent loop signal
    TriggerStatus status = TriggerStatus::NoTrigger;
    std::optional<CrossingPair> crossings;
    double residual = 0.0;  ///< max-norm defect of the loop equation

    [[nodiscard]] bool triggered() const noexcept { return status == TriggerStatus::Triggered; }
};

/// M(t) = theta(t2 - t), with theta(0) = 1.
[[nodiscard]] constexpr double modulation(double t, double t2) noexcept { return t <= t2 ? 1.0 : 0.0; }

/// Solves the loop equation directly: below t2 the loop signal is the
/// open-loop output, so t2 comes from V_out and the remainder is the
/// response to the input truncated at t2.
[[nodiscard]] FeedbackSolution solve_feedback(const FeedbackConfig& cfg);

/// Right-hand side of the loop equation,
///   M(t) V_in(t) + integral_{-inf}^{t} G'(t - tau) M(tau) V_in(tau) dtau,
/// with M = theta(t2 - t) (no gating when t2 is empty). Written as a plain
/// scalar loop over the gated input, independent of the convolution used by
/// solve_feedback.
[[nodiscard]] SampledSignal loop_rhs(const SampledSignal& v_in, const AmplifierParams& p, std::optional<double> t2);

/// Max-norm defect of the stored solution against loop_rhs, after checking
/// that the stored V reproduces the stored trigger times to within one grid
/// cell (Errc::InconsistentTrigger otherwise).
[[nodiscard]] double verify_self_consistency(const FeedbackSolution& sol, const FeedbackConfig& cfg);

struct PicardResult {
    SampledSignal v;
    std::optional<CrossingPair> crossings;
    int iterations = 0;
    double last_change = 0.0;
};

/// Diagnostic fixed-point iteration of the loop equation: start from V = 0,
/// derive M from the current iterate's crossings, re-evaluate the RHS.
[[nodiscard]] PicardResult solve_feedback_picard(const FeedbackConfig& cfg, int max_iterations = 50,
                                                 double tolerance = 1e-12);

struct PeakProbe {
    bool output_peak_survives = false;
    std::optional<double> t_out;
    double max_abs = 0.0;
    SampledSignal output;
};

/// Open-loop response to the input switched off at `cut_time`; reports
/// whether an output peak above s0 still appears.
[[nodiscard]] PeakProbe peak_causality_probe(const FeedbackConfig& cfg, double cut_time);

}  // namespace ngd
