#pragma once

#include "ngd/amplifier.hpp"
#include "ngd/signal.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ngd {

/// Peak-to-peak delay between two traces; t_g < 0 means the output peak
/// leaves before the input peak arrives.
struct DelayReport {
    double t_in;
    double t_out;
    double t_g;
};

[[nodiscard]] DelayReport measure_group_delay(const SampledSignal& v_in, const SampledSignal& v_out);

/// Detections of one trace by a bank of detectors with decreasing
/// thresholds. The circuit has no spatial extent, so instead of a velocity
/// d / t_n each detector reports its trigger time, which approaches the
/// front as the threshold goes to zero.
struct DetectionSeries {
    std::vector<double> thresholds;       ///< detected thresholds, strictly decreasing
    std::vector<double> detection_times;  ///< matching first-reach times, non-increasing
    std::vector<double> missed;           ///< thresholds the signal never reached
    double front_time = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return thresholds.size(); }
};

[[nodiscard]] DetectionSeries detection_sweep(const SampledSignal& signal, std::span<const double> thresholds,
                                              double front_time);

/// Extrapolation model for the front: t_n is fitted as a + b * S_n^exponent
/// over the `points` smallest thresholds and the intercept a is returned.
/// exponent = 1/2 matches a front that rises quadratically, as the
/// cos^2 pulse does.
struct FrontFitModel {
    double exponent = 0.5;
    std::size_t points = 4;
};

[[nodiscard]] double front_estimate(const DetectionSeries& series, const FrontFitModel& model = {});

/// Kramers-Kronig check of the transfer function: Re(H - 1) rebuilt from
/// Im(H - 1) by a discrete principal-value Hilbert transform on n_omega
/// points over [-omega_max, omega_max] (odd/even staggered sum), compared
/// with the closed form on |w| <= omega_max / 2. Returns the max-norm defect
/// relative to max |Re(H - 1)| there.
[[nodiscard]] double kk_residual(const AmplifierParams& p, double omega_max, std::size_t n_omega);

/// Decay rate of the envelope of a ringing trace after t_from, from a
/// log-linear fit of successive |V| maxima.
[[nodiscard]] double envelope_decay_rate(const SampledSignal& signal, double t_from);

}  // namespace ngd
