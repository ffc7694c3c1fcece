#pragma once

#include "ngd/signal.hpp"

#include <complex>
#include <optional>
#include <string_view>

namespace ngd {

/// How a configured resonant-frequency number is read: rad/s, or Hz
/// (multiplied by 2*pi).
enum class FrequencyUnits { Angular, Cyclic };

[[nodiscard]] std::string_view to_string(FrequencyUnits u) noexcept;
[[nodiscard]] std::optional<FrequencyUnits> parse_frequency_units(std::string_view s) noexcept;

/// Angular frequency in rad/s for a configured number in the given units.
[[nodiscard]] double angular_frequency(double configured, FrequencyUnits units) noexcept;

/// Bandpass amplifier with impulse response delta(t) + G'(t), where
///   G'(t) = g0 * gamma * theta(t) * exp(-gamma t) * (cos(wr t) + gamma/wr sin(wr t)).
/// `omega_r` is always stored in rad/s; `omega_r_units` only records how the
/// configured value was interpreted.
struct AmplifierParams {
    double g0 = 0.0;
    double gamma = 15.0;
    double omega_r = 51.0;
    std::optional<double> t0;
    FrequencyUnits omega_r_units = FrequencyUnits::Angular;

    void validate() const;
};

/// Transfer function sample. The project-wide Fourier convention is
/// H(w) = integral G(t) exp(-i w t) dt, so a pure delay T has phase -w T and
/// the group delay is -d arg H / dw.
struct ComplexResponse {
    double omega;
    std::complex<double> h;
};

/// The retarded part of the impulse response. Exactly zero for t < 0;
/// theta(0) = 1, so G'(0) = g0 * gamma.
[[nodiscard]] double green_prime(double t, const AmplifierParams& p) noexcept;

/// Closed form H(w) = 1 + g0 gamma (s + gamma) / (s^2 + wr^2), s = gamma + i w.
[[nodiscard]] ComplexResponse transfer_function(double omega, const AmplifierParams& p) noexcept;

/// -d arg H / dw by central differences, halving the step until two
/// successive estimates agree. Negative values are group advances.
[[nodiscard]] double group_delay_at(double omega, const AmplifierParams& p);

/// Smallest g0 >= 0 with group_delay_at(0) == -t0, by scanning for the first
/// sign change and bisecting. Throws Errc::Unreachable if no g0 up to g_max
/// gives that much advance.
[[nodiscard]] double calibrate_g0(double gamma, double omega_r, double t0, double g_max = 1e4);

/// Largest admissible grid step for the trapezoid convolution:
/// min(1/gamma, 1/wr, pulse_scale) / 20.
[[nodiscard]] double max_admissible_dt(const AmplifierParams& p, double pulse_scale) noexcept;

/// Open-loop output V_in + G' * V_in (causal convolution, trapezoid rule).
/// The pulse scale for the grid check is half the width of the input's
/// nonzero support. Throws Errc::GridTooCoarse on an under-resolved grid.
[[nodiscard]] SampledSignal open_loop_output(const SampledSignal& v_in, const AmplifierParams& p);

/// Response to the gated input theta(cut - t) V_in(t). Samples with
/// t <= cut are computed by exactly the same sums as open_loop_output. Past
/// the cut the convolution integral ends at `cut`; the partial cell uses V_in
/// interpolated linearly at the cut.
[[nodiscard]] SampledSignal gated_output(const SampledSignal& v_in, const AmplifierParams& p, double cut);

}  // namespace ngd
