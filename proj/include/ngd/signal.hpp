#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ngd {

/// Uniform time discretization. Sample times are computed from the index,
/// never by accumulating dt.
class TimeGrid {
public:
    TimeGrid(double t_start, double dt, std::size_t n);

    /// Grid with spacing dt covering [t_start, t_end]; the last sample is the
    /// largest t_start + i*dt not exceeding t_end (up to rounding).
    [[nodiscard]] static TimeGrid spanning(double t_start, double t_end, double dt);

    [[nodiscard]] double t_start() const noexcept { return t_start_; }
    [[nodiscard]] double dt() const noexcept { return dt_; }
    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] double t_end() const noexcept { return time(n_ - 1); }
    [[nodiscard]] double time(std::size_t i) const noexcept { return t_start_ + static_cast<double>(i) * dt_; }

    /// Largest index i with time(i) <= t, or -1 when t precedes the grid.
    /// Saturates at size() - 1.
    [[nodiscard]] std::ptrdiff_t floor_index(double t) const noexcept;

    [[nodiscard]] TimeGrid shifted(double delta) const { return {t_start_ + delta, dt_, n_}; }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double t_start_;
    double dt_;
    std::size_t n_;
};

/// Real-valued samples on a TimeGrid, in units of the pulse amplitude V0.
class SampledSignal {
public:
    SampledSignal(TimeGrid grid, std::vector<double> values);

    [[nodiscard]] static SampledSignal zeros(const TimeGrid& grid);

    [[nodiscard]] const TimeGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
    [[nodiscard]] double time(std::size_t i) const noexcept { return grid_.time(i); }

    /// Linear interpolation; zero outside the grid.
    [[nodiscard]] double at(double t) const noexcept;

    [[nodiscard]] double max_abs() const noexcept;

    /// Index range [first, last] of nonzero samples; first > last when the
    /// signal is identically zero.
    [[nodiscard]] std::pair<std::size_t, std::size_t> support() const noexcept;

private:
    TimeGrid grid_;
    std::vector<double> values_;
};

/// Smooth compact-support pulse
///   V(t) = v0 * cos(omega_c t) * cos^2(pi t / (2 tf))   for |t| < tf, else 0.
/// It is C^1 everywhere and resembles a Gaussian centred on t = 0.
struct InputPulseSpec {
    double v0 = 1.0;
    double tf = 41e-3;
    double omega_c = 0.0;

    void validate() const;
    [[nodiscard]] double operator()(double t) const noexcept;
};

struct CrossingPair {
    double t1;
    double t2;
};

[[nodiscard]] SampledSignal sample_input(const InputPulseSpec& spec, const TimeGrid& grid);

/// Time of the maximum of |V|, refined by a parabola through the discrete
/// argmax and its neighbours.
[[nodiscard]] double peak_time(const SampledSignal& signal);

/// First two times where |V| equals s0, each linearly interpolated inside
/// its bracketing cell. t1 is the upward crossing, t2 the following
/// downward one. A tangent touch (t1 == t2) is rejected as Errc::Grazing.
[[nodiscard]] CrossingPair threshold_crossings(const SampledSignal& signal, double s0);

/// First time |V| reaches `level`, interpolated; Errc::NoDetection if never.
[[nodiscard]] double first_reach(const SampledSignal& signal, double level);

/// RMS angular bandwidth sqrt(<w^2> - <w>^2) of the one-sided power
/// spectrum. The signal is zero padded to four times its length before the
/// transform to refine the frequency spacing.
[[nodiscard]] double rms_bandwidth(const SampledSignal& signal);

/// CSV with header `t,value`.
void write_csv(std::ostream& os, const SampledSignal& signal);

/// CSV of several signals sharing one grid; `names` excludes the leading
/// `t` column.
void write_csv(std::ostream& os, std::span<const std::string> names,
               std::span<const SampledSignal* const> columns);

}  // namespace ngd
