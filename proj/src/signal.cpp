#include "ngd/signal.hpp"

#include "ngd/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <ostream>

namespace ngd {

namespace {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

void put_number(std::ostream& os, double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    os << buf;
}

// Upward crossing of `level` inside (i-1, i], measured back from sample i so
// that a sample sitting exactly on the level maps to its own grid time.
double upward_crossing(const SampledSignal& s, std::size_t i, double level) {
    const double a0 = std::abs(s[i - 1]);
    const double a1 = std::abs(s[i]);
    return s.time(i) - (a1 - level) / (a1 - a0) * s.grid().dt();
}

}  // namespace

TimeGrid::TimeGrid(double t_start, double dt, std::size_t n) : t_start_(t_start), dt_(dt), n_(n) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(Errc::InvalidArgument, "grid spacing must be positive");
    if (!std::isfinite(t_start)) throw Error(Errc::InvalidArgument, "grid start must be finite");
    if (n < 2) throw Error(Errc::InvalidArgument, "grid needs at least two samples");
}

TimeGrid TimeGrid::spanning(double t_start, double t_end, double dt) {
    if (!(t_end > t_start)) throw Error(Errc::InvalidArgument, "grid span must be increasing");
    if (!(dt > 0.0)) throw Error(Errc::InvalidArgument, "grid spacing must be positive");
    const double steps = std::floor((t_end - t_start) / dt * (1.0 + 1e-12));
    return {t_start, dt, static_cast<std::size_t>(steps) + 1};
}

std::ptrdiff_t TimeGrid::floor_index(double t) const noexcept {
    if (t < t_start_) return -1;
    const auto last = static_cast<std::ptrdiff_t>(n_) - 1;
    auto i = static_cast<std::ptrdiff_t>(std::min(std::floor((t - t_start_) / dt_), static_cast<double>(last)));
    while (i < last && time(static_cast<std::size_t>(i + 1)) <= t) ++i;
    while (i >= 0 && time(static_cast<std::size_t>(i)) > t) --i;
    return i;
}

SampledSignal::SampledSignal(TimeGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw Error(Errc::InvalidArgument, "sample count does not match grid");
    if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); }))
        throw Error(Errc::InvalidArgument, "signal contains non-finite samples");
}

SampledSignal SampledSignal::zeros(const TimeGrid& grid) {
    return {grid, std::vector<double>(grid.size(), 0.0)};
}

double SampledSignal::at(double t) const noexcept {
    const auto i = grid_.floor_index(t);
    if (i < 0) return 0.0;
    const auto k = static_cast<std::size_t>(i);
    if (k + 1 >= values_.size()) return t == grid_.t_end() ? values_.back() : 0.0;
    const double frac = (t - grid_.time(k)) / grid_.dt();
    return values_[k] + (values_[k + 1] - values_[k]) * frac;
}

double SampledSignal::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

std::pair<std::size_t, std::size_t> SampledSignal::support() const noexcept {
    auto nz = [](double v) { return v != 0.0; };
    const auto first = std::find_if(values_.begin(), values_.end(), nz);
    if (first == values_.end()) return {1, 0};
    const auto last = std::find_if(values_.rbegin(), values_.rend(), nz);
    return {static_cast<std::size_t>(first - values_.begin()),
            static_cast<std::size_t>(values_.rend() - last) - 1};
}

void InputPulseSpec::validate() const {
    if (!(tf > 0.0)) throw Error(Errc::InvalidArgument, "pulse half-support tf must be positive");
    if (!(v0 > 0.0)) throw Error(Errc::InvalidArgument, "pulse amplitude v0 must be positive");
    if (!(omega_c >= 0.0)) throw Error(Errc::InvalidArgument, "carrier omega_c must be non-negative");
}

double InputPulseSpec::operator()(double t) const noexcept {
    if (std::abs(t) >= tf) return 0.0;
    const double c = std::cos(std::numbers::pi * t / (2.0 * tf));
    return v0 * std::cos(omega_c * t) * c * c;
}

SampledSignal sample_input(const InputPulseSpec& spec, const TimeGrid& grid) {
    spec.validate();
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = spec(grid.time(i));
    return {grid, std::move(v)};
}

double peak_time(const SampledSignal& signal) {
    const auto vals = signal.values();
    std::size_t best = 0;
    double best_abs = -1.0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (std::abs(vals[i]) > best_abs) {
            best_abs = std::abs(vals[i]);
            best = i;
        }
    }
    if (best_abs == 0.0) throw Error(Errc::AllZero, "signal is identically zero");
    if (best == 0 || best + 1 == vals.size())
        throw Error(Errc::PeakAtBoundary, "maximum of |V| lies on the grid boundary");

    const double y0 = std::abs(vals[best - 1]);
    const double y1 = best_abs;
    const double y2 = std::abs(vals[best + 1]);
    const double curvature = y0 - 2.0 * y1 + y2;
    const double offset = curvature == 0.0 ? 0.0 : 0.5 * (y0 - y2) / curvature;
    return signal.time(best) + offset * signal.grid().dt();
}

double first_reach(const SampledSignal& signal, double level) {
    if (!(level > 0.0)) throw Error(Errc::InvalidArgument, "threshold must be positive");
    const auto vals = signal.values();
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (std::abs(vals[i]) >= level) return i == 0 ? signal.time(0) : upward_crossing(signal, i, level);
    }
    throw Error(Errc::NoDetection, "signal never reaches the threshold");
}

CrossingPair threshold_crossings(const SampledSignal& signal, double s0) {
    if (!(s0 > 0.0)) throw Error(Errc::InvalidArgument, "threshold must be positive");
    const auto vals = signal.values();
    const std::size_t n = vals.size();
    if (std::abs(vals[0]) >= s0) throw Error(Errc::StartsAboveThreshold, "signal starts at or above the threshold");

    std::size_t i = 1;
    while (i < n && std::abs(vals[i]) < s0) ++i;
    if (i == n) throw Error(Errc::NoCrossing, "|V| never reaches the threshold");
    const double t1 = upward_crossing(signal, i, s0);

    std::size_t j = i + 1;
    while (j < n && std::abs(vals[j]) >= s0) ++j;
    if (j == n) throw Error(Errc::SingleCrossing, "|V| does not return below the threshold");
    const double a0 = std::abs(vals[j - 1]);
    const double a1 = std::abs(vals[j]);
    const double t2 = signal.time(j - 1) + (a0 - s0) / (a0 - a1) * signal.grid().dt();

    if (!(t1 < t2)) throw Error(Errc::Grazing, "|V| touches the threshold tangentially");
    return {t1, t2};
}

double rms_bandwidth(const SampledSignal& signal) {
    if (signal.max_abs() == 0.0) throw Error(Errc::AllZero, "signal is identically zero");
    const std::size_t n = signal.size() * 4;
    std::vector<double> in(n, 0.0);
    std::copy(signal.values().begin(), signal.values().end(), in.begin());
    std::vector<std::complex<double>> out(n / 2 + 1);

    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                    FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }

    const double d_omega = 2.0 * std::numbers::pi / (static_cast<double>(n) * signal.grid().dt());
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
        const bool interior = k != 0 && 2 * k != n;
        const double p = std::norm(out[k]) * (interior ? 2.0 : 1.0);
        const double w = static_cast<double>(k) * d_omega;
        m0 += p;
        m1 += p * w;
        m2 += p * w * w;
    }
    const double mean = m1 / m0;
    return std::sqrt(std::max(0.0, m2 / m0 - mean * mean));
}

void write_csv(std::ostream& os, const SampledSignal& signal) {
    const std::string name = "value";
    const SampledSignal* cols[] = {&signal};
    write_csv(os, std::span<const std::string>(&name, 1), cols);
}

void write_csv(std::ostream& os, std::span<const std::string> names, std::span<const SampledSignal* const> columns) {
    if (names.size() != columns.size()) throw Error(Errc::InvalidArgument, "column names and signals differ in count");
    for (const auto* c : columns) {
        if (!(c->grid() == columns.front()->grid()))
            throw Error(Errc::InvalidArgument, "CSV columns must share one grid");
    }
    os << 't';
    for (const auto& name : names) os << ',' << name;
    os << '\n';
    if (columns.empty()) return;
    const auto& grid = columns.front()->grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        put_number(os, grid.time(i));
        for (const auto* c : columns) {
            os << ',';
            put_number(os, (*c)[i]);
        }
        os << '\n';
    }
}

}  // namespace ngd
