#include "ngd/analysis.hpp"

#include "ngd/error.hpp"
#include "ngd/simd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ngd {

namespace {

// Least-squares line y = a + b x; returns {a, b}.
std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw Error(Errc::InsufficientData, "fit abscissae are all equal");
    const double b = sxy / sxx;
    return {my - b * mx, b};
}

}  // namespace

DelayReport measure_group_delay(const SampledSignal& v_in, const SampledSignal& v_out) {
    const double t_in = peak_time(v_in);
    const double t_out = peak_time(v_out);
    return {t_in, t_out, t_out - t_in};
}

DetectionSeries detection_sweep(const SampledSignal& signal, std::span<const double> thresholds, double front_time) {
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (!(thresholds[i] > 0.0)) throw Error(Errc::InvalidArgument, "thresholds must be positive");
        if (i > 0 && !(thresholds[i] < thresholds[i - 1]))
            throw Error(Errc::InvalidArgument, "thresholds must be strictly decreasing");
    }

    DetectionSeries series;
    series.front_time = front_time;
    for (double s : thresholds) {
        try {
            const double t = first_reach(signal, s);
            if (t < front_time)
                throw Error(Errc::InvalidArgument, "signal is nonzero before the stated front time");
            series.thresholds.push_back(s);
            series.detection_times.push_back(t);
        } catch (const Error& e) {
            if (e.code() != Errc::NoDetection) throw;
            series.missed.push_back(s);
        }
    }
    return series;
}

double front_estimate(const DetectionSeries& series, const FrontFitModel& model) {
    if (series.size() < 3) throw Error(Errc::InsufficientData, "front extrapolation needs at least three detections");
    const std::size_t m = std::min(std::max<std::size_t>(model.points, 3), series.size());
    const std::size_t first = series.size() - m;

    std::vector<double> x(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = std::pow(series.thresholds[first + i], model.exponent);
        y[i] = series.detection_times[first + i];
    }
    return fit_line(x, y).first;
}

double kk_residual(const AmplifierParams& p, double omega_max, std::size_t n_omega) {
    p.validate();
    if (!(omega_max > 0.0)) throw Error(Errc::InvalidArgument, "omega_max must be positive");
    if (n_omega < 128) throw Error(Errc::InvalidArgument, "n_omega must be at least 128");
    if (p.g0 == 0.0) return 0.0;

    const double h = 2.0 * omega_max / static_cast<double>(n_omega - 1);
    auto omega_at = [&](std::size_t i) { return -omega_max + static_cast<double>(i) * h; };

    // Split by index parity: the staggered rule pairs each point with the
    // samples of opposite parity, which keeps the singular term out.
    std::vector<double> w_even, im_even, w_odd, im_odd;
    for (std::size_t i = 0; i < n_omega; ++i) {
        const double w = omega_at(i);
        const double im = transfer_function(w, p).h.imag();
        (i % 2 == 0 ? w_even : w_odd).push_back(w);
        (i % 2 == 0 ? im_even : im_odd).push_back(im);
    }

    double max_defect = 0.0;
    double max_ref = 0.0;
    for (std::size_t i = 0; i < n_omega; ++i) {
        const double w = omega_at(i);
        if (std::abs(w) > 0.5 * omega_max) continue;
        const double sum = i % 2 == 0 ? simd::sum_ratio(im_odd, w_odd, w) : simd::sum_ratio(im_even, w_even, w);
        const double re_kk = -2.0 / std::numbers::pi * h * sum;
        const double re_exact = transfer_function(w, p).h.real() - 1.0;
        max_defect = std::max(max_defect, std::abs(re_kk - re_exact));
        max_ref = std::max(max_ref, std::abs(re_exact));
    }
    return max_ref == 0.0 ? 0.0 : max_defect / max_ref;
}

double envelope_decay_rate(const SampledSignal& signal, double t_from) {
    const auto v = signal.values();
    std::vector<double> times, logs;
    double first_peak = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (signal.time(i - 1) <= t_from) continue;
        const double y0 = std::abs(v[i - 1]), y1 = std::abs(v[i]), y2 = std::abs(v[i + 1]);
        if (!(y1 > y0 && y1 >= y2)) continue;
        const double curv = y0 - 2.0 * y1 + y2;
        const double off = curv == 0.0 ? 0.0 : 0.5 * (y0 - y2) / curv;
        const double peak = y1 - 0.25 * (y0 - y2) * off;
        if (first_peak == 0.0) first_peak = peak;
        if (peak < 1e-6 * first_peak) break;
        times.push_back(signal.time(i) + off * signal.grid().dt());
        logs.push_back(std::log(peak));
    }
    if (times.size() < 3) throw Error(Errc::InsufficientData, "fewer than three envelope maxima after t_from");
    return -fit_line(times, logs).second;
}

}  // namespace ngd
