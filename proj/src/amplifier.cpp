#include "ngd/amplifier.hpp"

#include "ngd/error.hpp"
#include "ngd/simd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace ngd {

std::string_view to_string(FrequencyUnits u) noexcept {
    return u == FrequencyUnits::Angular ? "angular" : "cyclic";
}

std::optional<FrequencyUnits> parse_frequency_units(std::string_view s) noexcept {
    if (s == "angular" || s == "rad/s") return FrequencyUnits::Angular;
    if (s == "cyclic" || s == "hz" || s == "Hz") return FrequencyUnits::Cyclic;
    return std::nullopt;
}

double angular_frequency(double configured, FrequencyUnits units) noexcept {
    return units == FrequencyUnits::Cyclic ? 2.0 * std::numbers::pi * configured : configured;
}

void AmplifierParams::validate() const {
    if (!(gamma > 0.0)) throw Error(Errc::InvalidArgument, "gamma must be positive");
    if (!(omega_r > 0.0)) throw Error(Errc::InvalidArgument, "omega_r must be positive");
    if (!(g0 >= 0.0)) throw Error(Errc::InvalidArgument, "g0 must be non-negative");
    if (t0 && !(*t0 >= 0.0)) throw Error(Errc::InvalidArgument, "t0 must be non-negative");
}

double green_prime(double t, const AmplifierParams& p) noexcept {
    if (t < 0.0) return 0.0;
    const double wt = p.omega_r * t;
    return p.g0 * p.gamma * std::exp(-p.gamma * t) * (std::cos(wt) + p.gamma / p.omega_r * std::sin(wt));
}

ComplexResponse transfer_function(double omega, const AmplifierParams& p) noexcept {
    const std::complex<double> s(p.gamma, omega);
    const auto h = 1.0 + p.g0 * p.gamma * (s + p.gamma) / (s * s + p.omega_r * p.omega_r);
    return {omega, h};
}

double group_delay_at(double omega, const AmplifierParams& p) {
    p.validate();
    if (std::abs(transfer_function(omega, p).h) < 1e-12)
        throw Error(Errc::ZeroResponse, "transfer function vanishes at the requested frequency");

    auto estimate = [&](double h) {
        const auto up = transfer_function(omega + h, p).h;
        const auto down = transfer_function(omega - h, p).h;
        return -std::arg(up / down) / (2.0 * h);
    };

    double h = 0.05 * std::min(p.gamma, p.omega_r);
    double prev = estimate(h);
    for (int it = 0; it < 30; ++it) {
        h *= 0.5;
        const double next = estimate(h);
        if (std::abs(next - prev) <= 1e-9 * std::abs(next) + 1e-18) return next;
        prev = next;
    }
    return prev;
}

double calibrate_g0(double gamma, double omega_r, double t0, double g_max) {
    if (!(t0 >= 0.0)) throw Error(Errc::InvalidArgument, "target advance t0 must be non-negative");
    AmplifierParams p;
    p.gamma = gamma;
    p.omega_r = omega_r;
    p.validate();
    if (t0 == 0.0) return 0.0;

    // Residual is +t0 at g0 = 0 and decreases as the advance grows.
    auto residual = [&](double g) {
        p.g0 = g;
        return group_delay_at(0.0, p) + t0;
    };

    double lo = 0.0;
    double hi = 1e-6;
    while (residual(hi) > 0.0) {
        lo = hi;
        hi *= 1.25;
        if (hi > g_max) {
            if (lo >= g_max || residual(g_max) > 0.0)
                throw Error(Errc::Unreachable, "no gain up to g_max produces the requested group advance");
            hi = g_max;
            break;
        }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double max_admissible_dt(const AmplifierParams& p, double pulse_scale) noexcept {
    return std::min({1.0 / p.gamma, 1.0 / p.omega_r, pulse_scale}) / 20.0;
}

namespace {

void check_grid(const SampledSignal& v_in, const AmplifierParams& p) {
    const auto [lo, hi] = v_in.support();
    const double scale = lo > hi ? std::numeric_limits<double>::infinity()
                                 : 0.5 * static_cast<double>(hi - lo) * v_in.grid().dt();
    const double limit = max_admissible_dt(p, scale);
    if (v_in.grid().dt() > limit)
        throw Error(Errc::GridTooCoarse, "dt = " + std::to_string(v_in.grid().dt()) +
                                             " s exceeds the admissible " + std::to_string(limit) + " s");
}

// Causal trapezoid convolution. The kernel is stored reversed so that every
// output sample is one contiguous dot product against the input support.
SampledSignal convolve(const SampledSignal& v_in, const AmplifierParams& p, std::optional<double> cut) {
    p.validate();
    check_grid(v_in, p);

    const auto& grid = v_in.grid();
    const std::size_t n = grid.size();
    const double dt = grid.dt();
    const auto v = v_in.values();

    std::vector<double> kernel(n);
    for (std::size_t m = 0; m < n; ++m) kernel[m] = green_prime(static_cast<double>(m) * dt, p);
    std::vector<double> reversed(kernel.rbegin(), kernel.rend());

    const auto [lo, hi] = v_in.support();
    const std::ptrdiff_t last_kept = cut ? grid.floor_index(*cut) : static_cast<std::ptrdiff_t>(n) - 1;

    // sum_{j=0}^{upper} kernel[i - j] v[j], restricted to the input support.
    auto partial_sum = [&](std::size_t i, std::size_t upper) {
        const std::size_t top = std::min(upper, hi);
        if (lo > top) return 0.0;
        const std::size_t len = top - lo + 1;
        return simd::dot(v.subspan(lo, len), std::span<const double>(reversed).subspan(n - 1 - i + lo, len));
    };

    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (static_cast<std::ptrdiff_t>(i) <= last_kept) {
            const double s = partial_sum(i, i);
            out[i] = v[i] + dt * (s - 0.5 * kernel[i] * v[0] - 0.5 * kernel[0] * v[i]);
            continue;
        }
        if (last_kept < 0) continue;  // cut precedes the grid: no input at all

        const auto k = static_cast<std::size_t>(last_kept);
        const double s = partial_sum(i, k);
        const double full = dt * (s - 0.5 * kernel[i] * v[0] - 0.5 * kernel[i - k] * v[k]);
        const double width = *cut - grid.time(k);
        const double v_cut = k + 1 < n ? v[k] + (v[k + 1] - v[k]) * (width / dt) : v[k];
        const double tail = 0.5 * width * (kernel[i - k] * v[k] + green_prime(grid.time(i) - *cut, p) * v_cut);
        out[i] = full + tail;
    }
    return {grid, std::move(out)};
}

}  // namespace

SampledSignal open_loop_output(const SampledSignal& v_in, const AmplifierParams& p) {
    return convolve(v_in, p, std::nullopt);
}

SampledSignal gated_output(const SampledSignal& v_in, const AmplifierParams& p, double cut) {
    if (!std::isfinite(cut)) throw Error(Errc::InvalidArgument, "cut time must be finite");
    return convolve(v_in, p, cut);
}

}  // namespace ngd
