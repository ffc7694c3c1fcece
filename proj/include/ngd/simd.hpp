#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops. Every kernel has a scalar reference version and
// optional vector versions; the fastest one supported by the running CPU is
// picked once, on first use. Set NGD_SIMD=scalar in the environment to force
// the reference path.
namespace ngd::simd {

enum class Backend { Scalar, Avx2 };

[[nodiscard]] std::string_view name(Backend b) noexcept;

/// Whether `b` was compiled in and the CPU can run it.
[[nodiscard]] bool available(Backend b) noexcept;

/// The backend used by the dispatching overloads below.
[[nodiscard]] Backend active() noexcept;

/// sum_k a[k] * b[k]. Summation order depends only on the length, never on
/// the address, so equal inputs at different offsets give equal results.
[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);
[[nodiscard]] double dot(Backend b, std::span<const double> x, std::span<const double> y);

/// sum_k num[k] / (den[k] - shift). The discrete principal-value sum of the
/// Hilbert transform.
[[nodiscard]] double sum_ratio(std::span<const double> num, std::span<const double> den, double shift);
[[nodiscard]] double sum_ratio(Backend b, std::span<const double> num, std::span<const double> den,
                               double shift);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double sum_ratio(const double* num, const double* den, double shift, std::size_t n) noexcept;
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double sum_ratio(const double* num, const double* den, double shift, std::size_t n) noexcept;
}  // namespace avx2

}  // namespace ngd::simd
