#include "ngd/simd.hpp"

namespace ngd::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += a[k] * b[k];
    return acc;
}

double sum_ratio(const double* num, const double* den, double shift, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += num[k] / (den[k] - shift);
    return acc;
}

}  // namespace ngd::simd::scalar
