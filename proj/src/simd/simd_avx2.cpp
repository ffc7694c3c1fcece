#include "ngd/simd.hpp"

#include <immintrin.h>

namespace ngd::simd::avx2 {

namespace {

inline double hsum(__m256d v) noexcept {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sw = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sw));
}

}  // namespace

// Four independent accumulators hide the FMA latency. Lanes are assigned by
// offset from the first element, so the result does not depend on alignment.
double dot(const double* a, const double* b, std::size_t n) noexcept {
    __m256d s0 = _mm256_setzero_pd();
    __m256d s1 = _mm256_setzero_pd();
    __m256d s2 = _mm256_setzero_pd();
    __m256d s3 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 16 <= n; k += 16) {
        s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), s0);
        s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), s1);
        s2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 8), _mm256_loadu_pd(b + k + 8), s2);
        s3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 12), _mm256_loadu_pd(b + k + 12), s3);
    }
    for (; k + 4 <= n; k += 4)
        s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), s0);
    double acc = hsum(_mm256_add_pd(_mm256_add_pd(s0, s1), _mm256_add_pd(s2, s3)));
    for (; k < n; ++k) acc += a[k] * b[k];
    return acc;
}

double sum_ratio(const double* num, const double* den, double shift, std::size_t n) noexcept {
    const __m256d c = _mm256_set1_pd(shift);
    __m256d s0 = _mm256_setzero_pd();
    __m256d s1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8) {
        __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(den + k), c);
        __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(den + k + 4), c);
        s0 = _mm256_add_pd(s0, _mm256_div_pd(_mm256_loadu_pd(num + k), d0));
        s1 = _mm256_add_pd(s1, _mm256_div_pd(_mm256_loadu_pd(num + k + 4), d1));
    }
    for (; k + 4 <= n; k += 4) {
        __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(den + k), c);
        s0 = _mm256_add_pd(s0, _mm256_div_pd(_mm256_loadu_pd(num + k), d0));
    }
    double acc = hsum(_mm256_add_pd(s0, s1));
    for (; k < n; ++k) acc += num[k] / (den[k] - shift);
    return acc;
}

}  // namespace ngd::simd::avx2
