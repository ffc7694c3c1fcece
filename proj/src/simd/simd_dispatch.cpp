#include "ngd/error.hpp"
#include "ngd/simd.hpp"

#include <cstdlib>
#include <string>

namespace ngd::simd {

namespace {

using DotFn = double (*)(const double*, const double*, std::size_t) noexcept;
using RatioFn = double (*)(const double*, const double*, double, std::size_t) noexcept;

struct Table {
    Backend backend;
    DotFn dot;
    RatioFn sum_ratio;
};

Table table_for(Backend b) noexcept {
#if defined(NGD_WITH_AVX2)
    if (b == Backend::Avx2) return {Backend::Avx2, &avx2::dot, &avx2::sum_ratio};
#endif
    (void)b;
    return {Backend::Scalar, &scalar::dot, &scalar::sum_ratio};
}

Table select() noexcept {
    if (const char* env = std::getenv("NGD_SIMD"); env && std::string(env) == "scalar")
        return table_for(Backend::Scalar);
    if (available(Backend::Avx2)) return table_for(Backend::Avx2);
    return table_for(Backend::Scalar);
}

const Table& current() noexcept {
    static const Table t = select();
    return t;
}

void check_sizes(std::size_t a, std::size_t b) {
    if (a != b) throw Error(Errc::InvalidArgument, "simd kernel operands differ in length");
}

Table checked(Backend b) {
    if (!available(b)) throw Error(Errc::InvalidArgument, "simd backend not available: " + std::string(name(b)));
    return table_for(b);
}

}  // namespace

std::string_view name(Backend b) noexcept {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
    }
    return "unknown";
}

bool available(Backend b) noexcept {
    switch (b) {
        case Backend::Scalar: return true;
        case Backend::Avx2:
#if defined(NGD_WITH_AVX2)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

Backend active() noexcept { return current().backend; }

double dot(std::span<const double> a, std::span<const double> b) {
    check_sizes(a.size(), b.size());
    return current().dot(a.data(), b.data(), a.size());
}

double dot(Backend be, std::span<const double> a, std::span<const double> b) {
    check_sizes(a.size(), b.size());
    return checked(be).dot(a.data(), b.data(), a.size());
}

double sum_ratio(std::span<const double> num, std::span<const double> den, double shift) {
    check_sizes(num.size(), den.size());
    return current().sum_ratio(num.data(), den.data(), shift, num.size());
}

double sum_ratio(Backend be, std::span<const double> num, std::span<const double> den, double shift) {
    check_sizes(num.size(), den.size());
    return checked(be).sum_ratio(num.data(), den.data(), shift, num.size());
}

}  // namespace ngd::simd
