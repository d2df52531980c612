#include "depth_hjb/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__) || defined(_M_IX86)
#define DEPTH_HJB_X86 1
#include <immintrin.h>
#else
#define DEPTH_HJB_X86 0
#endif

#include <cmath>
#include <cstdint>

namespace depth_hjb::kernels {

#if DEPTH_HJB_X86

namespace {

// Tail handled by the scalar expression; identical arithmetic, so counts are
// exactly the sum of vector-body and tail contributions.
inline std::size_t tail_band(const double* xs, const double* ys, std::size_t lo, std::size_t n,
                             double px, double py, double nx, double ny, double h) {
    std::size_t count = 0;
    for (std::size_t i = lo; i < n; ++i) {
        double d = (xs[i] - px) * nx + (ys[i] - py) * ny;
        if (std::fabs(d) <= h) ++count;
    }
    return count;
}

inline std::size_t tail_half(const double* xs, const double* ys, std::size_t lo, std::size_t n,
                             double px, double py, double nx, double ny) {
    std::size_t count = 0;
    for (std::size_t i = lo; i < n; ++i) {
        double d = (xs[i] - px) * nx + (ys[i] - py) * ny;
        if (d >= 0.0) ++count;
    }
    return count;
}

}  // namespace

__attribute__((target("avx2"))) std::size_t count_in_band_avx2(
    const double* xs, const double* ys, std::size_t n,
    double px, double py, double nx, double ny, double h) {
    const __m256d vpx = _mm256_set1_pd(px);
    const __m256d vpy = _mm256_set1_pd(py);
    const __m256d vnx = _mm256_set1_pd(nx);
    const __m256d vny = _mm256_set1_pd(ny);
    const __m256d vh = _mm256_set1_pd(h);
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d x = _mm256_loadu_pd(xs + i);
        __m256d y = _mm256_loadu_pd(ys + i);
        // (x-px)*nx + (y-py)*ny, no FMA so lanes match the scalar kernel.
        __m256d dx = _mm256_mul_pd(_mm256_sub_pd(x, vpx), vnx);
        __m256d dy = _mm256_mul_pd(_mm256_sub_pd(y, vpy), vny);
        __m256d d = _mm256_add_pd(dx, dy);
        __m256d cmp = _mm256_cmp_pd(_mm256_and_pd(d, abs_mask), vh, _CMP_LE_OQ);
        count += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(cmp)));
    }
    return count + tail_band(xs, ys, i, n, px, py, nx, ny, h);
}

__attribute__((target("avx2"))) std::size_t count_in_halfspace_avx2(
    const double* xs, const double* ys, std::size_t n,
    double px, double py, double nx, double ny) {
    const __m256d vpx = _mm256_set1_pd(px);
    const __m256d vpy = _mm256_set1_pd(py);
    const __m256d vnx = _mm256_set1_pd(nx);
    const __m256d vny = _mm256_set1_pd(ny);
    const __m256d zero = _mm256_setzero_pd();

    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d x = _mm256_loadu_pd(xs + i);
        __m256d y = _mm256_loadu_pd(ys + i);
        __m256d dx = _mm256_mul_pd(_mm256_sub_pd(x, vpx), vnx);
        __m256d dy = _mm256_mul_pd(_mm256_sub_pd(y, vpy), vny);
        __m256d d = _mm256_add_pd(dx, dy);
        __m256d cmp = _mm256_cmp_pd(d, zero, _CMP_GE_OQ);
        count += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(cmp)));
    }
    return count + tail_half(xs, ys, i, n, px, py, nx, ny);
}

bool avx2_supported() { return __builtin_cpu_supports("avx2"); }

#else  // non-x86: NEON port not done yet, scalar fallback keeps behavior identical

std::size_t count_in_band_avx2(const double* xs, const double* ys, std::size_t n,
                               double px, double py, double nx, double ny, double h) {
    return count_in_band_scalar(xs, ys, n, px, py, nx, ny, h);
}

std::size_t count_in_halfspace_avx2(const double* xs, const double* ys, std::size_t n,
                                    double px, double py, double nx, double ny) {
    return count_in_halfspace_scalar(xs, ys, n, px, py, nx, ny);
}

bool avx2_supported() { return false; }

#endif

}  // namespace depth_hjb::kernels
