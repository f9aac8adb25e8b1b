// Compiled with -mavx2; only reached through runtime dispatch.
#include <immintrin.h>

#include "exmine/kernels.hpp"

namespace exmine::kernels::avx2 {
namespace {

inline double horizontal_sum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

}  // namespace

double sum(std::span<const double> x) {
    const double* p = x.data();
    const std::size_t n = x.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(p + i + 4));
    }
    double s = horizontal_sum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += p[i];
    return s;
}

PowerSums central_power_sums(std::span<const double> x, double center) {
    const double* p = x.data();
    const std::size_t n = x.size();
    const __m256d c = _mm256_set1_pd(center);
    __m256d a1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd();
    __m256d a3 = _mm256_setzero_pd();
    __m256d a4 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(p + i), c);
        const __m256d d2 = _mm256_mul_pd(d, d);
        a1 = _mm256_add_pd(a1, d);
        a2 = _mm256_add_pd(a2, d2);
        a3 = _mm256_add_pd(a3, _mm256_mul_pd(d2, d));
        a4 = _mm256_add_pd(a4, _mm256_mul_pd(d2, d2));
    }
    PowerSums out{horizontal_sum(a1), horizontal_sum(a2), horizontal_sum(a3), horizontal_sum(a4)};
    for (; i < n; ++i) {
        const double d = p[i] - center;
        const double d2 = d * d;
        out.s1 += d;
        out.s2 += d2;
        out.s3 += d2 * d;
        out.s4 += d2 * d2;
    }
    return out;
}

}  // namespace exmine::kernels::avx2
