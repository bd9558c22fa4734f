#include "specgame/stats/kernels.hpp"

// AVX2/FMA variants: 4 doubles per lane pair, scalar tail. Compiled with
// -mavx2 -mfma in its own translation unit and only ever called after the
// runtime CPU check in kernels.cpp.

#if defined(SPECGAME_HAVE_AVX2)

#include <immintrin.h>

namespace specgame::stats {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

double sum_sq_dev_avx2(const double* x, std::size_t n, double mean) {
    const __m256d m = _mm256_set1_pd(mean);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), m);
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double d = x[i] - mean;
        s += d * d;
    }
    return s;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void central_moments_2_4_avx2(const double* x, std::size_t n, double mean,
                              double* m2_sum, double* m4_sum) {
    const __m256d m = _mm256_set1_pd(mean);
    __m256d acc2 = _mm256_setzero_pd();
    __m256d acc4 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), m);
        const __m256d d2 = _mm256_mul_pd(d, d);
        acc2 = _mm256_add_pd(acc2, d2);
        acc4 = _mm256_fmadd_pd(d2, d2, acc4);
    }
    double s2 = hsum(acc2), s4 = hsum(acc4);
    for (; i < n; ++i) {
        const double d = x[i] - mean;
        const double d2 = d * d;
        s2 += d2;
        s4 += d2 * d2;
    }
    *m2_sum = s2;
    *m4_sum = s4;
}

double lagged_diff_sum_avx2(const double* p, std::size_t n, std::size_t tau) {
    const std::size_t count = n > tau ? n - tau : 0;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4)
        acc = _mm256_add_pd(acc, _mm256_sub_pd(_mm256_loadu_pd(p + i + tau), _mm256_loadu_pd(p + i)));
    double s = hsum(acc);
    for (; i < count; ++i) s += p[i + tau] - p[i];
    return s;
}

double lagged_diff_sq_dev_avx2(const double* p, std::size_t n, std::size_t tau, double mean) {
    const std::size_t count = n > tau ? n - tau : 0;
    const __m256d m = _mm256_set1_pd(mean);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256d d = _mm256_sub_pd(
            _mm256_sub_pd(_mm256_loadu_pd(p + i + tau), _mm256_loadu_pd(p + i)), m);
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double s = hsum(acc);
    for (; i < count; ++i) {
        const double d = (p[i + tau] - p[i]) - mean;
        s += d * d;
    }
    return s;
}

} // namespace

const Kernels& avx2_kernels() {
    static const Kernels k{sum_avx2,
                           sum_sq_dev_avx2,
                           dot_avx2,
                           central_moments_2_4_avx2,
                           lagged_diff_sum_avx2,
                           lagged_diff_sq_dev_avx2};
    return k;
}

} // namespace specgame::stats

#endif // SPECGAME_HAVE_AVX2
