// AVX2 variants. This translation unit is compiled with -mavx2 and must
// only be entered after a runtime cpuid check (see kernels_dispatch.cpp).

#include "tzopt/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <limits>

namespace tzopt::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s = _mm_add_pd(lo, hi);
    s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
    return _mm_cvtsd_f64(s);
}

inline double hmin(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d m = _mm_min_pd(lo, hi);
    m = _mm_min_sd(m, _mm_unpackhi_pd(m, m));
    return _mm_cvtsd_f64(m);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    double out = hsum(acc);
    for (; i < n; ++i) out += a[i] * b[i];
    return out;
}

double dot_rev_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        // lanes of b reversed so lane j holds b[n-1-(i+j)]
        __m256d vb = _mm256_permute4x64_pd(_mm256_loadu_pd(b + n - i - 4), 0x1b);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(va, vb));
    }
    double out = hsum(acc);
    for (; i < n; ++i) out += a[i] * b[n - 1 - i];
    return out;
}

double dot3_avx2(const double* a, const double* b, const double* c, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(prod, _mm256_loadu_pd(c + i)));
    }
    double out = hsum(acc);
    for (; i < n; ++i) out += a[i] * b[i] * c[i];
    return out;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

// Two passes: exact min first (per-lane mul+add rounds like scalar, min is
// exact), then the first index attaining it. Matches the scalar
// first-tie-wins result bit for bit.
BellmanResult bellman_min_avx2(const double* cost, const double* value, std::size_t n,
                               double gamma) {
    if (n == 0) return {std::numeric_limits<double>::infinity(), -1};
    const __m256d vg = _mm256_set1_pd(gamma);
    __m256d vmin = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d cand = _mm256_add_pd(_mm256_loadu_pd(cost + i),
                                     _mm256_mul_pd(vg, _mm256_loadu_pd(value + i)));
        vmin = _mm256_min_pd(vmin, cand);
    }
    double best = hmin(vmin);
    for (; i < n; ++i) {
        const double cand = cost[i] + gamma * value[i];
        if (cand < best) best = cand;
    }

    const __m256d vbest = _mm256_set1_pd(best);
    for (i = 0; i + 4 <= n; i += 4) {
        __m256d cand = _mm256_add_pd(_mm256_loadu_pd(cost + i),
                                     _mm256_mul_pd(vg, _mm256_loadu_pd(value + i)));
        const int mask = _mm256_movemask_pd(_mm256_cmp_pd(cand, vbest, _CMP_EQ_OQ));
        if (mask != 0) {
            return {best, static_cast<std::int64_t>(i) + __builtin_ctz(mask)};
        }
    }
    for (; i < n; ++i) {
        if (cost[i] + gamma * value[i] == best) return {best, static_cast<std::int64_t>(i)};
    }
    return {best, -1};  // unreachable for finite inputs
}

}  // namespace

const Ops* avx2_ops() {
    static const Ops ops{"avx2", dot_avx2, dot_rev_avx2, dot3_avx2, axpy_avx2, bellman_min_avx2};
    return &ops;
}

}  // namespace tzopt::kernels

#else

namespace tzopt::kernels {
const Ops* avx2_ops() { return nullptr; }
}  // namespace tzopt::kernels

#endif
