// NEON variants for aarch64, where NEON is baseline.

#include "tzopt/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <limits>

namespace tzopt::kernels {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    }
    double out = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < n; ++i) out += a[i] * b[i];
    return out;
}

double dot_rev_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t vb = vld1q_f64(b + n - i - 2);
        acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(a + i), vextq_f64(vb, vb, 1)));
    }
    double out = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < n; ++i) out += a[i] * b[n - 1 - i];
    return out;
}

double dot3_neon(const double* a, const double* b, const double* c, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t prod = vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc = vaddq_f64(acc, vmulq_f64(prod, vld1q_f64(c + i)));
    }
    double out = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < n; ++i) out += a[i] * b[i] * c[i];
    return out;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t vy = vld1q_f64(y + i);
        vy = vaddq_f64(vy, vmulq_f64(va, vld1q_f64(x + i)));
        vst1q_f64(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

BellmanResult bellman_min_neon(const double* cost, const double* value, std::size_t n,
                               double gamma) {
    if (n == 0) return {std::numeric_limits<double>::infinity(), -1};
    const float64x2_t vg = vdupq_n_f64(gamma);
    float64x2_t vmin = vdupq_n_f64(std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t cand = vaddq_f64(vld1q_f64(cost + i), vmulq_f64(vg, vld1q_f64(value + i)));
        vmin = vminq_f64(vmin, cand);
    }
    double best = vgetq_lane_f64(vmin, 0);
    if (vgetq_lane_f64(vmin, 1) < best) best = vgetq_lane_f64(vmin, 1);
    for (; i < n; ++i) {
        const double cand = cost[i] + gamma * value[i];
        if (cand < best) best = cand;
    }
    for (i = 0; i < n; ++i) {
        if (cost[i] + gamma * value[i] == best) return {best, static_cast<std::int64_t>(i)};
    }
    return {best, -1};
}

}  // namespace

const Ops* neon_ops() {
    static const Ops ops{"neon", dot_neon, dot_rev_neon, dot3_neon, axpy_neon, bellman_min_neon};
    return &ops;
}

}  // namespace tzopt::kernels

#else

namespace tzopt::kernels {
const Ops* neon_ops() { return nullptr; }
}  // namespace tzopt::kernels

#endif
