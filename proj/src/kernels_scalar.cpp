#include "tzopt/kernels.hpp"

#include <limits>

namespace tzopt::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double dot_rev_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[n - 1 - i];
    return acc;
}

double dot3_scalar(const double* a, const double* b, const double* c, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i] * c[i];
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

BellmanResult bellman_min_scalar(const double* cost, const double* value, std::size_t n,
                                 double gamma) {
    BellmanResult r{std::numeric_limits<double>::infinity(), -1};
    for (std::size_t i = 0; i < n; ++i) {
        const double cand = cost[i] + gamma * value[i];
        if (cand < r.value) {
            r.value = cand;
            r.index = static_cast<std::int64_t>(i);
        }
    }
    return r;
}

}  // namespace

const Ops& scalar() {
    static const Ops ops{"scalar", dot_scalar, dot_rev_scalar, dot3_scalar, axpy_scalar,
                         bellman_min_scalar};
    return ops;
}

}  // namespace tzopt::kernels
