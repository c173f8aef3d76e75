#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel primitives behind the solvers and estimators. Every
// primitive has a scalar reference implementation plus SIMD variants
// (AVX2 on x86-64, NEON on aarch64) selected once at startup. The
// selection can be forced with the environment variable
// TZOPT_KERNEL=scalar|avx2|neon.
//
// Rounding contract: axpy and bellman_min are bit-identical across
// variants (elementwise mul+add, exact min). The reductions (dot,
// dot_rev, dot3) may reassociate; variants agree with the scalar
// reference to ~1e-12 relative on well-scaled data and the equivalence
// suite enforces that.

namespace tzopt::kernels {

struct BellmanResult {
    double value;        // min over i of cost[i] + gamma * value[i]
    std::int64_t index;  // smallest i attaining it; -1 when n == 0
};

using DotFn = double (*)(const double*, const double*, std::size_t);
using Dot3Fn = double (*)(const double*, const double*, const double*, std::size_t);
using AxpyFn = void (*)(double, const double*, double*, std::size_t);
using BellmanFn = BellmanResult (*)(const double*, const double*, std::size_t, double);

struct Ops {
    const char* name;
    DotFn dot;        // sum a[i] * b[i]
    DotFn dot_rev;    // sum a[i] * b[n-1-i]
    Dot3Fn dot3;      // sum a[i] * b[i] * c[i]
    AxpyFn axpy;      // y[i] += alpha * x[i]
    BellmanFn bellman_min;
};

/// Variant chosen for this process (env override, else best supported).
const Ops& active();

/// Scalar reference implementations.
const Ops& scalar();

/// Variant by name, or nullptr if not compiled in / not supported here.
const Ops* find(std::string_view name);

}  // namespace tzopt::kernels
