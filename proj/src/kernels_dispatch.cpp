#include "tzopt/kernels.hpp"

#include <cstdlib>
#include <string>

#include "tzopt/errors.hpp"

namespace tzopt::kernels {

const Ops* avx2_ops();  // kernels_avx2.cpp; nullptr when not compiled in
const Ops* neon_ops();  // kernels_neon.cpp; nullptr when not compiled in

namespace {

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const Ops* choose() {
    const char* env = std::getenv("TZOPT_KERNEL");
    if (env != nullptr && env[0] != '\0' && std::string(env) != "auto") {
        const Ops* forced = find(env);
        if (forced == nullptr) {
            throw InputError(std::string("TZOPT_KERNEL=") + env +
                             " is not available on this machine (use scalar, avx2, neon, or auto)");
        }
        return forced;
    }
    if (const Ops* a = avx2_ops(); a != nullptr && avx2_supported()) return a;
    if (const Ops* n = neon_ops(); n != nullptr) return n;
    return &scalar();
}

}  // namespace

const Ops& active() {
    static const Ops* chosen = choose();
    return *chosen;
}

const Ops* find(std::string_view name) {
    if (name == "scalar") return &scalar();
    if (name == "avx2") {
        const Ops* a = avx2_ops();
        return (a != nullptr && avx2_supported()) ? a : nullptr;
    }
    if (name == "neon") return neon_ops();
    return nullptr;
}

}  // namespace tzopt::kernels
