#include "slab/theta_kernel.hpp"

#include <cstdlib>
#include <cstring>

namespace slab {

namespace {

struct Choice {
    theta_accumulate_fn fn;
    const char* name;
};

Choice resolve() {
    const char* env = std::getenv("SCHOTTKY_LAB_SIMD");
#if defined(__x86_64__) || defined(_M_X64)
    bool have = cpu_has_avx2_fma();
    if (env != nullptr) {
        if (std::strcmp(env, "scalar") == 0) return {theta_accumulate_scalar, "scalar"};
        if (std::strcmp(env, "avx2") == 0 && have) return {theta_accumulate_avx2, "avx2"};
    }
    if (have) return {theta_accumulate_avx2, "avx2"};
#else
    (void)env;
#endif
    return {theta_accumulate_scalar, "scalar"};
}

const Choice& choice() {
    static const Choice c = resolve();
    return c;
}

}  // namespace

theta_accumulate_fn theta_kernel() { return choice().fn; }

std::string theta_kernel_name() { return choice().name; }

}  // namespace slab
