#include "mnet/simd.hpp"

#include <cstdlib>
#include <cstring>

namespace mnet::simd {
namespace {

const Kernels& select() {
    const char* env = std::getenv("MNET_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
    if (env && std::strcmp(env, "avx2") == 0) return avx2_kernels();
    if (avx2_supported()) return avx2_kernels();
#endif
    return scalar_kernels();
}

} // namespace

const Kernels& active_kernels() {
    static const Kernels& k = select();
    return k;
}

std::string active_kernel_name() { return active_kernels().name; }

} // namespace mnet::simd
