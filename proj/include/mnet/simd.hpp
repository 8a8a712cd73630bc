#pragma once

#include <cstddef>
#include <string>

namespace mnet::simd {

// Double-precision kernels behind the dense/autoencoder inner loops.
// Scalar reference implementations always exist; an AVX2+FMA variant is
// selected at startup when the CPU supports it. Override with
// MNET_SIMD=scalar|avx2.

struct Kernels {
    // sum_i a[i]*b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y[i] += alpha * x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // x[i] *= alpha
    void (*scale)(double alpha, double* x, std::size_t n);
    // sum_i x[i]
    double (*sum)(const double* x, std::size_t n);
    const char* name;
};

const Kernels& scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
const Kernels& avx2_kernels();
bool avx2_supported();
#endif

// Active kernel set (dispatch decided once, before main-thread use).
const Kernels& active_kernels();
std::string active_kernel_name();

inline double dot(const double* a, const double* b, std::size_t n) {
    return active_kernels().dot(a, b, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
    active_kernels().axpy(alpha, x, y, n);
}
inline void scale(double alpha, double* x, std::size_t n) {
    active_kernels().scale(alpha, x, n);
}
inline double sum(const double* x, std::size_t n) {
    return active_kernels().sum(x, n);
}

} // namespace mnet::simd
