#pragma once
// Dense double-precision kernels behind the Bellman solver, with runtime
// SIMD dispatch. A scalar reference implementation always exists; AVX2 and
// AVX-512 variants are selected at startup when the CPU supports them and
// can be overridden with the ATLAS_KERNEL environment variable or
// force_kernel(). All variants agree with the scalar reference to floating
// point rounding (equivalence-tested, not bit-identical: SIMD reassociates
// the accumulation order).

#include <cstddef>
#include <string>

namespace atlas::kernels {

// Inner product of two length-n vectors.
double dot(const double* a, const double* b, std::size_t n);

// y[r] = dot(A.row(r), x) for a rows x cols row-major matrix A.
void gemv(const double* a, const double* x, double* y, std::size_t rows,
          std::size_t cols);

// max_i |a[i] - b[i]|, used for sup-norm Bellman residuals.
double max_abs_diff(const double* a, const double* b, std::size_t n);

// Name of the implementation in use: "scalar", "avx2" or "avx512".
std::string active_kernel_name();

// Force a specific implementation ("scalar", "avx2", "avx512"). Returns
// false and changes nothing if the CPU lacks the requested instruction set.
bool force_kernel(const std::string& name);

}  // namespace atlas::kernels
