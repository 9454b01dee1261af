#pragma once

#include <cstddef>

// Data-parallel inner loops used by the dense linear algebra, the SDP solver
// and the samplers. A scalar reference implementation is always available;
// an AVX2+FMA variant is selected at runtime on x86-64 when the CPU supports
// it. The two backends agree to rounding differences only and are
// equivalence-tested against each other.

namespace nsp::kernels {

enum class Backend { Scalar, Avx2 };

// Backend active for subsequent calls. Selection happens once on first use:
// AVX2 if compiled in and supported by the CPU, unless NSP_SIMD=scalar is set
// in the environment.
Backend active_backend();
const char* backend_name();
bool avx2_supported();

// Force a backend (tests). Requesting Avx2 on an unsupported CPU keeps Scalar.
void set_backend(Backend b);

double dot(const double* x, const double* y, std::size_t n);
double sum(const double* x, std::size_t n);
double sum_abs(const double* x, std::size_t n);
double sum_sq(const double* x, std::size_t n);

// y += a*x
void axpy(double a, const double* x, double* y, std::size_t n);
// x *= a
void scal(double a, double* x, std::size_t n);
// Plane rotation: (x, y) <- (c*x + s*y, c*y - s*x), elementwise.
void rot(double* x, double* y, double c, double s, std::size_t n);

}  // namespace nsp::kernels
