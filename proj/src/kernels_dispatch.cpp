#include <cstdlib>
#include <cstring>

#include "nsp/kernels.hpp"

namespace nsp::kernels {

namespace detail {

double dot_scalar(const double*, const double*, std::size_t);
double sum_scalar(const double*, std::size_t);
double sum_abs_scalar(const double*, std::size_t);
double sum_sq_scalar(const double*, std::size_t);
void axpy_scalar(double, const double*, double*, std::size_t);
void scal_scalar(double, double*, std::size_t);
void rot_scalar(double*, double*, double, double, std::size_t);

#ifdef NSP_HAVE_AVX2_TU
double dot_avx2(const double*, const double*, std::size_t);
double sum_avx2(const double*, std::size_t);
double sum_abs_avx2(const double*, std::size_t);
double sum_sq_avx2(const double*, std::size_t);
void axpy_avx2(double, const double*, double*, std::size_t);
void scal_avx2(double, double*, std::size_t);
void rot_avx2(double*, double*, double, double, std::size_t);
#endif

}  // namespace detail

namespace {

struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  double (*sum_abs)(const double*, std::size_t);
  double (*sum_sq)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scal)(double, double*, std::size_t);
  void (*rot)(double*, double*, double, double, std::size_t);
  Backend backend;
};

constexpr Table kScalarTable = {
    detail::dot_scalar, detail::sum_scalar,  detail::sum_abs_scalar, detail::sum_sq_scalar,
    detail::axpy_scalar, detail::scal_scalar, detail::rot_scalar,    Backend::Scalar};

#ifdef NSP_HAVE_AVX2_TU
constexpr Table kAvx2Table = {
    detail::dot_avx2, detail::sum_avx2,  detail::sum_abs_avx2, detail::sum_sq_avx2,
    detail::axpy_avx2, detail::scal_avx2, detail::rot_avx2,    Backend::Avx2};
#endif

Table select_default() {
  const char* env = std::getenv("NSP_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return kScalarTable;
#ifdef NSP_HAVE_AVX2_TU
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return kAvx2Table;
#endif
  return kScalarTable;
}

Table& table() {
  static Table t = select_default();
  return t;
}

}  // namespace

bool avx2_supported() {
#ifdef NSP_HAVE_AVX2_TU
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() { return table().backend; }

const char* backend_name() {
  return table().backend == Backend::Avx2 ? "avx2" : "scalar";
}

void set_backend(Backend b) {
#ifdef NSP_HAVE_AVX2_TU
  if (b == Backend::Avx2 && avx2_supported()) {
    table() = kAvx2Table;
    return;
  }
#else
  (void)b;
#endif
  table() = kScalarTable;
}

double dot(const double* x, const double* y, std::size_t n) { return table().dot(x, y, n); }
double sum(const double* x, std::size_t n) { return table().sum(x, n); }
double sum_abs(const double* x, std::size_t n) { return table().sum_abs(x, n); }
double sum_sq(const double* x, std::size_t n) { return table().sum_sq(x, n); }
void axpy(double a, const double* x, double* y, std::size_t n) { table().axpy(a, x, y, n); }
void scal(double a, double* x, std::size_t n) { table().scal(a, x, n); }
void rot(double* x, double* y, double c, double s, std::size_t n) { table().rot(x, y, c, s, n); }

}  // namespace nsp::kernels
