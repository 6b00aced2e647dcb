#include "acrnn/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace acrnn::kernels {

int thread_cap() {
  static const int cap = [] {
#ifdef _OPENMP
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("ACRNN_THREADS")) {
      const int requested = std::atoi(env);
      if (requested > 0 && requested < n) n = requested;
    }
    return n;
#else
    return 1;
#endif
  }();
  return cap;
}

namespace {

// Work below these sizes is cheaper than the fork/join overhead.
constexpr std::size_t kMatmulParallelFlops = 64 * 1024;
constexpr std::size_t kMapParallelElems = 16 * 1024;

inline void matmul_row(const double* a_row, const double* b, double* c_row, std::size_t k,
                       std::size_t m) {
  std::memset(c_row, 0, m * sizeof(double));
  for (std::size_t p = 0; p < k; ++p) {
    const double av = a_row[p];
    const double* b_row = b + p * m;
    for (std::size_t j = 0; j < m; ++j) c_row[j] += av * b_row[j];
  }
}

inline void matmul_acc_row(const double* a_row, const double* b, double* c_row, std::size_t k,
                           std::size_t m) {
  for (std::size_t p = 0; p < k; ++p) {
    const double av = a_row[p];
    const double* b_row = b + p * m;
    for (std::size_t j = 0; j < m; ++j) c_row[j] += av * b_row[j];
  }
}

}  // namespace

void matmul_serial(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
                   std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) matmul_row(a + i * k, b, c + i * m, k, m);
}

void matmul_omp(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
                std::size_t m) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    matmul_row(a + i * k, b, c + i * m, k, m);
#else
  matmul_serial(a, b, c, n, k, m);
#endif
}

void matmul(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
            std::size_t m) {
  if (thread_cap() > 1 && n > 1 && n * k * m >= kMatmulParallelFlops)
    matmul_omp(a, b, c, n, k, m);
  else
    matmul_serial(a, b, c, n, k, m);
}

void matmul_acc_serial(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
                       std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) matmul_acc_row(a + i * k, b, c + i * m, k, m);
}

void matmul_acc_omp(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
                    std::size_t m) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    matmul_acc_row(a + i * k, b, c + i * m, k, m);
#else
  matmul_acc_serial(a, b, c, n, k, m);
#endif
}

void matmul_acc(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
                std::size_t m) {
  if (thread_cap() > 1 && n > 1 && n * k * m >= kMatmulParallelFlops)
    matmul_acc_omp(a, b, c, n, k, m);
  else
    matmul_acc_serial(a, b, c, n, k, m);
}

namespace {

// One output row p of a^T * b: c[p,:] += sum_i a[i,p] * b[i,:].
inline void atb_row(const double* a, const double* b, double* c_row, std::size_t n,
                    std::size_t k, std::size_t m, std::size_t p) {
  for (std::size_t i = 0; i < n; ++i) {
    const double av = a[i * k + p];
    const double* b_row = b + i * m;
    for (std::size_t j = 0; j < m; ++j) c_row[j] += av * b_row[j];
  }
}

}  // namespace

void matmul_atb_acc_serial(const double* a, const double* b, double* c, std::size_t n,
                           std::size_t k, std::size_t m) {
  for (std::size_t p = 0; p < k; ++p) atb_row(a, b, c + p * m, n, k, m, p);
}

void matmul_atb_acc_omp(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
                        std::size_t m) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
  for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(k); ++p)
    atb_row(a, b, c + p * m, n, k, m, p);
#else
  matmul_atb_acc_serial(a, b, c, n, k, m);
#endif
}

void matmul_atb_acc(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
                    std::size_t m) {
  if (thread_cap() > 1 && k > 1 && n * k * m >= kMatmulParallelFlops)
    matmul_atb_acc_omp(a, b, c, n, k, m);
  else
    matmul_atb_acc_serial(a, b, c, n, k, m);
}

void transpose(const double* a, double* at, std::size_t n, std::size_t m) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) at[j * n + i] = a[i * m + j];
}

void sigmoid_serial(const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = 1.0 / (1.0 + std::exp(-x[i]));
}

void sigmoid_omp(const double* x, double* y, std::size_t n) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    y[i] = 1.0 / (1.0 + std::exp(-x[i]));
#else
  sigmoid_serial(x, y, n);
#endif
}

void sigmoid(const double* x, double* y, std::size_t n) {
  if (thread_cap() > 1 && n >= kMapParallelElems)
    sigmoid_omp(x, y, n);
  else
    sigmoid_serial(x, y, n);
}

void tanh_serial(const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::tanh(x[i]);
}

void tanh_omp(const double* x, double* y, std::size_t n) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) y[i] = std::tanh(x[i]);
#else
  tanh_serial(x, y, n);
#endif
}

void tanh(const double* x, double* y, std::size_t n) {
  if (thread_cap() > 1 && n >= kMapParallelElems)
    tanh_omp(x, y, n);
  else
    tanh_serial(x, y, n);
}

void add(const double* a, const double* b, double* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) c[i] = a[i] + b[i];
}

void sub(const double* a, const double* b, double* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) c[i] = a[i] - b[i];
}

void mul(const double* a, const double* b, double* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) c[i] = a[i] * b[i];
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void mul_acc(const double* a, const double* b, double* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) c[i] += a[i] * b[i];
}

void add_rowvec(const double* m, const double* v, double* out, std::size_t rows,
                std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* src = m + r * cols;
    double* dst = out + r * cols;
    for (std::size_t c = 0; c < cols; ++c) dst[c] = src[c] + v[c];
  }
}

void colsum_acc(const double* m, double* v, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* src = m + r * cols;
    for (std::size_t c = 0; c < cols; ++c) v[c] += src[c];
  }
}

double sum_squares_diff(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace acrnn::kernels
