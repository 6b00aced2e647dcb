#pragma once

#include <cstddef>

namespace acrnn::kernels {

// Number of worker threads the parallel kernels may use. Reads ACRNN_THREADS
// once (0 or unset means the OpenMP default); always 1 when built without
// OpenMP.
int thread_cap();

// Parallel variants must be bit-identical to their serial counterparts: they
// split work across independent output elements and never change the
// reduction order within one element. Tests assert this.

// c[n,m] = a[n,k] * b[k,m]
void matmul_serial(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
                   std::size_t m);
void matmul_omp(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
                std::size_t m);
void matmul(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
            std::size_t m);

// c[n,m] += a[n,k] * b[k,m]
void matmul_acc_serial(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
                       std::size_t m);
void matmul_acc_omp(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
                    std::size_t m);
void matmul_acc(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
                std::size_t m);

// c[k,m] += a[n,k]^T * b[n,m], without materializing the transpose.
void matmul_atb_acc_serial(const double* a, const double* b, double* c, std::size_t n,
                           std::size_t k, std::size_t m);
void matmul_atb_acc_omp(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
                        std::size_t m);
void matmul_atb_acc(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
                    std::size_t m);

// at[m,n] = transpose of a[n,m]
void transpose(const double* a, double* at, std::size_t n, std::size_t m);

void sigmoid_serial(const double* x, double* y, std::size_t n);
void sigmoid_omp(const double* x, double* y, std::size_t n);
void sigmoid(const double* x, double* y, std::size_t n);

void tanh_serial(const double* x, double* y, std::size_t n);
void tanh_omp(const double* x, double* y, std::size_t n);
void tanh(const double* x, double* y, std::size_t n);

void add(const double* a, const double* b, double* c, std::size_t n);
void sub(const double* a, const double* b, double* c, std::size_t n);
void mul(const double* a, const double* b, double* c, std::size_t n);

// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);
// c += a .* b
void mul_acc(const double* a, const double* b, double* c, std::size_t n);

// out[r,c] = m[r,c] + v[c]
void add_rowvec(const double* m, const double* v, double* out, std::size_t rows,
                std::size_t cols);
// v[c] += sum_r m[r,c], rows visited in order (fixed reduction order)
void colsum_acc(const double* m, double* v, std::size_t rows, std::size_t cols);

double sum_squares_diff(const double* a, const double* b, std::size_t n);

}  // namespace acrnn::kernels
