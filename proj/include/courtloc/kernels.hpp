#pragma once

#include <cstddef>

namespace courtloc::kernels {

// Dense-layer kernels. Weights are stored input-major (in x out, row-major)
// so the hot inner loops run over contiguous output lanes without forming a
// floating-point reduction; every accumulator is updated in a fixed order,
// which makes the serial and OpenMP variants bitwise-identical.
//
// The *_serial functions are the reference implementations kept for testing;
// the *_omp functions parallelize over independent output regions. The
// unsuffixed entry points dispatch on courtloc::par::max_threads().

// Y[b,o] = sum_i X[b,i] * W[i,o] + bias[o]
template <typename T>
void affine_forward_serial(const T* X, const T* W, const T* bias, T* Y,
                           std::size_t batch, std::size_t in, std::size_t out);
template <typename T>
void affine_forward_omp(const T* X, const T* W, const T* bias, T* Y,
                        std::size_t batch, std::size_t in, std::size_t out);
template <typename T>
void affine_forward(const T* X, const T* W, const T* bias, T* Y,
                    std::size_t batch, std::size_t in, std::size_t out);

// dX[b,i] = sum_o dY[b,o] * W[i,o]
template <typename T>
void affine_backward_input_serial(const T* dY, const T* W, T* dX,
                                  std::size_t batch, std::size_t in,
                                  std::size_t out);
template <typename T>
void affine_backward_input_omp(const T* dY, const T* W, T* dX,
                               std::size_t batch, std::size_t in,
                               std::size_t out);
template <typename T>
void affine_backward_input(const T* dY, const T* W, T* dX, std::size_t batch,
                           std::size_t in, std::size_t out);

// dW[i,o] = sum_b X[b,i] * dY[b,o]; db[o] = sum_b dY[b,o]
template <typename T>
void affine_backward_params_serial(const T* X, const T* dY, T* dW, T* db,
                                   std::size_t batch, std::size_t in,
                                   std::size_t out);
template <typename T>
void affine_backward_params_omp(const T* X, const T* dY, T* dW, T* db,
                                std::size_t batch, std::size_t in,
                                std::size_t out);
template <typename T>
void affine_backward_params(const T* X, const T* dY, T* dW, T* db,
                            std::size_t batch, std::size_t in, std::size_t out);

// A[i] = max(A[i], 0)
template <typename T>
void relu_serial(T* A, std::size_t n);
template <typename T>
void relu_omp(T* A, std::size_t n);
template <typename T>
void relu(T* A, std::size_t n);

// dA[i] = post[i] > 0 ? dA[i] : 0   (subgradient at 0 is 0)
template <typename T>
void relu_backward_serial(const T* post, T* dA, std::size_t n);
template <typename T>
void relu_backward_omp(const T* post, T* dA, std::size_t n);
template <typename T>
void relu_backward(const T* post, T* dA, std::size_t n);

// Adam update with precomputed bias corrections bc1 = 1 - beta1^t,
// bc2 = 1 - beta2^t.
template <typename T>
void adam_update_serial(T* theta, const T* g, T* m, T* v, std::size_t n,
                        T alpha, T beta1, T beta2, T eps, T bc1, T bc2);
template <typename T>
void adam_update_omp(T* theta, const T* g, T* m, T* v, std::size_t n, T alpha,
                     T beta1, T beta2, T eps, T bc1, T bc2);
template <typename T>
void adam_update(T* theta, const T* g, T* m, T* v, std::size_t n, T alpha,
                 T beta1, T beta2, T eps, T bc1, T bc2);

}  // namespace courtloc::kernels
