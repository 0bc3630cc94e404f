#include <algorithm>
#include <cmath>
#include <cstdint>

#include "courtloc/kernels.hpp"
#include "courtloc/parallel.hpp"

// OpenMP variants. Work is split over independent output regions only; each
// accumulator keeps the exact update order of the serial reference, so the
// results are bitwise-identical for any thread count.

namespace courtloc::kernels {

template <typename T>
void affine_forward_omp(const T* X, const T* W, const T* bias, T* Y,
                        std::size_t batch, std::size_t in, std::size_t out) {
  const std::int64_t nb = static_cast<std::int64_t>(batch);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nb; ++b) {
    T* y = Y + b * out;
    for (std::size_t o = 0; o < out; ++o) y[o] = bias[o];
    const T* x = X + b * in;
    for (std::size_t i = 0; i < in; ++i) {
      const T xi = x[i];
      const T* w = W + i * out;
      for (std::size_t o = 0; o < out; ++o) y[o] += xi * w[o];
    }
  }
}

template <typename T>
void affine_backward_input_omp(const T* dY, const T* W, T* dX,
                               std::size_t batch, std::size_t in,
                               std::size_t out) {
  const std::int64_t ni = static_cast<std::int64_t>(in);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < ni; ++i) {
    const T* w = W + i * out;
    for (std::size_t b = 0; b < batch; ++b) {
      const T* dy = dY + b * out;
      T acc = 0;
      for (std::size_t o = 0; o < out; ++o) acc += dy[o] * w[o];
      dX[b * in + i] = acc;
    }
  }
}

template <typename T>
void affine_backward_params_omp(const T* X, const T* dY, T* dW, T* db,
                                std::size_t batch, std::size_t in,
                                std::size_t out) {
  const std::int64_t ni = static_cast<std::int64_t>(in);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < ni; ++i) {
    T* dw = dW + i * out;
    std::fill(dw, dw + out, T{0});
    for (std::size_t b = 0; b < batch; ++b) {
      const T xi = X[b * in + i];
      const T* dy = dY + b * out;
      for (std::size_t o = 0; o < out; ++o) dw[o] += xi * dy[o];
    }
  }
  // Bias gradient is tiny; keep the serial reference order.
  std::fill(db, db + out, T{0});
  for (std::size_t b = 0; b < batch; ++b) {
    const T* dy = dY + b * out;
    for (std::size_t o = 0; o < out; ++o) db[o] += dy[o];
  }
}

template <typename T>
void relu_omp(T* A, std::size_t n) {
  const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < nn; ++i) A[i] = A[i] > T{0} ? A[i] : T{0};
}

template <typename T>
void relu_backward_omp(const T* post, T* dA, std::size_t n) {
  const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < nn; ++i)
    if (!(post[i] > T{0})) dA[i] = T{0};
}

template <typename T>
void adam_update_omp(T* theta, const T* g, T* m, T* v, std::size_t n, T alpha,
                     T beta1, T beta2, T eps, T bc1, T bc2) {
  const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < nn; ++i) {
    m[i] = beta1 * m[i] + (T{1} - beta1) * g[i];
    v[i] = beta2 * v[i] + (T{1} - beta2) * g[i] * g[i];
    const T m_hat = m[i] / bc1;
    const T v_hat = v[i] / bc2;
    theta[i] -= alpha * m_hat / (std::sqrt(v_hat) + eps);
  }
}

// Dispatchers.
template <typename T>
void affine_forward(const T* X, const T* W, const T* bias, T* Y,
                    std::size_t batch, std::size_t in, std::size_t out) {
  if (par::parallel_enabled())
    affine_forward_omp(X, W, bias, Y, batch, in, out);
  else
    affine_forward_serial(X, W, bias, Y, batch, in, out);
}

template <typename T>
void affine_backward_input(const T* dY, const T* W, T* dX, std::size_t batch,
                           std::size_t in, std::size_t out) {
  if (par::parallel_enabled())
    affine_backward_input_omp(dY, W, dX, batch, in, out);
  else
    affine_backward_input_serial(dY, W, dX, batch, in, out);
}

template <typename T>
void affine_backward_params(const T* X, const T* dY, T* dW, T* db,
                            std::size_t batch, std::size_t in,
                            std::size_t out) {
  if (par::parallel_enabled())
    affine_backward_params_omp(X, dY, dW, db, batch, in, out);
  else
    affine_backward_params_serial(X, dY, dW, db, batch, in, out);
}

template <typename T>
void relu(T* A, std::size_t n) {
  if (par::parallel_enabled())
    relu_omp(A, n);
  else
    relu_serial(A, n);
}

template <typename T>
void relu_backward(const T* post, T* dA, std::size_t n) {
  if (par::parallel_enabled())
    relu_backward_omp(post, dA, n);
  else
    relu_backward_serial(post, dA, n);
}

template <typename T>
void adam_update(T* theta, const T* g, T* m, T* v, std::size_t n, T alpha,
                 T beta1, T beta2, T eps, T bc1, T bc2) {
  if (par::parallel_enabled())
    adam_update_omp(theta, g, m, v, n, alpha, beta1, beta2, eps, bc1, bc2);
  else
    adam_update_serial(theta, g, m, v, n, alpha, beta1, beta2, eps, bc1, bc2);
}

#define COURTLOC_INSTANTIATE_OMP(T)                                           \
  template void affine_forward_omp<T>(const T*, const T*, const T*, T*,       \
                                      std::size_t, std::size_t, std::size_t); \
  template void affine_backward_input_omp<T>(const T*, const T*, T*,          \
                                             std::size_t, std::size_t,        \
                                             std::size_t);                    \
  template void affine_backward_params_omp<T>(const T*, const T*, T*, T*,     \
                                              std::size_t, std::size_t,       \
                                              std::size_t);                   \
  template void relu_omp<T>(T*, std::size_t);                                 \
  template void relu_backward_omp<T>(const T*, T*, std::size_t);              \
  template void adam_update_omp<T>(T*, const T*, T*, T*, std::size_t, T, T,   \
                                   T, T, T, T);                               \
  template void affine_forward<T>(const T*, const T*, const T*, T*,           \
                                  std::size_t, std::size_t, std::size_t);     \
  template void affine_backward_input<T>(const T*, const T*, T*, std::size_t, \
                                         std::size_t, std::size_t);           \
  template void affine_backward_params<T>(const T*, const T*, T*, T*,         \
                                          std::size_t, std::size_t,           \
                                          std::size_t);                       \
  template void relu<T>(T*, std::size_t);                                     \
  template void relu_backward<T>(const T*, T*, std::size_t);                  \
  template void adam_update<T>(T*, const T*, T*, T*, std::size_t, T, T, T, T, \
                               T, T);

COURTLOC_INSTANTIATE_OMP(float)
COURTLOC_INSTANTIATE_OMP(double)

}  // namespace courtloc::kernels
