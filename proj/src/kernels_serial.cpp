#include <algorithm>
#include <cmath>

#include "courtloc/kernels.hpp"

// Reference implementations. Plain loops, one accumulator per output element,
// inner updates in ascending index order.

namespace courtloc::kernels {

template <typename T>
void affine_forward_serial(const T* X, const T* W, const T* bias, T* Y,
                           std::size_t batch, std::size_t in, std::size_t out) {
  for (std::size_t b = 0; b < batch; ++b) {
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
void affine_backward_input_serial(const T* dY, const T* W, T* dX,
                                  std::size_t batch, std::size_t in,
                                  std::size_t out) {
  for (std::size_t b = 0; b < batch; ++b) {
    const T* dy = dY + b * out;
    T* dx = dX + b * in;
    for (std::size_t i = 0; i < in; ++i) {
      T acc = 0;
      const T* w = W + i * out;
      for (std::size_t o = 0; o < out; ++o) acc += dy[o] * w[o];
      dx[i] = acc;
    }
  }
}

template <typename T>
void affine_backward_params_serial(const T* X, const T* dY, T* dW, T* db,
                                   std::size_t batch, std::size_t in,
                                   std::size_t out) {
  std::fill(dW, dW + in * out, T{0});
  std::fill(db, db + out, T{0});
  for (std::size_t b = 0; b < batch; ++b) {
    const T* x = X + b * in;
    const T* dy = dY + b * out;
    for (std::size_t i = 0; i < in; ++i) {
      const T xi = x[i];
      T* dw = dW + i * out;
      for (std::size_t o = 0; o < out; ++o) dw[o] += xi * dy[o];
    }
    for (std::size_t o = 0; o < out; ++o) db[o] += dy[o];
  }
}

template <typename T>
void relu_serial(T* A, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) A[i] = A[i] > T{0} ? A[i] : T{0};
}

template <typename T>
void relu_backward_serial(const T* post, T* dA, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (!(post[i] > T{0})) dA[i] = T{0};
}

template <typename T>
void adam_update_serial(T* theta, const T* g, T* m, T* v, std::size_t n,
                        T alpha, T beta1, T beta2, T eps, T bc1, T bc2) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = beta1 * m[i] + (T{1} - beta1) * g[i];
    v[i] = beta2 * v[i] + (T{1} - beta2) * g[i] * g[i];
    const T m_hat = m[i] / bc1;
    const T v_hat = v[i] / bc2;
    theta[i] -= alpha * m_hat / (std::sqrt(v_hat) + eps);
  }
}

#define COURTLOC_INSTANTIATE_SERIAL(T)                                        \
  template void affine_forward_serial<T>(const T*, const T*, const T*, T*,    \
                                         std::size_t, std::size_t,            \
                                         std::size_t);                        \
  template void affine_backward_input_serial<T>(const T*, const T*, T*,       \
                                                std::size_t, std::size_t,     \
                                                std::size_t);                 \
  template void affine_backward_params_serial<T>(const T*, const T*, T*, T*,  \
                                                 std::size_t, std::size_t,    \
                                                 std::size_t);                \
  template void relu_serial<T>(T*, std::size_t);                              \
  template void relu_backward_serial<T>(const T*, T*, std::size_t);           \
  template void adam_update_serial<T>(T*, const T*, T*, T*, std::size_t, T,   \
                                      T, T, T, T, T);

COURTLOC_INSTANTIATE_SERIAL(float)
COURTLOC_INSTANTIATE_SERIAL(double)

}  // namespace courtloc::kernels
