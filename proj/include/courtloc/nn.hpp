#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "courtloc/errors.hpp"

namespace courtloc::nn {

// Weights are stored input-major: w[i * out + o]. Checkpoints serialize the
// transposed (out x in, row-major) layout.
template <typename T>
struct LayerParams {
  std::vector<T> w;
  std::vector<T> b;
};

// Fully connected ReLU stack; the last layer is affine with no activation.
template <typename T>
struct Mlp {
  std::vector<std::size_t> dims;  // [input, hidden..., output]
  std::vector<LayerParams<T>> layers;

  std::size_t input_dim() const { return dims.front(); }
  std::size_t output_dim() const { return dims.back(); }
  std::size_t layer_count() const { return layers.size(); }
  std::size_t parameter_count() const;
};

template <typename T>
Mlp<T> make_mlp(const std::vector<std::size_t>& dims);  // zero-initialized

// He-uniform weights (bound sqrt(6/fan_in)), zero biases. Values are drawn
// as 32-bit floats so checkpoints round-trip bitwise in either precision.
template <typename T>
Mlp<T> init_he_uniform(const std::vector<std::size_t>& dims, std::uint64_t seed);

template <typename T>
void validate(const Mlp<T>& model);

// Per-layer post-activation values for a batch; a[0] is the input.
template <typename T>
struct Activations {
  std::vector<std::vector<T>> a;
};

template <typename T>
void forward_batch(const Mlp<T>& model, const T* X, std::size_t batch,
                   Activations<T>& acts);

template <typename T>
std::vector<T> forward(const Mlp<T>& model, std::span<const T> x);

template <typename T>
T mse_loss(std::span<const T> pred, std::span<const T> target);

template <typename T>
struct Gradients {
  std::vector<LayerParams<T>> layers;
};

template <typename T>
Gradients<T> make_gradients(const Mlp<T>& model);

// Analytic gradients of mse_loss(forward(X), Y) for every parameter.
// Returns the batch loss.
template <typename T>
T backward(const Mlp<T>& model, const T* X, const T* Y, std::size_t batch,
           Gradients<T>& grads);

// d output[output_index] / d input for every sample of a batch (used by the
// attribution module). dX has batch * input_dim entries.
template <typename T>
void input_gradients(const Mlp<T>& model, const T* X, std::size_t batch,
                     std::size_t output_index, T* dX);

template <typename T>
struct AdamState {
  std::vector<LayerParams<T>> m;
  std::vector<LayerParams<T>> v;
  long long t = 0;
  T alpha = T(1e-4);
  T beta1 = T(0.9);
  T beta2 = T(0.999);
  T eps = T(1e-8);
};

template <typename T>
AdamState<T> make_adam(const Mlp<T>& model, T alpha = T(1e-4));

template <typename T>
void adam_step(Mlp<T>& model, const Gradients<T>& grads, AdamState<T>& state);

struct TrainConfig {
  int epochs = 15;
  int batch_size = 8;
  std::uint64_t shuffle_seed = 0;
  double learning_rate = 1e-4;
};

// Non-owning view of a dataset: features as float32, targets as float64,
// both row-major.
struct DataView {
  std::size_t count = 0;
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
  const float* features = nullptr;
  const double* targets = nullptr;
};

// Seeded per-epoch shuffling, mini-batches of batch_size (final partial batch
// included), Adam updates. Returns the mean training loss per epoch.
template <typename T>
std::vector<double> train(Mlp<T>& model, const DataView& data,
                          const TrainConfig& cfg);

struct EvalResult {
  double x_loss = 0.0;  // mean |x_hat - x|, meters
  double y_loss = 0.0;  // mean |y_hat - y|, meters
  double mse = 0.0;     // mean squared error over all outputs
};

template <typename T>
EvalResult evaluate(const Mlp<T>& model, const DataView& data);

// Checkpoint: "FLOC", u16 version, u16 layer count, u32 dims, then per layer
// the (out x in) row-major weights and biases as little-endian float32.
template <typename T>
void save_checkpoint(const Mlp<T>& model, const std::filesystem::path& path);

template <typename T>
Mlp<T> load_checkpoint(const std::filesystem::path& path);

// Header-only peek at a checkpoint's layer dims.
std::vector<std::size_t> checkpoint_dims(const std::filesystem::path& path);

// Parameter payload size in bytes (excluding the header).
std::uint64_t checkpoint_payload_bytes(const std::vector<std::size_t>& dims);

extern template struct Mlp<float>;
extern template struct Mlp<double>;

}  // namespace courtloc::nn
