#include "courtloc/nn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "courtloc/kernels.hpp"
#include "courtloc/rng.hpp"

namespace courtloc::nn {

template <typename T>
std::size_t Mlp<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers) n += layer.w.size() + layer.b.size();
  return n;
}

namespace {

void check_dims(const std::vector<std::size_t>& dims) {
  if (dims.size() < 2)
    throw ShapeError("layer dims need at least input and output");
  for (std::size_t d : dims)
    if (d == 0) throw ShapeError("layer dims must be positive");
}

}  // namespace

template <typename T>
Mlp<T> make_mlp(const std::vector<std::size_t>& dims) {
  check_dims(dims);
  Mlp<T> model;
  model.dims = dims;
  model.layers.resize(dims.size() - 1);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    model.layers[l].w.assign(dims[l] * dims[l + 1], T{0});
    model.layers[l].b.assign(dims[l + 1], T{0});
  }
  return model;
}

template <typename T>
Mlp<T> init_he_uniform(const std::vector<std::size_t>& dims, std::uint64_t seed) {
  Mlp<T> model = make_mlp<T>(dims);
  Rng rng(seed);
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const double bound = std::sqrt(6.0 / static_cast<double>(dims[l]));
    for (T& w : model.layers[l].w)
      w = static_cast<T>(static_cast<float>(rng.uniform(-bound, bound)));
  }
  return model;
}

template <typename T>
void validate(const Mlp<T>& model) {
  check_dims(model.dims);
  if (model.layers.size() != model.dims.size() - 1)
    throw ShapeError("layer count does not match dims");
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    if (model.layers[l].w.size() != model.dims[l] * model.dims[l + 1] ||
        model.layers[l].b.size() != model.dims[l + 1])
      throw ShapeError("layer " + std::to_string(l) + " has inconsistent shape");
    for (T v : model.layers[l].w)
      if (!std::isfinite(static_cast<double>(v)))
        throw NumericError("non-finite weight in layer " + std::to_string(l));
    for (T v : model.layers[l].b)
      if (!std::isfinite(static_cast<double>(v)))
        throw NumericError("non-finite bias in layer " + std::to_string(l));
  }
}

template <typename T>
void forward_batch(const Mlp<T>& model, const T* X, std::size_t batch,
                   Activations<T>& acts) {
  const std::size_t levels = model.layers.size() + 1;
  acts.a.resize(levels);
  acts.a[0].assign(X, X + batch * model.dims[0]);
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const std::size_t in = model.dims[l];
    const std::size_t out = model.dims[l + 1];
    acts.a[l + 1].resize(batch * out);
    kernels::affine_forward(acts.a[l].data(), model.layers[l].w.data(),
                            model.layers[l].b.data(), acts.a[l + 1].data(),
                            batch, in, out);
    if (l + 1 < model.layers.size())
      kernels::relu(acts.a[l + 1].data(), acts.a[l + 1].size());
  }
}

template <typename T>
std::vector<T> forward(const Mlp<T>& model, std::span<const T> x) {
  if (x.size() != model.input_dim())
    throw ShapeError("forward: input length " + std::to_string(x.size()) +
                     " does not match model input dim " +
                     std::to_string(model.input_dim()));
  Activations<T> acts;
  forward_batch(model, x.data(), 1, acts);
  std::vector<T> y = acts.a.back();
  for (T v : y)
    if (!std::isfinite(static_cast<double>(v)))
      throw NumericError("forward produced a non-finite output");
  return y;
}

template <typename T>
T mse_loss(std::span<const T> pred, std::span<const T> target) {
  if (pred.size() != target.size() || pred.empty())
    throw ShapeError("mse_loss: prediction/target shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = static_cast<double>(pred[i]) - static_cast<double>(target[i]);
    acc += d * d;
  }
  return static_cast<T>(acc / static_cast<double>(pred.size()));
}

template <typename T>
Gradients<T> make_gradients(const Mlp<T>& model) {
  Gradients<T> grads;
  grads.layers.resize(model.layers.size());
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    grads.layers[l].w.assign(model.layers[l].w.size(), T{0});
    grads.layers[l].b.assign(model.layers[l].b.size(), T{0});
  }
  return grads;
}

template <typename T>
T backward(const Mlp<T>& model, const T* X, const T* Y, std::size_t batch,
           Gradients<T>& grads) {
  if (batch == 0) throw ShapeError("backward: empty batch");
  if (grads.layers.size() != model.layers.size())
    throw ShapeError("backward: gradient holder does not match model");
  Activations<T> acts;
  forward_batch(model, X, batch, acts);

  const std::size_t out_dim = model.output_dim();
  const std::size_t n_out = batch * out_dim;
  const T* pred = acts.a.back().data();
  std::vector<T> delta(n_out);
  double loss_acc = 0.0;
  const double scale = 2.0 / static_cast<double>(n_out);
  for (std::size_t i = 0; i < n_out; ++i) {
    const double d = static_cast<double>(pred[i]) - static_cast<double>(Y[i]);
    loss_acc += d * d;
    delta[i] = static_cast<T>(d * scale);
  }
  const double loss = loss_acc / static_cast<double>(n_out);
  if (!std::isfinite(loss)) throw NumericError("backward: non-finite loss");

  for (std::size_t l = model.layers.size(); l-- > 0;) {
    const std::size_t in = model.dims[l];
    const std::size_t out = model.dims[l + 1];
    kernels::affine_backward_params(acts.a[l].data(), delta.data(),
                                    grads.layers[l].w.data(),
                                    grads.layers[l].b.data(), batch, in, out);
    if (l > 0) {
      std::vector<T> prev_delta(batch * in);
      kernels::affine_backward_input(delta.data(), model.layers[l].w.data(),
                                     prev_delta.data(), batch, in, out);
      kernels::relu_backward(acts.a[l].data(), prev_delta.data(),
                             prev_delta.size());
      delta = std::move(prev_delta);
    }
  }
  for (const auto& layer : grads.layers) {
    for (T v : layer.w)
      if (!std::isfinite(static_cast<double>(v)))
        throw NumericError("backward: non-finite weight gradient");
    for (T v : layer.b)
      if (!std::isfinite(static_cast<double>(v)))
        throw NumericError("backward: non-finite bias gradient");
  }
  return static_cast<T>(loss);
}

template <typename T>
void input_gradients(const Mlp<T>& model, const T* X, std::size_t batch,
                     std::size_t output_index, T* dX) {
  if (output_index >= model.output_dim())
    throw ShapeError("input_gradients: output index out of range");
  Activations<T> acts;
  forward_batch(model, X, batch, acts);
  const std::size_t out_dim = model.output_dim();
  std::vector<T> delta(batch * out_dim, T{0});
  for (std::size_t b = 0; b < batch; ++b) delta[b * out_dim + output_index] = T{1};
  for (std::size_t l = model.layers.size(); l-- > 0;) {
    const std::size_t in = model.dims[l];
    const std::size_t out = model.dims[l + 1];
    std::vector<T> prev_delta(batch * in);
    kernels::affine_backward_input(delta.data(), model.layers[l].w.data(),
                                   prev_delta.data(), batch, in, out);
    if (l > 0)
      kernels::relu_backward(acts.a[l].data(), prev_delta.data(),
                             prev_delta.size());
    delta = std::move(prev_delta);
  }
  std::copy(delta.begin(), delta.end(), dX);
}

template <typename T>
AdamState<T> make_adam(const Mlp<T>& model, T alpha) {
  AdamState<T> state;
  state.alpha = alpha;
  state.m.resize(model.layers.size());
  state.v.resize(model.layers.size());
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    state.m[l].w.assign(model.layers[l].w.size(), T{0});
    state.m[l].b.assign(model.layers[l].b.size(), T{0});
    state.v[l].w.assign(model.layers[l].w.size(), T{0});
    state.v[l].b.assign(model.layers[l].b.size(), T{0});
  }
  return state;
}

template <typename T>
void adam_step(Mlp<T>& model, const Gradients<T>& grads, AdamState<T>& state) {
  if (grads.layers.size() != model.layers.size() ||
      state.m.size() != model.layers.size())
    throw ShapeError("adam_step: shape mismatch");
  state.t += 1;
  const T bc1 = static_cast<T>(1.0 - std::pow(static_cast<double>(state.beta1),
                                              static_cast<double>(state.t)));
  const T bc2 = static_cast<T>(1.0 - std::pow(static_cast<double>(state.beta2),
                                              static_cast<double>(state.t)));
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    kernels::adam_update(model.layers[l].w.data(), grads.layers[l].w.data(),
                         state.m[l].w.data(), state.v[l].w.data(),
                         model.layers[l].w.size(), state.alpha, state.beta1,
                         state.beta2, state.eps, bc1, bc2);
    kernels::adam_update(model.layers[l].b.data(), grads.layers[l].b.data(),
                         state.m[l].b.data(), state.v[l].b.data(),
                         model.layers[l].b.size(), state.alpha, state.beta1,
                         state.beta2, state.eps, bc1, bc2);
  }
}

namespace {

void check_data_view(const DataView& data) {
  if (data.count == 0) throw ShapeError("dataset is empty");
  if (data.features == nullptr || data.targets == nullptr)
    throw ShapeError("dataset view has null storage");
}

}  // namespace

template <typename T>
std::vector<double> train(Mlp<T>& model, const DataView& data,
                          const TrainConfig& cfg) {
  check_data_view(data);
  if (data.input_dim != model.input_dim() || data.output_dim != model.output_dim())
    throw ShapeError("train: dataset dims do not match model dims");
  if (cfg.epochs < 1 || cfg.batch_size < 1)
    throw DomainError("train: epochs and batch_size must be >= 1");

  const std::size_t n = data.count;
  const std::size_t in = data.input_dim;
  const std::size_t out = data.output_dim;
  const std::size_t bs = static_cast<std::size_t>(cfg.batch_size);

  Gradients<T> grads = make_gradients(model);
  AdamState<T> state = make_adam(model, static_cast<T>(cfg.learning_rate));
  Rng shuffle_rng(cfg.shuffle_seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<T> Xb(bs * in);
  std::vector<T> Yb(bs * out);
  std::vector<double> curve;
  curve.reserve(static_cast<std::size_t>(cfg.epochs));

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(order, shuffle_rng);
    double loss_sum = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < n; start += bs) {
      const std::size_t b = std::min(bs, n - start);
      for (std::size_t j = 0; j < b; ++j) {
        const std::size_t idx = order[start + j];
        const float* src = data.features + idx * in;
        T* dst = Xb.data() + j * in;
        for (std::size_t k = 0; k < in; ++k) dst[k] = static_cast<T>(src[k]);
        const double* tgt = data.targets + idx * out;
        for (std::size_t k = 0; k < out; ++k)
          Yb[j * out + k] = static_cast<T>(tgt[k]);
      }
      const T loss = backward(model, Xb.data(), Yb.data(), b, grads);
      adam_step(model, grads, state);
      loss_sum += static_cast<double>(loss) * static_cast<double>(b);
      seen += b;
    }
    curve.push_back(loss_sum / static_cast<double>(seen));
  }
  return curve;
}

template <typename T>
EvalResult evaluate(const Mlp<T>& model, const DataView& data) {
  check_data_view(data);
  if (data.input_dim != model.input_dim())
    throw ShapeError("evaluate: dataset input dim does not match model");
  if (model.output_dim() != 2 || data.output_dim != 2)
    throw ShapeError("evaluate: per-axis metrics require 2 outputs");

  const std::size_t n = data.count;
  const std::size_t in = data.input_dim;
  const std::size_t chunk = 64;
  std::vector<T> Xb(chunk * in);
  Activations<T> acts;
  double abs_x = 0.0, abs_y = 0.0, sq = 0.0;
  for (std::size_t start = 0; start < n; start += chunk) {
    const std::size_t b = std::min(chunk, n - start);
    for (std::size_t j = 0; j < b; ++j) {
      const float* src = data.features + (start + j) * in;
      T* dst = Xb.data() + j * in;
      for (std::size_t k = 0; k < in; ++k) dst[k] = static_cast<T>(src[k]);
    }
    forward_batch(model, Xb.data(), b, acts);
    const T* pred = acts.a.back().data();
    for (std::size_t j = 0; j < b; ++j) {
      const double px = static_cast<double>(pred[j * 2]);
      const double py = static_cast<double>(pred[j * 2 + 1]);
      if (!std::isfinite(px) || !std::isfinite(py))
        throw NumericError("evaluate: non-finite prediction");
      const double tx = data.targets[(start + j) * 2];
      const double ty = data.targets[(start + j) * 2 + 1];
      abs_x += std::abs(px - tx);
      abs_y += std::abs(py - ty);
      sq += (px - tx) * (px - tx) + (py - ty) * (py - ty);
    }
  }
  EvalResult result;
  result.x_loss = abs_x / static_cast<double>(n);
  result.y_loss = abs_y / static_cast<double>(n);
  result.mse = sq / static_cast<double>(2 * n);
  return result;
}

namespace {

constexpr char kMagic[4] = {'F', 'L', 'O', 'C'};
constexpr std::uint16_t kVersion = 1;

void put_bytes(std::ostream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void put_u16(std::ostream& out, std::uint16_t v) {
  const unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                              static_cast<unsigned char>(v >> 8)};
  put_bytes(out, b, 2);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                              static_cast<unsigned char>((v >> 8) & 0xff),
                              static_cast<unsigned char>((v >> 16) & 0xff),
                              static_cast<unsigned char>((v >> 24) & 0xff)};
  put_bytes(out, b, 4);
}

void put_f32(std::ostream& out, float v) {
  put_u32(out, std::bit_cast<std::uint32_t>(v));
}

bool get_u16(std::istream& in, std::uint16_t& v) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  if (in.gcount() != 2) return false;
  v = static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  return true;
}

bool get_u32(std::istream& in, std::uint32_t& v) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (in.gcount() != 4) return false;
  v = static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
      (static_cast<std::uint32_t>(b[2]) << 16) |
      (static_cast<std::uint32_t>(b[3]) << 24);
  return true;
}

bool get_f32(std::istream& in, float& v) {
  std::uint32_t u;
  if (!get_u32(in, u)) return false;
  v = std::bit_cast<float>(u);
  return true;
}

std::vector<std::size_t> read_header(std::istream& in, const std::string& name) {
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0)
    throw CheckpointError(name + ": bad magic bytes");
  std::uint16_t version = 0, layer_count = 0;
  if (!get_u16(in, version) || !get_u16(in, layer_count))
    throw CheckpointError(name + ": truncated header");
  if (version != kVersion)
    throw CheckpointError(name + ": unsupported version " +
                          std::to_string(version));
  if (layer_count == 0) throw CheckpointError(name + ": zero layers");
  std::vector<std::size_t> dims(static_cast<std::size_t>(layer_count) + 1);
  for (auto& d : dims) {
    std::uint32_t v;
    if (!get_u32(in, v)) throw CheckpointError(name + ": truncated dims");
    if (v == 0) throw CheckpointError(name + ": zero dimension");
    d = v;
  }
  return dims;
}

}  // namespace

template <typename T>
void save_checkpoint(const Mlp<T>& model, const std::filesystem::path& path) {
  validate(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path.string());
  put_bytes(out, kMagic, 4);
  put_u16(out, kVersion);
  put_u16(out, static_cast<std::uint16_t>(model.layers.size()));
  for (std::size_t d : model.dims) put_u32(out, static_cast<std::uint32_t>(d));
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const std::size_t in = model.dims[l];
    const std::size_t out_dim = model.dims[l + 1];
    const auto& layer = model.layers[l];
    // Serialized row-major (out x in); storage is input-major.
    for (std::size_t o = 0; o < out_dim; ++o)
      for (std::size_t i = 0; i < in; ++i)
        put_f32(out, static_cast<float>(layer.w[i * out_dim + o]));
    for (std::size_t o = 0; o < out_dim; ++o)
      put_f32(out, static_cast<float>(layer.b[o]));
  }
  if (!out) throw IoError("failed to write checkpoint: " + path.string());
}

template <typename T>
Mlp<T> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());
  const std::vector<std::size_t> dims = read_header(in, path.string());
  Mlp<T> model = make_mlp<T>(dims);
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const std::size_t in_dim = dims[l];
    const std::size_t out_dim = dims[l + 1];
    auto& layer = model.layers[l];
    for (std::size_t o = 0; o < out_dim; ++o)
      for (std::size_t i = 0; i < in_dim; ++i) {
        float v;
        if (!get_f32(in, v))
          throw CheckpointError(path.string() + ": truncated weights");
        layer.w[i * out_dim + o] = static_cast<T>(v);
      }
    for (std::size_t o = 0; o < out_dim; ++o) {
      float v;
      if (!get_f32(in, v))
        throw CheckpointError(path.string() + ": truncated biases");
      layer.b[o] = static_cast<T>(v);
    }
  }
  if (in.get() != std::istream::traits_type::eof())
    throw CheckpointError(path.string() + ": trailing bytes after parameters");
  validate(model);
  return model;
}

std::vector<std::size_t> checkpoint_dims(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());
  return read_header(in, path.string());
}

std::uint64_t checkpoint_payload_bytes(const std::vector<std::size_t>& dims) {
  check_dims(dims);
  std::uint64_t params = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l)
    params += static_cast<std::uint64_t>(dims[l]) * dims[l + 1] + dims[l + 1];
  return 4 * params;
}

#define COURTLOC_INSTANTIATE_NN(T)                                             \
  template struct Mlp<T>;                                                      \
  template Mlp<T> make_mlp<T>(const std::vector<std::size_t>&);                \
  template Mlp<T> init_he_uniform<T>(const std::vector<std::size_t>&,          \
                                     std::uint64_t);                           \
  template void validate<T>(const Mlp<T>&);                                    \
  template void forward_batch<T>(const Mlp<T>&, const T*, std::size_t,         \
                                 Activations<T>&);                             \
  template std::vector<T> forward<T>(const Mlp<T>&, std::span<const T>);       \
  template T mse_loss<T>(std::span<const T>, std::span<const T>);              \
  template Gradients<T> make_gradients<T>(const Mlp<T>&);                      \
  template T backward<T>(const Mlp<T>&, const T*, const T*, std::size_t,       \
                         Gradients<T>&);                                       \
  template void input_gradients<T>(const Mlp<T>&, const T*, std::size_t,       \
                                   std::size_t, T*);                           \
  template AdamState<T> make_adam<T>(const Mlp<T>&, T);                        \
  template void adam_step<T>(Mlp<T>&, const Gradients<T>&, AdamState<T>&);     \
  template std::vector<double> train<T>(Mlp<T>&, const DataView&,              \
                                        const TrainConfig&);                   \
  template EvalResult evaluate<T>(const Mlp<T>&, const DataView&);             \
  template void save_checkpoint<T>(const Mlp<T>&,                              \
                                   const std::filesystem::path&);              \
  template Mlp<T> load_checkpoint<T>(const std::filesystem::path&);

COURTLOC_INSTANTIATE_NN(float)
COURTLOC_INSTANTIATE_NN(double)

}  // namespace courtloc::nn
