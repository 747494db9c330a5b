#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "image_io.hpp"

namespace fresh {

// Frequency embeddings. Larger parameter values mean higher embedding frequencies.
struct SirenEmbedding {
  double omega0 = 30.0;  // sin(omega0 * W x + b)
};
struct FourierEmbedding {
  double sigma = 10.0;  // [sin(2 pi W x), cos(2 pi W x)], W ~ N(0, sigma^2)
};
struct FinerEmbedding {
  double omega = 30.0;  // phi(omega (W x + b)), phi(t) = sin((|t| + 1) t)
  double k = 0.0;       // b ~ U(-k, k); k = 0 removes the bias
};
using EmbeddingConfig = std::variant<SirenEmbedding, FourierEmbedding, FinerEmbedding>;

void validate(const EmbeddingConfig& config);
std::string describe(const EmbeddingConfig& config);
std::string family_name(const EmbeddingConfig& config);

// Adam learning rate used when none is given: 1e-4 for sine networks, 1e-3 for Fourier features.
double default_learning_rate(const EmbeddingConfig& config);

struct Architecture {
  int hidden_layers = 3;
  int width = 256;
  // Scale of the sine hidden layers, sin(hidden_omega (W h + b)). Independent
  // of the embedding hyperparameter being tuned.
  double hidden_omega = 30.0;
};

enum class Activation {
  sine,    // sin(z)
  finer,   // sin((|z| + 1) z)
  sincos,  // [sin(z); cos(z)], doubles the row count
  relu,
  linear,
};

// z = weight_scale * (W h) + bias_scale * b, followed by the activation.
struct LayerShape {
  int out = 0;
  int in = 0;
  std::size_t weight_offset = 0;
  std::size_t bias_offset = 0;
  bool has_bias = true;
  Activation activation = Activation::linear;
  double weight_scale = 1.0;
  double bias_scale = 1.0;

  int output_rows() const { return activation == Activation::sincos ? 2 * out : out; }
};

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

// All trainable values live in one flat vector; layers are views into it.
// The first `frozen` entries are excluded from optimizer updates (the Fourier
// frequency matrix, which is a fixed random projection).
template <typename T>
struct InrModel {
  EmbeddingConfig config;
  Architecture arch;
  int channels = 0;
  std::vector<LayerShape> layers;
  std::vector<T> params;
  std::size_t frozen = 0;

  using WeightMap = Eigen::Map<Matrix<T>>;
  using ConstWeightMap = Eigen::Map<const Matrix<T>>;
  using BiasMap = Eigen::Map<Eigen::Vector<T, Eigen::Dynamic>>;
  using ConstBiasMap = Eigen::Map<const Eigen::Vector<T, Eigen::Dynamic>>;

  WeightMap weights(std::size_t l) {
    return {params.data() + layers[l].weight_offset, layers[l].out, layers[l].in};
  }
  ConstWeightMap weights(std::size_t l) const {
    return {params.data() + layers[l].weight_offset, layers[l].out, layers[l].in};
  }
  BiasMap bias(std::size_t l) {
    return {params.data() + layers[l].bias_offset, layers[l].has_bias ? layers[l].out : 0};
  }
  ConstBiasMap bias(std::size_t l) const {
    return {params.data() + layers[l].bias_offset, layers[l].has_bias ? layers[l].out : 0};
  }
};

template <typename T>
InrModel<T> init_model(const EmbeddingConfig& config, const Architecture& arch, int channels,
                       std::uint64_t seed);

// Lay out an uninitialized (zero) model; used by init_model and checkpoint loading.
template <typename T>
InrModel<T> make_model_layout(const EmbeddingConfig& config, const Architecture& arch,
                              int channels);

template <typename U, typename T>
InrModel<U> model_cast(const InrModel<T>& model) {
  InrModel<U> out{model.config, model.arch, model.channels, model.layers, {}, model.frozen};
  out.params.assign(model.params.begin(), model.params.end());
  return out;
}

// 2 x B matrix of coordinates; column i holds coords[i].
template <typename T>
Matrix<T> coords_matrix(const CoordGrid& grid);
// channels x B matrix of targets, column i = pixel i in row-major order.
template <typename T>
Matrix<T> targets_matrix(const Image& image);

// Embedding layer output for a 2 x B batch.
template <typename T>
Matrix<T> embed(const InrModel<T>& model, const Matrix<T>& x);

// channels x B predictions; the output layer is linear.
template <typename T>
Matrix<T> forward(const InrModel<T>& model, const Matrix<T>& x);

// Evaluates the model on the height x width coordinate grid.
template <typename T>
Image render(const InrModel<T>& model, int height, int width);

template <typename T>
struct LossAndGrads {
  double loss = 0.0;     // mean over batch and channels
  std::vector<T> grads;  // same layout as InrModel::params
};

template <typename T>
LossAndGrads<T> loss_and_grads(const InrModel<T>& model, const Matrix<T>& x,
                               const Matrix<T>& targets);

// Batch-sized buffers reused by consecutive loss_and_grads calls.
template <typename T>
struct Workspace {
  std::vector<Matrix<T>> acts;    // output of each layer
  std::vector<Matrix<T>> derivs;  // activation derivative of each layer
  Matrix<T> grad_a;
  Matrix<T> grad_z;
  // Aligned staging for parameter gradients. Reductions written straight into
  // the flat gradient vector would round differently depending on its address.
  Matrix<T> grad_w;
  Eigen::Vector<T, Eigen::Dynamic> grad_b;
};

// Same as above, writing the gradients into `grads` and returning the loss.
template <typename T>
double loss_and_grads(const InrModel<T>& model, const Matrix<T>& x, const Matrix<T>& targets,
                      std::vector<T>& grads, Workspace<T>& ws);

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

template <typename T>
struct AdamState {
  AdamConfig hp;
  std::vector<T> m;
  std::vector<T> v;
  long step = 0;
};

template <typename T>
AdamState<T> make_adam_state(const InrModel<T>& model, const AdamConfig& hp);

template <typename T>
void adam_step(InrModel<T>& model, std::span<const T> grads, AdamState<T>& state);

// Per-row frequency magnitude of the embedding: omega0 ||w_i|| (Siren),
// omega ||w_i|| (Finer), 2 pi ||w_i|| (Fourier).
template <typename T>
std::vector<double> frequency_magnitudes(const InrModel<T>& model);

// Checkpoints are JSON; see docs/checkpoint.md for the layout.
void save_checkpoint(const InrModel<double>& model, const std::filesystem::path& path);
InrModel<double> load_checkpoint(const std::filesystem::path& path);

}  // namespace fresh
