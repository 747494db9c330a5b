#include "inr.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "error.hpp"
#include "json.hpp"

namespace fresh {

void validate(const EmbeddingConfig& config) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  std::visit(
      [&](const auto& e) {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, SirenEmbedding>) {
          if (!positive(e.omega0)) throw InvalidArgument("siren: omega0 must be positive");
        } else if constexpr (std::is_same_v<E, FourierEmbedding>) {
          if (!positive(e.sigma)) throw InvalidArgument("fourier: sigma must be positive");
        } else {
          if (!positive(e.omega)) throw InvalidArgument("finer: omega must be positive");
          if (!std::isfinite(e.k) || e.k < 0.0) throw InvalidArgument("finer: k must be >= 0");
        }
      },
      config);
}

std::string family_name(const EmbeddingConfig& config) {
  switch (config.index()) {
    case 0: return "siren";
    case 1: return "fourier";
    default: return "finer";
  }
}

std::string describe(const EmbeddingConfig& config) {
  return std::visit(
      [](const auto& e) -> std::string {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, SirenEmbedding>)
          return fmt::format("siren(omega0={})", e.omega0);
        else if constexpr (std::is_same_v<E, FourierEmbedding>)
          return fmt::format("fourier(sigma={})", e.sigma);
        else
          return fmt::format("finer(omega={}, k={})", e.omega, e.k);
      },
      config);
}

double default_learning_rate(const EmbeddingConfig& config) {
  return std::holds_alternative<FourierEmbedding>(config) ? 1e-3 : 1e-4;
}

template <typename T>
InrModel<T> make_model_layout(const EmbeddingConfig& config, const Architecture& arch,
                              int channels) {
  validate(config);
  if (arch.width < 1) throw InvalidArgument("architecture width must be >= 1");
  if (arch.hidden_layers < 1) throw InvalidArgument("architecture needs at least one hidden layer");
  if (!(arch.hidden_omega > 0.0)) throw InvalidArgument("hidden_omega must be positive");
  if (channels != 1 && channels != 3) throw InvalidArgument("channels must be 1 or 3");

  InrModel<T> model;
  model.config = config;
  model.arch = arch;
  model.channels = channels;

  std::size_t offset = 0;
  auto add = [&](int out, int in, bool has_bias, Activation act, double ws, double bs) {
    LayerShape layer{out, in, offset, 0, has_bias, act, ws, bs};
    offset += static_cast<std::size_t>(out) * in;
    layer.bias_offset = offset;
    if (has_bias) offset += out;
    model.layers.push_back(layer);
  };

  Activation hidden_act = Activation::sine;
  double hidden_scale = arch.hidden_omega;
  if (const auto* s = std::get_if<SirenEmbedding>(&config)) {
    add(arch.width, 2, true, Activation::sine, s->omega0, 1.0);
  } else if (const auto* f = std::get_if<FourierEmbedding>(&config)) {
    add(arch.width, 2, false, Activation::sincos, 2.0 * std::numbers::pi, 1.0);
    model.frozen = static_cast<std::size_t>(arch.width) * 2;
    hidden_act = Activation::relu;
    hidden_scale = 1.0;
    (void)f;
  } else {
    const auto& e = std::get<FinerEmbedding>(config);
    add(arch.width, 2, e.k > 0.0, Activation::finer, e.omega, e.omega);
    hidden_act = Activation::finer;
  }
  for (int l = 0; l < arch.hidden_layers; ++l)
    add(arch.width, model.layers.back().output_rows(), true, hidden_act, hidden_scale, hidden_scale);
  add(channels, arch.width, true, Activation::linear, 1.0, 1.0);

  model.params.assign(offset, T(0));
  return model;
}

template <typename T>
InrModel<T> init_model(const EmbeddingConfig& config, const Architecture& arch, int channels,
                       std::uint64_t seed) {
  InrModel<T> model = make_model_layout<T>(config, arch, channels);
  std::mt19937_64 rng(seed);
  auto fill_uniform = [&](T* data, std::size_t count, double bound) {
    std::uniform_real_distribution<double> u(-bound, bound);
    for (std::size_t i = 0; i < count; ++i) data[i] = static_cast<T>(u(rng));
  };

  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const LayerShape& layer = model.layers[l];
    T* w = model.params.data() + layer.weight_offset;
    T* b = model.params.data() + layer.bias_offset;
    const std::size_t wcount = static_cast<std::size_t>(layer.out) * layer.in;
    const double fan_in = layer.in;
    if (l == 0) {
      if (const auto* f = std::get_if<FourierEmbedding>(&config)) {
        std::normal_distribution<double> normal(0.0, f->sigma);
        for (std::size_t i = 0; i < wcount; ++i) w[i] = static_cast<T>(normal(rng));
      } else {
        // U[-1/d, 1/d] with d = 2 input dimensions.
        fill_uniform(w, wcount, 1.0 / fan_in);
        if (layer.has_bias) {
          if (const auto* fin = std::get_if<FinerEmbedding>(&config))
            fill_uniform(b, layer.out, fin->k);
          else
            fill_uniform(b, layer.out, std::numbers::pi);  // phase of the Siren embedding
        }
      }
      continue;
    }
    const bool periodic = !std::holds_alternative<FourierEmbedding>(config);
    const double wbound = periodic ? std::sqrt(6.0 / fan_in) / arch.hidden_omega
                                   : 1.0 / std::sqrt(fan_in);
    fill_uniform(w, wcount, wbound);
    if (layer.has_bias) fill_uniform(b, layer.out, 1.0 / std::sqrt(fan_in));
  }
  return model;
}

template <typename T>
Matrix<T> coords_matrix(const CoordGrid& grid) {
  Matrix<T> x(2, static_cast<Eigen::Index>(grid.coords.size()));
  for (std::size_t i = 0; i < grid.coords.size(); ++i) {
    x(0, i) = static_cast<T>(grid.coords[i][0]);
    x(1, i) = static_cast<T>(grid.coords[i][1]);
  }
  return x;
}

template <typename T>
Matrix<T> targets_matrix(const Image& image) {
  Matrix<T> y(image.channels, static_cast<Eigen::Index>(image.pixel_count()));
  for (int c = 0; c < image.channels; ++c) {
    const auto src = image.channel(c);
    for (std::size_t i = 0; i < src.size(); ++i) y(c, i) = static_cast<T>(src[i]);
  }
  return y;
}

namespace {

// Writes layer l applied to h into `out`. When `deriv` is non-null it receives
// the elementwise activation derivative needed by the backward pass. Buffers
// keep their allocation between calls of the same batch size.
template <typename T>
void layer_forward(const InrModel<T>& model, std::size_t l, const Matrix<T>& h, Matrix<T>& out,
                   Matrix<T>* deriv, Matrix<T>& scratch) {
  const LayerShape& layer = model.layers[l];
  const Matrix<T> scaled_w = T(layer.weight_scale) * model.weights(l);
  Matrix<T>& z = layer.activation == Activation::sincos ? scratch : out;
  z.resize(layer.out, h.cols());
  z.noalias() = scaled_w * h;
  if (layer.has_bias) {
    const Eigen::Vector<T, Eigen::Dynamic> scaled_b = T(layer.bias_scale) * model.bias(l);
    z.colwise() += scaled_b;
  }
  if (deriv && layer.activation != Activation::linear && layer.activation != Activation::sincos)
    deriv->resize(z.rows(), z.cols());

  auto a = z.array();
  switch (layer.activation) {
    case Activation::linear:
      break;
    case Activation::sine:
      if (deriv) deriv->array() = a.cos();
      a = a.sin();
      break;
    case Activation::finer:
      if (deriv) deriv->array() = ((a.abs() + T(1)) * a).cos() * (T(2) * a.abs() + T(1));
      a = ((a.abs() + T(1)) * a).sin();
      break;
    case Activation::relu:
      if (deriv) deriv->array() = (a > T(0)).template cast<T>();
      a = a.max(T(0));
      break;
    case Activation::sincos:
      out.resize(2 * layer.out, h.cols());
      out.topRows(layer.out).array() = a.sin();
      out.bottomRows(layer.out).array() = a.cos();
      break;
  }
}

// Forward pass through layers 0..stop_after; returns the last activation.
template <typename T>
const Matrix<T>& run_forward(const InrModel<T>& model, const Matrix<T>& x, Workspace<T>& ws,
                             bool keep_derivs, std::size_t stop_after) {
  if (x.rows() != 2) throw InvalidArgument("coordinates must be a 2 x B matrix");
  ws.acts.resize(model.layers.size());
  ws.derivs.resize(model.layers.size());
  for (std::size_t l = 0; l <= stop_after; ++l) {
    const Matrix<T>& h = l == 0 ? x : ws.acts[l - 1];
    layer_forward(model, l, h, ws.acts[l], keep_derivs ? &ws.derivs[l] : nullptr, ws.grad_a);
  }
  return ws.acts[stop_after];
}

}  // namespace

template <typename T>
Matrix<T> embed(const InrModel<T>& model, const Matrix<T>& x) {
  Workspace<T> ws;
  return run_forward<T>(model, x, ws, false, 0);
}

template <typename T>
Matrix<T> forward(const InrModel<T>& model, const Matrix<T>& x) {
  Workspace<T> ws;
  return run_forward<T>(model, x, ws, false, model.layers.size() - 1);
}

template <typename T>
Image render(const InrModel<T>& model, int height, int width) {
  const CoordGrid grid = make_coord_grid(height, width);
  const Matrix<T> x = coords_matrix<T>(grid);
  Image out(model.channels, height, width);
  Workspace<T> ws;
  constexpr Eigen::Index chunk = 1 << 16;
  for (Eigen::Index start = 0; start < x.cols(); start += chunk) {
    const Eigen::Index count = std::min(chunk, x.cols() - start);
    const Matrix<T> xs = x.middleCols(start, count);
    const Matrix<T>& y = run_forward<T>(model, xs, ws, false, model.layers.size() - 1);
    for (int c = 0; c < model.channels; ++c) {
      auto dst = out.channel(c);
      for (Eigen::Index i = 0; i < count; ++i) dst[start + i] = static_cast<double>(y(c, i));
    }
  }
  return out;
}

template <typename T>
double loss_and_grads(const InrModel<T>& model, const Matrix<T>& x, const Matrix<T>& targets,
                      std::vector<T>& grads, Workspace<T>& ws) {
  if (targets.rows() != model.channels || targets.cols() != x.cols())
    throw InvalidArgument("loss_and_grads: targets must be channels x B, aligned with coords");

  const std::size_t last = model.layers.size() - 1;
  const Matrix<T>& y = run_forward<T>(model, x, ws, true, last);

  Matrix<T>* da = &ws.grad_a;
  Matrix<T>* dz = &ws.grad_z;
  *da = y - targets;
  const double count = static_cast<double>(da->size());
  const double loss = da->template cast<double>().squaredNorm() / count;
  *da *= T(2.0 / count);
  grads.assign(model.params.size(), T(0));

  for (std::size_t l = last + 1; l-- > 0;) {
    const LayerShape& layer = model.layers[l];
    const Matrix<T>& h = l == 0 ? x : ws.acts[l - 1];

    switch (layer.activation) {
      case Activation::linear:
        std::swap(da, dz);
        break;
      case Activation::sincos: {
        // d sin = cos dz, d cos = -sin dz; the layer output holds both.
        const Matrix<T>& a = ws.acts[l];
        dz->resize(layer.out, da->cols());
        dz->array() = da->topRows(layer.out).array() * a.bottomRows(layer.out).array() -
                      da->bottomRows(layer.out).array() * a.topRows(layer.out).array();
        break;
      }
      default:
        da->array() *= ws.derivs[l].array();
        std::swap(da, dz);
        break;
    }

    ws.grad_w.resize(layer.out, layer.in);
    ws.grad_w.noalias() = *dz * h.transpose();
    Eigen::Map<Matrix<T>>(grads.data() + layer.weight_offset, layer.out, layer.in) =
        T(layer.weight_scale) * ws.grad_w;
    if (layer.has_bias) {
      ws.grad_b = dz->rowwise().sum();
      Eigen::Map<Eigen::Vector<T, Eigen::Dynamic>>(grads.data() + layer.bias_offset, layer.out) =
          T(layer.bias_scale) * ws.grad_b;
    }
    if (l > 0) {
      const Matrix<T> scaled_wt = T(layer.weight_scale) * model.weights(l).transpose();
      da->resize(layer.in, dz->cols());
      da->noalias() = scaled_wt * *dz;
    }
  }
  return loss;
}

template <typename T>
LossAndGrads<T> loss_and_grads(const InrModel<T>& model, const Matrix<T>& x,
                               const Matrix<T>& targets) {
  Workspace<T> ws;
  LossAndGrads<T> result;
  result.loss = loss_and_grads(model, x, targets, result.grads, ws);
  return result;
}

template <typename T>
AdamState<T> make_adam_state(const InrModel<T>& model, const AdamConfig& hp) {
  AdamState<T> state;
  state.hp = hp;
  state.m.assign(model.params.size(), T(0));
  state.v.assign(model.params.size(), T(0));
  return state;
}

template <typename T>
void adam_step(InrModel<T>& model, std::span<const T> grads, AdamState<T>& state) {
  if (grads.size() != model.params.size() || state.m.size() != model.params.size() ||
      state.v.size() != model.params.size())
    throw InvalidArgument("adam_step: gradient/state shape does not match the model");
  state.step += 1;
  const auto& hp = state.hp;
  const T b1 = T(hp.beta1);
  const T b2 = T(hp.beta2);
  const T correction1 = T(1.0 - std::pow(hp.beta1, static_cast<double>(state.step)));
  const T correction2 = T(1.0 - std::pow(hp.beta2, static_cast<double>(state.step)));
  const T lr = T(hp.learning_rate);
  const T eps = T(hp.epsilon);
  for (std::size_t i = model.frozen; i < model.params.size(); ++i) {
    const T g = grads[i];
    state.m[i] = b1 * state.m[i] + (T(1) - b1) * g;
    state.v[i] = b2 * state.v[i] + (T(1) - b2) * g * g;
    const T m_hat = state.m[i] / correction1;
    const T v_hat = state.v[i] / correction2;
    model.params[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

template <typename T>
std::vector<double> frequency_magnitudes(const InrModel<T>& model) {
  const auto w = model.weights(0);
  const double scale = model.layers[0].weight_scale;
  std::vector<double> out(static_cast<std::size_t>(w.rows()));
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    out[i] = scale * w.row(i).template cast<double>().norm();
  return out;
}

namespace {

using nlohmann::json;

json config_to_json(const EmbeddingConfig& config) {
  return std::visit(
      [](const auto& e) -> json {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, SirenEmbedding>)
          return {{"family", "siren"}, {"omega0", e.omega0}};
        else if constexpr (std::is_same_v<E, FourierEmbedding>)
          return {{"family", "fourier"}, {"sigma", e.sigma}};
        else
          return {{"family", "finer"}, {"omega", e.omega}, {"k", e.k}};
      },
      config);
}

EmbeddingConfig config_from_json(const json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "siren") return SirenEmbedding{j.at("omega0").get<double>()};
  if (family == "fourier") return FourierEmbedding{j.at("sigma").get<double>()};
  if (family == "finer") return FinerEmbedding{j.at("omega").get<double>(), j.at("k").get<double>()};
  throw IoError("checkpoint: unknown embedding family '" + family + "'");
}

std::string layer_name(std::size_t l, std::size_t count) {
  if (l == 0) return "embedding";
  if (l + 1 == count) return "output";
  return "hidden_" + std::to_string(l);
}

constexpr int kCheckpointVersion = 1;

}  // namespace

void save_checkpoint(const InrModel<double>& model, const std::filesystem::path& path) {
  json layers = json::array();
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const LayerShape& layer = model.layers[l];
    const auto w = model.weights(l);
    std::vector<double> weights;
    weights.reserve(static_cast<std::size_t>(layer.out) * layer.in);
    for (int r = 0; r < layer.out; ++r)
      for (int c = 0; c < layer.in; ++c) weights.push_back(w(r, c));
    const auto b = model.bias(l);
    layers.push_back({{"name", layer_name(l, model.layers.size())},
                      {"rows", layer.out},
                      {"cols", layer.in},
                      {"weights", weights},
                      {"bias", std::vector<double>(b.data(), b.data() + b.size())}});
  }
  const json doc = {
      {"format", "fresh-inr-checkpoint"},
      {"version", kCheckpointVersion},
      {"embedding", config_to_json(model.config)},
      {"architecture",
       {{"hidden_layers", model.arch.hidden_layers},
        {"width", model.arch.width},
        {"hidden_omega", model.arch.hidden_omega}}},
      {"channels", model.channels},
      {"layers", layers},
  };
  std::ofstream out(path);
  if (!out) throw IoError("cannot write checkpoint '" + path.string() + "'");
  out << doc.dump(1) << '\n';
  if (!out) throw IoError("failed while writing checkpoint '" + path.string() + "'");
}

InrModel<double> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFound("cannot open checkpoint '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("checkpoint '" + path.string() + "' is not valid JSON: " + e.what());
  }
  try {
    if (doc.at("format") != "fresh-inr-checkpoint")
      throw IoError("'" + path.string() + "' is not a fresh checkpoint");
    if (doc.at("version").get<int>() != kCheckpointVersion)
      throw IoError("unsupported checkpoint version " + doc.at("version").dump());
    const json& a = doc.at("architecture");
    Architecture arch{a.at("hidden_layers").get<int>(), a.at("width").get<int>(),
                      a.at("hidden_omega").get<double>()};
    InrModel<double> model = make_model_layout<double>(config_from_json(doc.at("embedding")), arch,
                                                       doc.at("channels").get<int>());
    const json& layers = doc.at("layers");
    if (layers.size() != model.layers.size())
      throw IoError("checkpoint layer count does not match its architecture");
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
      const LayerShape& layer = model.layers[l];
      const json& jl = layers[l];
      const auto weights = jl.at("weights").get<std::vector<double>>();
      const auto bias = jl.at("bias").get<std::vector<double>>();
      if (jl.at("rows").get<int>() != layer.out || jl.at("cols").get<int>() != layer.in ||
          weights.size() != static_cast<std::size_t>(layer.out) * layer.in ||
          bias.size() != static_cast<std::size_t>(layer.has_bias ? layer.out : 0))
        throw IoError("checkpoint layer '" + layer_name(l, model.layers.size()) +
                      "' has the wrong shape");
      auto w = model.weights(l);
      for (int r = 0; r < layer.out; ++r)
        for (int c = 0; c < layer.in; ++c) w(r, c) = weights[static_cast<std::size_t>(r) * layer.in + c];
      auto b = model.bias(l);
      for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = bias[i];
    }
    for (double p : model.params)
      if (!std::isfinite(p)) throw IoError("checkpoint contains non-finite parameters");
    return model;
  } catch (const json::exception& e) {
    throw IoError("malformed checkpoint '" + path.string() + "': " + e.what());
  }
}

#define FRESH_INSTANTIATE(T)                                                                     \
  template InrModel<T> make_model_layout<T>(const EmbeddingConfig&, const Architecture&, int);   \
  template InrModel<T> init_model<T>(const EmbeddingConfig&, const Architecture&, int,           \
                                     std::uint64_t);                                             \
  template Matrix<T> coords_matrix<T>(const CoordGrid&);                                         \
  template Matrix<T> targets_matrix<T>(const Image&);                                            \
  template Matrix<T> embed<T>(const InrModel<T>&, const Matrix<T>&);                             \
  template Matrix<T> forward<T>(const InrModel<T>&, const Matrix<T>&);                           \
  template Image render<T>(const InrModel<T>&, int, int);                                        \
  template LossAndGrads<T> loss_and_grads<T>(const InrModel<T>&, const Matrix<T>&,               \
                                             const Matrix<T>&);                                  \
  template double loss_and_grads<T>(const InrModel<T>&, const Matrix<T>&, const Matrix<T>&,      \
                                    std::vector<T>&, Workspace<T>&);                             \
  template AdamState<T> make_adam_state<T>(const InrModel<T>&, const AdamConfig&);               \
  template void adam_step<T>(InrModel<T>&, std::span<const T>, AdamState<T>&);                   \
  template std::vector<double> frequency_magnitudes<T>(const InrModel<T>&);

FRESH_INSTANTIATE(float)
FRESH_INSTANTIATE(double)

#undef FRESH_INSTANTIATE

}  // namespace fresh
