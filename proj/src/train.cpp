#include "train.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "error.hpp"
#include "metrics.hpp"
#include "parallel.hpp"
#include "seeds.hpp"
#include "spectrum.hpp"

namespace fresh {

namespace {

template <typename T>
TrainResult train_impl(const EmbeddingConfig& config, const Image& image,
                       const TrainOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const double lr = options.learning_rate.value_or(default_learning_rate(config));

  InrModel<T> model = init_model<T>(config, options.arch, image.channels,
                                    derive_seed(options.seed, config, 0));
  const Matrix<T> x = coords_matrix<T>(make_coord_grid(image.height, image.width));
  const Matrix<T> y = targets_matrix<T>(image);
  AdamState<T> adam = make_adam_state(model, AdamConfig{lr, 0.9, 0.999, 1e-8});

  const auto pixels = static_cast<Eigen::Index>(image.pixel_count());
  const bool full_batch = image.pixel_count() <= options.max_batch;
  std::mt19937_64 batch_rng(derive_seed(options.seed, config, kBatchStream));
  std::uniform_int_distribution<Eigen::Index> pick(0, pixels - 1);
  std::vector<Eigen::Index> batch(full_batch ? 0 : options.max_batch);

  TrainReport report;
  report.config = config;
  report.seed = options.seed;
  report.learning_rate = lr;

  auto fail = [&](int step, double value) {
    throw Diverged(fmt::format("training {} diverged at step {} (lr={}): loss is {}",
                               describe(config), step, lr, value),
                   step);
  };
  auto log_step = [&](int step) {
    const double m = mse(render(model, image.height, image.width), image);
    if (!std::isfinite(m)) fail(step, m);
    report.log.push_back({step, m, psnr_from_mse(m)});
  };

  Workspace<T> ws;
  std::vector<T> grads;
  Matrix<T> xb;
  Matrix<T> yb;
  log_step(0);
  for (int step = 1; step <= options.steps; ++step) {
    double loss = 0.0;
    if (full_batch) {
      loss = loss_and_grads(model, x, y, grads, ws);
    } else {
      for (auto& i : batch) i = pick(batch_rng);
      xb = x(Eigen::all, batch);
      yb = y(Eigen::all, batch);
      loss = loss_and_grads(model, xb, yb, grads, ws);
    }
    if (!std::isfinite(loss)) fail(step, loss);
    adam_step<T>(model, grads, adam);
    if (step % options.log_every == 0 || step == options.steps) log_step(step);
  }

  TrainResult result{model_cast<double>(model), render(model, image.height, image.width), {}};
  report.final_mse = report.log.back().mse;
  report.final_psnr = report.log.back().psnr;
  report.final_ssim = std::min(image.height, image.width) >= 11
                          ? ssim(result.reconstruction, image)
                          : std::numeric_limits<double>::quiet_NaN();
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  result.report = std::move(report);
  return result;
}

}  // namespace

TrainResult train_image(const EmbeddingConfig& config, const Image& image,
                        const TrainOptions& options) {
  validate(config);
  if (options.steps < 1) throw InvalidArgument("steps must be >= 1");
  if (options.log_every < 1) throw InvalidArgument("log_every must be >= 1");
  if (options.max_batch < 1) throw InvalidArgument("max_batch must be >= 1");
  if (options.learning_rate && !(*options.learning_rate > 0.0))
    throw InvalidArgument("learning rate must be positive");
  if (image.pixel_count() == 0) throw InvalidArgument("cannot train on an empty image");
  for (double v : image.data)
    if (!std::isfinite(v)) throw InvalidArgument("target image contains non-finite samples");
  return options.double_precision ? train_impl<double>(config, image, options)
                                  : train_impl<float>(config, image, options);
}

SweepReport grid_search(const CandidateGrid& grid, const Image& image, const SweepOptions& options) {
  validate(grid);
  if (!options.learning_rate_overrides.empty() &&
      options.learning_rate_overrides.size() != grid.candidates.size())
    throw InvalidArgument("learning rate overrides must match the grid size");

  SweepReport report;
  report.kind = grid.kind;
  report.entries.resize(grid.candidates.size());
  parallel_for(grid.candidates.size(), options.jobs, [&](std::size_t i) {
    SweepEntry& entry = report.entries[i];
    entry.config = grid.candidates[i];
    entry.value = swept_value(grid.kind, entry.config);
    TrainOptions train = options.train;
    if (!options.learning_rate_overrides.empty() && options.learning_rate_overrides[i])
      train.learning_rate = options.learning_rate_overrides[i];
    try {
      entry.result = train_image(entry.config, image, train);
    } catch (const Diverged& e) {
      entry.error = e.what();
    }
  });

  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const auto& e = report.entries[i];
    if (e.diverged()) continue;
    if (!report.best ||
        e.result->report.final_psnr > report.entries[*report.best].result->report.final_psnr)
      report.best = i;
  }
  return report;
}

Image synth_lowfreq(int side, int max_periods, int terms, std::uint64_t seed) {
  if (side < 16) throw InvalidArgument("synth_lowfreq: side must be >= 16");
  if (max_periods < 1) throw InvalidArgument("synth_lowfreq: max_periods must be >= 1");
  if (terms < 1) throw InvalidArgument("synth_lowfreq: terms must be >= 1");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> period(1, max_periods);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> amplitude(0.5, 1.0);

  Image image(1, side, side);
  for (int t = 0; t < terms; ++t) {
    const int kx = period(rng);
    const int ky = period(rng);
    const double p = phase(rng);
    const double a = amplitude(rng);
    for (int r = 0; r < side; ++r)
      for (int c = 0; c < side; ++c)
        image.at(0, r, c) += a * std::sin(2.0 * std::numbers::pi * (kx * c + ky * r) / side + p);
  }
  double lo = image.data[0];
  double hi = image.data[0];
  for (double v : image.data) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  // Two terms can cancel exactly only with probability zero; guard anyway.
  if (!(hi > lo)) throw DegenerateInput("synth_lowfreq produced a constant image");
  for (double& v : image.data) v = (v - lo) / (hi - lo);
  return image;
}

std::vector<std::optional<double>> residual_spectrum_ratio(const Image& pred_a, const Image& pred_b,
                                                           const Image& target, int n,
                                                           int resolution) {
  if (!pred_a.same_shape(target) || !pred_b.same_shape(target))
    throw InvalidArgument("residual_spectrum_ratio: prediction and target shapes differ");
  auto residual_spectrum = [&](const Image& pred) {
    Image residual = target;
    for (std::size_t i = 0; i < residual.data.size(); ++i) residual.data[i] -= pred.data[i];
    return residual.is_square() ? spectrum_cropped(residual, n)
                                : working_spectrum(residual, resolution, n);
  };
  const Spectrum a = residual_spectrum(pred_a);
  const Spectrum b = residual_spectrum(pred_b);
  std::vector<std::optional<double>> ratio(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (b.entries[i] != 0.0) ratio[i] = a.entries[i] / b.entries[i];
  return ratio;
}

}  // namespace fresh
