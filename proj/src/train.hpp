#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "image_io.hpp"
#include "inr.hpp"
#include "select.hpp"

namespace fresh {

struct TrainOptions {
  int steps = 2000;
  int log_every = 100;
  std::optional<double> learning_rate;  // default_learning_rate(config) when unset
  std::uint64_t seed = 0;
  Architecture arch;
  // Full-batch training up to this many pixels; larger images draw uniformly
  // random mini-batches of this size each step.
  std::size_t max_batch = std::size_t{1} << 18;
  bool double_precision = false;
};

struct TrainLogEntry {
  int step = 0;  // number of optimizer updates applied
  double mse = 0.0;
  double psnr = 0.0;
};

struct TrainReport {
  EmbeddingConfig config;
  std::uint64_t seed = 0;
  double learning_rate = 0.0;
  std::vector<TrainLogEntry> log;  // step 0, every log_every steps, and the last step
  double final_mse = 0.0;
  double final_psnr = 0.0;
  double final_ssim = 0.0;  // NaN when the image is smaller than the SSIM window
  double seconds = 0.0;
};

struct TrainResult {
  InrModel<double> model;  // widened from the training precision
  Image reconstruction;    // rendered in the training precision, unclamped
  TrainReport report;
};

// Throws Diverged (with the step and configuration in the message) on a
// non-finite loss.
TrainResult train_image(const EmbeddingConfig& config, const Image& image,
                        const TrainOptions& options);

struct SweepEntry {
  EmbeddingConfig config;
  double value = 0.0;
  std::optional<TrainResult> result;  // empty when training diverged
  std::string error;
  bool diverged() const { return !result.has_value(); }
};

struct SweepReport {
  ModelKind kind = ModelKind::siren;
  std::vector<SweepEntry> entries;  // grid order
  std::optional<std::size_t> best;  // highest final PSNR among converged entries
};

struct SweepOptions {
  TrainOptions train;
  int jobs = 1;
  // Optional per-candidate learning rates, indexed like the grid.
  std::vector<std::optional<double>> learning_rate_overrides;
};

SweepReport grid_search(const CandidateGrid& grid, const Image& image, const SweepOptions& options);

// Sum of `terms` 2D sinusoids with integer period counts kx, ky in
// [1, max_periods] along the two axes, random phases and amplitudes, sampled on
// the periodic grid (c / side, r / side) and rescaled to [0, 1]. Each component
// sits exactly on DFT bin (ky, kx), at diagonal index kx + ky <= 2 max_periods
// when the image is analysed at its native resolution; its conjugate bin lies
// past the last diagonal. After resampling to a working resolution R the index
// scales by roughly R / side. Axis-aligned components are excluded because
// their conjugate bin (0, side - k) would land on a high diagonal.
Image synth_lowfreq(int side, int max_periods, int terms, std::uint64_t seed);

// Elementwise ratio of the cropped residual spectra of pred_a and pred_b
// against target. Entries with a zero denominator are reported as missing.
// Non-square images are resampled to `resolution` first.
std::vector<std::optional<double>> residual_spectrum_ratio(const Image& pred_a, const Image& pred_b,
                                                           const Image& target, int n,
                                                           int resolution = 256);

}  // namespace fresh
