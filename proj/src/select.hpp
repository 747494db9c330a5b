#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "image_io.hpp"
#include "inr.hpp"
#include "spectrum.hpp"

namespace fresh {

// Which embedding hyperparameter a grid sweeps.
//   siren:    omega0
//   fourier:  sigma
//   finer:    k, with omega held fixed (30 by default)
//   finer_k0: omega, with the bias removed (k = 0)
enum class ModelKind { siren, fourier, finer, finer_k0 };

std::string to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view name);

EmbeddingConfig make_config(ModelKind kind, double value, double fixed_omega = 30.0);
double swept_value(ModelKind kind, const EmbeddingConfig& config);

struct CandidateGrid {
  ModelKind kind = ModelKind::siren;
  std::vector<EmbeddingConfig> candidates;
};

CandidateGrid make_grid(ModelKind kind, std::span<const double> values, double fixed_omega = 30.0);
// omega0 in {10..200 step 10}, sigma in {1..20}, k in {0.0..3.0 step 0.1}, omega in {10..200 step 10}.
CandidateGrid default_grid(ModelKind kind);
void validate(const CandidateGrid& grid);

struct SelectOptions {
  int n = 64;
  int repeats = 10;
  int resolution = 256;
  std::uint64_t seed = 0;
  int jobs = 1;
  Architecture arch;
  bool double_precision = false;  // precision of the rendered network output
};

struct CandidateScore {
  EmbeddingConfig config;
  double value = 0.0;  // swept hyperparameter
  double mean = 0.0;
  double se = 0.0;
  std::vector<double> distances;  // one per repeat
};

struct SelectionReport {
  ModelKind kind = ModelKind::siren;
  std::vector<CandidateScore> scores;  // grid order
  std::size_t chosen = 0;
  int n = 0;
  int resolution = 0;
  int repeats = 0;
  std::uint64_t seed = 0;
  Architecture arch;

  const CandidateScore& best() const { return scores[chosen]; }
};

// Output of a freshly initialized network on the side x side grid, unclamped.
Image render_init_output(const EmbeddingConfig& config, const Architecture& arch, int channels,
                         std::uint64_t seed, int side, bool double_precision = false);

// Mean and standard error (sample SD / sqrt(repeats)) of the distance between
// `repeats` initializations of `config` and target_spectra[r]. A single target
// spectrum is reused for every repeat.
CandidateScore score_candidate(const EmbeddingConfig& config, int channels,
                               std::span<const NormalizedSpectrum> target_spectra,
                               const SelectOptions& options);

// Index of the smallest mean distance; ties go to the smallest swept value.
std::size_t choose_candidate(std::span<const CandidateScore> scores);

SelectionReport select(const CandidateGrid& grid, const Image& target, const SelectOptions& options);

}  // namespace fresh
