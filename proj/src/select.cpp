#include "select.hpp"

#include <cmath>

#include "error.hpp"
#include "parallel.hpp"
#include "seeds.hpp"

namespace fresh {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::siren: return "siren";
    case ModelKind::fourier: return "fourier";
    case ModelKind::finer: return "finer";
    case ModelKind::finer_k0: return "finer-k0";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  if (name == "siren") return ModelKind::siren;
  if (name == "fourier") return ModelKind::fourier;
  if (name == "finer") return ModelKind::finer;
  if (name == "finer-k0" || name == "finer_k0") return ModelKind::finer_k0;
  return std::nullopt;
}

EmbeddingConfig make_config(ModelKind kind, double value, double fixed_omega) {
  switch (kind) {
    case ModelKind::siren: return SirenEmbedding{value};
    case ModelKind::fourier: return FourierEmbedding{value};
    case ModelKind::finer: return FinerEmbedding{fixed_omega, value};
    case ModelKind::finer_k0: return FinerEmbedding{value, 0.0};
  }
  throw InvalidArgument("unknown model kind");
}

double swept_value(ModelKind kind, const EmbeddingConfig& config) {
  switch (kind) {
    case ModelKind::siren: return std::get<SirenEmbedding>(config).omega0;
    case ModelKind::fourier: return std::get<FourierEmbedding>(config).sigma;
    case ModelKind::finer: return std::get<FinerEmbedding>(config).k;
    case ModelKind::finer_k0: return std::get<FinerEmbedding>(config).omega;
  }
  throw InvalidArgument("unknown model kind");
}

CandidateGrid make_grid(ModelKind kind, std::span<const double> values, double fixed_omega) {
  CandidateGrid grid{kind, {}};
  for (double v : values) grid.candidates.push_back(make_config(kind, v, fixed_omega));
  validate(grid);
  return grid;
}

CandidateGrid default_grid(ModelKind kind) {
  std::vector<double> values;
  switch (kind) {
    case ModelKind::siren:
    case ModelKind::finer_k0:
      for (int v = 10; v <= 200; v += 10) values.push_back(v);
      break;
    case ModelKind::fourier:
      for (int v = 1; v <= 20; ++v) values.push_back(v);
      break;
    case ModelKind::finer:
      for (int i = 0; i <= 30; ++i) values.push_back(i / 10.0);
      break;
  }
  return make_grid(kind, values);
}

void validate(const CandidateGrid& grid) {
  if (grid.candidates.empty()) throw InvalidArgument("candidate grid is empty");
  for (const auto& c : grid.candidates) {
    validate(c);
    const bool family_ok = [&] {
      switch (grid.kind) {
        case ModelKind::siren: return std::holds_alternative<SirenEmbedding>(c);
        case ModelKind::fourier: return std::holds_alternative<FourierEmbedding>(c);
        case ModelKind::finer: return std::holds_alternative<FinerEmbedding>(c);
        case ModelKind::finer_k0:
          return std::holds_alternative<FinerEmbedding>(c) && std::get<FinerEmbedding>(c).k == 0.0;
      }
      return false;
    }();
    if (!family_ok)
      throw InvalidArgument("candidate " + describe(c) + " does not belong to a " +
                            to_string(grid.kind) + " grid");
  }
}

Image render_init_output(const EmbeddingConfig& config, const Architecture& arch, int channels,
                         std::uint64_t seed, int side, bool double_precision) {
  if (side < 2) throw InvalidArgument("render side must be at least 2");
  if (double_precision) return render(init_model<double>(config, arch, channels, seed), side, side);
  return render(init_model<float>(config, arch, channels, seed), side, side);
}

CandidateScore score_candidate(const EmbeddingConfig& config, int channels,
                               std::span<const NormalizedSpectrum> target_spectra,
                               const SelectOptions& options) {
  if (options.repeats < 1) throw InvalidArgument("repeats must be >= 1");
  if (target_spectra.empty()) throw InvalidArgument("no target spectra given");
  for (const auto& t : target_spectra)
    if (t.size() < static_cast<std::size_t>(options.n))
      throw InvalidArgument("target spectrum is shorter than n");

  CandidateScore score;
  score.config = config;
  score.distances.reserve(options.repeats);
  for (int r = 0; r < options.repeats; ++r) {
    const Image output =
        render_init_output(config, options.arch, channels,
                           derive_seed(options.seed, config, static_cast<std::uint64_t>(r)),
                           options.resolution, options.double_precision);
    Spectrum spectrum = spectrum_cropped(output, options.n);
    NormalizedSpectrum model_spectrum = [&] {
      try {
        return normalize(spectrum);
      } catch (const DegenerateInput&) {
        throw DegenerateInput("initial output of " + describe(config) + " (repeat " +
                              std::to_string(r) + ") has an all-zero spectrum");
      }
    }();
    const auto& target = target_spectra[target_spectra.size() == 1 ? 0 : r % target_spectra.size()];
    std::vector<double> cropped(target.mass().begin(), target.mass().begin() + options.n);
    // Renormalize only when the target is longer than n.
    const NormalizedSpectrum target_n =
        target.size() == static_cast<std::size_t>(options.n) ? target
                                                             : normalize(Spectrum{cropped});
    score.distances.push_back(wasserstein_1d(model_spectrum, target_n));
  }

  double sum = 0.0;
  for (double d : score.distances) sum += d;
  score.mean = sum / options.repeats;
  if (options.repeats > 1) {
    double ss = 0.0;
    for (double d : score.distances) ss += (d - score.mean) * (d - score.mean);
    score.se = std::sqrt(ss / (options.repeats - 1)) / std::sqrt(static_cast<double>(options.repeats));
  }
  return score;
}

std::size_t choose_candidate(std::span<const CandidateScore> scores) {
  if (scores.empty()) throw InvalidArgument("no candidate scores to choose from");
  std::size_t chosen = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    const auto& s = scores[i];
    const auto& b = scores[chosen];
    if (s.mean < b.mean || (s.mean == b.mean && s.value < b.value)) chosen = i;
  }
  return chosen;
}

SelectionReport select(const CandidateGrid& grid, const Image& target, const SelectOptions& options) {
  validate(grid);
  if (options.resolution < 2) throw InvalidArgument("working resolution must be at least 2");
  if (options.n < 1 || options.n > options.resolution - 1)
    throw InvalidArgument("spectrum size n=" + std::to_string(options.n) + " must lie in [1, " +
                          std::to_string(options.resolution - 1) + "]");
  if (options.repeats < 1) throw InvalidArgument("repeats must be >= 1");

  // The image is fixed, so one target spectrum serves every repeat.
  const NormalizedSpectrum target_spectrum = [&] {
    try {
      return normalize(working_spectrum(target, options.resolution, options.n));
    } catch (const DegenerateInput&) {
      throw DegenerateInput("target image is constant; its spectrum is zero and FreSh is undefined");
    }
  }();
  const std::span<const NormalizedSpectrum> targets(&target_spectrum, 1);

  SelectionReport report;
  report.kind = grid.kind;
  report.n = options.n;
  report.resolution = options.resolution;
  report.repeats = options.repeats;
  report.seed = options.seed;
  report.arch = options.arch;
  report.scores.resize(grid.candidates.size());
  parallel_for(grid.candidates.size(), options.jobs, [&](std::size_t i) {
    report.scores[i] = score_candidate(grid.candidates[i], target.channels, targets, options);
    report.scores[i].value = swept_value(grid.kind, grid.candidates[i]);
  });

  report.chosen = choose_candidate(report.scores);
  return report;
}

}  // namespace fresh
