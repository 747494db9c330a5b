#include <fresh/fresh.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

enum Exit {
  kOk = 0,
  kDegenerate = 2,
  kDiverged = 3,
  kUsage = 64,
  kNoInput = 66,
  kSoftware = 70,
  kIoError = 74,
};

struct Failure {
  int code;
};

int exit_code(fresh_status status) {
  switch (status) {
    case FRESH_OK: return kOk;
    case FRESH_ERR_INVALID_ARGUMENT: return kUsage;
    case FRESH_ERR_DEGENERATE: return kDegenerate;
    case FRESH_ERR_DIVERGED: return kDiverged;
    case FRESH_ERR_IO: return kIoError;
    case FRESH_ERR_NOT_FOUND: return kNoInput;
    default: return kSoftware;
  }
}

void check(fresh_status status, const std::string& context) {
  if (status == FRESH_OK) return;
  std::fprintf(stderr, "fresh-cli: %s: %s\n", context.c_str(), fresh_last_error());
  throw Failure{exit_code(status)};
}

[[noreturn]] void usage_error(const std::string& message) {
  std::fprintf(stderr, "fresh-cli: %s\n", message.c_str());
  throw Failure{kUsage};
}

// RAII owners for library handles.
template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
  T** out() { return &p; }
  T* get() const { return p; }
};
using ImageHandle = Handle<fresh_image, fresh_image_free>;
using ModelHandle = Handle<fresh_model, fresh_model_free>;
using SelectionHandle = Handle<fresh_selection, fresh_selection_free>;
using TrainingHandle = Handle<fresh_training, fresh_training_free>;
using SweepHandle = Handle<fresh_sweep, fresh_sweep_free>;

struct RunConfig {
  std::string image;
  std::string model = "siren";
  std::string grid;
  double finer_omega = 30.0;
  int n = 64;
  int repeats = 10;
  int resolution = 256;
  int steps = 2000;
  int log_every = 100;
  std::optional<double> lr;
  std::size_t max_batch = std::size_t{1} << 18;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out = "out";
  int width = 256;
  int hidden_layers = 3;
  double hidden_omega = 30.0;
  bool double_precision = false;

  double omega0 = 30.0;
  double sigma = 10.0;
  double omega = 30.0;
  double k = 1.0;

  bool fresh = false;
  std::string checkpoint;
  std::string baseline;
  int bins = 32;
};

std::string describe(const fresh_embedding& e) {
  char buf[128];
  std::size_t len = 0;
  check(fresh_embedding_describe(&e, buf, sizeof buf, &len), "describe");
  return buf;
}

std::string fmt_param(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "param_%.10g", v);
  return buf;
}

double round_grid(double v) { return std::round(v * 1e9) / 1e9; }

// "a:b:c" (inclusive range) or "v1,v2,...".
std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> values;
  auto number = [&](const std::string& text) {
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      usage_error("--grid: '" + text + "' is not a number");
    }
  };
  if (spec.find(':') != std::string::npos) {
    const auto first = spec.find(':');
    const auto second = spec.find(':', first + 1);
    if (second == std::string::npos || spec.find(':', second + 1) != std::string::npos)
      usage_error("--grid: expected start:stop:step, got '" + spec + "'");
    const double start = number(spec.substr(0, first));
    const double stop = number(spec.substr(first + 1, second - first - 1));
    const double step = number(spec.substr(second + 1));
    if (!(step > 0.0)) usage_error("--grid: step must be positive");
    if (stop < start) usage_error("--grid: stop must not be below start");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 100000) usage_error("--grid: too many candidates");
    for (long i = 0; i < count; ++i) values.push_back(round_grid(start + i * step));
  } else {
    std::size_t pos = 0;
    while (pos <= spec.size()) {
      const auto comma = spec.find(',', pos);
      const auto token = spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      values.push_back(number(token));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  if (values.empty()) usage_error("--grid is empty");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1])) usage_error("--grid values must be strictly increasing");
  return values;
}

fresh_model_kind model_kind(const RunConfig& cfg) {
  fresh_model_kind kind;
  check(fresh_model_kind_parse(cfg.model.c_str(), &kind), "--model");
  return kind;
}

std::vector<double> grid_values(const RunConfig& cfg) {
  if (!cfg.grid.empty()) return parse_grid(cfg.grid);
  std::size_t count = 0;
  check(fresh_default_grid(model_kind(cfg), nullptr, 0, &count), "grid");
  std::vector<double> values(count);
  check(fresh_default_grid(model_kind(cfg), values.data(), values.size(), &count), "grid");
  return values;
}

// The embedding named by the explicit hyperparameter flags.
fresh_embedding explicit_embedding(const RunConfig& cfg) {
  switch (model_kind(cfg)) {
    case FRESH_MODEL_SIREN: return {FRESH_FAMILY_SIREN, cfg.omega0, 0.0};
    case FRESH_MODEL_FOURIER: return {FRESH_FAMILY_FOURIER, cfg.sigma, 0.0};
    case FRESH_MODEL_FINER: return {FRESH_FAMILY_FINER, cfg.omega, cfg.k};
    case FRESH_MODEL_FINER_K0: return {FRESH_FAMILY_FINER, cfg.omega, 0.0};
  }
  usage_error("unknown model");
}

fresh_arch arch_of(const RunConfig& cfg) { return {cfg.hidden_layers, cfg.width, cfg.hidden_omega}; }

fresh_select_options select_options(const RunConfig& cfg) {
  fresh_select_options o;
  fresh_select_options_default(&o);
  o.n = cfg.n;
  o.repeats = cfg.repeats;
  o.resolution = cfg.resolution;
  o.seed = cfg.seed;
  o.jobs = cfg.jobs;
  o.arch = arch_of(cfg);
  o.double_precision = cfg.double_precision ? 1 : 0;
  return o;
}

fresh_train_options train_options(const RunConfig& cfg) {
  fresh_train_options o;
  fresh_train_options_default(&o);
  o.steps = cfg.steps;
  o.log_every = cfg.log_every;
  o.learning_rate = cfg.lr.value_or(0.0);
  o.seed = cfg.seed;
  o.arch = arch_of(cfg);
  o.max_batch = cfg.max_batch;
  o.double_precision = cfg.double_precision ? 1 : 0;
  return o;
}

void require_file(const std::string& path, const char* flag) {
  if (path.empty()) usage_error(std::string(flag) + " is required");
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    std::fprintf(stderr, "fresh-cli: %s: no such file '%s'\n", flag, path.c_str());
    throw Failure{kNoInput};
  }
}

fs::path prepare_out(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec) {
    std::fprintf(stderr, "fresh-cli: cannot create output directory '%s': %s\n", cfg.out.c_str(),
                 ec.message().c_str());
    throw Failure{kIoError};
  }
  return cfg.out;
}

std::string path_in(const fs::path& dir, const std::string& name) { return (dir / name).string(); }

void load_image(const RunConfig& cfg, ImageHandle& image) {
  check(fresh_image_load(cfg.image.c_str(), image.out()), "loading '" + cfg.image + "'");
}

// Runs selection, writes selection.csv/.json and returns the chosen embedding.
fresh_embedding run_selection(const RunConfig& cfg, const fresh_image* image, const fs::path& out) {
  const auto values = grid_values(cfg);
  const auto options = select_options(cfg);
  SelectionHandle selection;
  check(fresh_select(model_kind(cfg), values.data(), values.size(), cfg.finer_omega, image, &options,
                     selection.out()),
        "select");
  check(fresh_selection_write_csv(selection.get(), path_in(out, "selection.csv").c_str()),
        "writing selection.csv");
  check(fresh_selection_write_json(selection.get(), path_in(out, "selection.json").c_str()),
        "writing selection.json");
  const auto chosen = fresh_selection_chosen(selection.get());
  double value = 0.0;
  double mean = 0.0;
  double se = 0.0;
  check(fresh_selection_candidate(selection.get(), chosen, &value, &mean, &se), "select");
  fresh_embedding embedding;
  check(fresh_selection_embedding(selection.get(), chosen, &embedding), "select");
  std::printf("chosen: %s (mean wasserstein %.6g, se %.3g)\n", describe(embedding).c_str(), mean, se);
  return embedding;
}

int cmd_select(const RunConfig& cfg) {
  require_file(cfg.image, "--image");
  grid_values(cfg);
  const auto out = prepare_out(cfg);
  ImageHandle image;
  load_image(cfg, image);
  run_selection(cfg, image.get(), out);
  return kOk;
}

void write_training(const fresh_training* training, const fs::path& out) {
  check(fresh_training_write_csv(training, path_in(out, "train.csv").c_str()), "writing train.csv");
  check(fresh_training_write_json(training, path_in(out, "train.json").c_str()),
        "writing train.json");
  ImageHandle reconstruction;
  check(fresh_training_reconstruction(training, reconstruction.out()), "reconstruction");
  check(fresh_image_save(reconstruction.get(), path_in(out, "reconstruction.png").c_str()),
        "writing reconstruction.png");
  ModelHandle model;
  check(fresh_training_model(training, model.out()), "model");
  check(fresh_model_save(model.get(), path_in(out, "checkpoint.json").c_str()),
        "writing checkpoint.json");
}

int cmd_train(const RunConfig& cfg) {
  require_file(cfg.image, "--image");
  if (cfg.fresh) grid_values(cfg);
  const auto out = prepare_out(cfg);
  ImageHandle image;
  load_image(cfg, image);
  const fresh_embedding embedding =
      cfg.fresh ? run_selection(cfg, image.get(), out) : explicit_embedding(cfg);
  const auto options = train_options(cfg);
  TrainingHandle training;
  check(fresh_train(&embedding, image.get(), &options, training.out()),
        "training " + describe(embedding));
  write_training(training.get(), out);
  double psnr = 0.0;
  double ssim = 0.0;
  check(fresh_training_final(training.get(), nullptr, &psnr, &ssim, nullptr), "train");
  std::printf("trained %s: final psnr %.4f dB, ssim %.4f\n", describe(embedding).c_str(), psnr, ssim);
  return kOk;
}

int cmd_sweep(const RunConfig& cfg) {
  require_file(cfg.image, "--image");
  const auto values = grid_values(cfg);
  const auto out = prepare_out(cfg);
  ImageHandle image;
  load_image(cfg, image);

  const fresh_embedding chosen = run_selection(cfg, image.get(), out);

  const auto options = train_options(cfg);
  SweepHandle sweep;
  check(fresh_sweep_run(model_kind(cfg), values.data(), values.size(), cfg.finer_omega, image.get(),
                        &options, cfg.jobs, nullptr, sweep.out()),
        "sweep");
  check(fresh_sweep_write_csv(sweep.get(), path_in(out, "sweep.csv").c_str()), "writing sweep.csv");

  const fs::path runs = out / "runs";
  std::error_code ec;
  fs::create_directories(runs, ec);
  std::optional<double> fresh_psnr;
  for (std::size_t i = 0; i < fresh_sweep_count(sweep.get()); ++i) {
    double value = 0.0;
    int diverged = 0;
    double psnr = 0.0;
    check(fresh_sweep_entry(sweep.get(), i, &value, &diverged, &psnr, nullptr), "sweep");
    fresh_embedding e;
    check(fresh_model_kind_embedding(model_kind(cfg), value, cfg.finer_omega, &e), "sweep");
    if (diverged) {
      std::printf("  %s diverged\n", describe(e).c_str());
      continue;
    }
    TrainingHandle training;
    check(fresh_sweep_training(sweep.get(), i, training.out()), "sweep");
    check(fresh_training_write_csv(training.get(),
                                   path_in(runs, fmt_param(value) + ".csv").c_str()),
          "writing sweep run");
    if (e.family == chosen.family && e.param == chosen.param && e.k == chosen.k) fresh_psnr = psnr;
  }

  const long best = fresh_sweep_best(sweep.get());
  if (best < 0) {
    std::fprintf(stderr, "fresh-cli: every sweep candidate diverged\n");
    return kDiverged;
  }
  double best_value = 0.0;
  double best_psnr = 0.0;
  check(fresh_sweep_entry(sweep.get(), static_cast<std::size_t>(best), &best_value, nullptr,
                          &best_psnr, nullptr),
        "sweep");
  fresh_embedding best_embedding;
  check(fresh_model_kind_embedding(model_kind(cfg), best_value, cfg.finer_omega, &best_embedding),
        "sweep");
  if (fresh_psnr)
    std::printf("sweep best: %s psnr %.4f dB | fresh: %s psnr %.4f dB | gap %.4f dB\n",
                describe(best_embedding).c_str(), best_psnr, describe(chosen).c_str(), *fresh_psnr,
                best_psnr - *fresh_psnr);
  else
    std::printf("sweep best: %s psnr %.4f dB | fresh: %s diverged\n",
                describe(best_embedding).c_str(), best_psnr, describe(chosen).c_str());
  return kOk;
}

int cmd_analyze(const RunConfig& cfg) {
  if (!cfg.image.empty()) require_file(cfg.image, "--image");
  if (!cfg.checkpoint.empty()) require_file(cfg.checkpoint, "--checkpoint");
  if (!cfg.baseline.empty()) require_file(cfg.baseline, "--baseline");
  if (!cfg.baseline.empty() && cfg.checkpoint.empty()) usage_error("--baseline needs --checkpoint");
  const auto out = prepare_out(cfg);

  ImageHandle image;
  if (!cfg.image.empty()) {
    load_image(cfg, image);
    check(fresh_spectrum_write_csv(image.get(), 0, cfg.resolution,
                                   path_in(out, "image_spectrum.csv").c_str()),
          "image spectrum");
  }

  ModelHandle model;
  if (!cfg.checkpoint.empty()) {
    check(fresh_model_load(cfg.checkpoint.c_str(), model.out()), "loading '" + cfg.checkpoint + "'");
  } else {
    const fresh_embedding e = explicit_embedding(cfg);
    const fresh_arch arch = arch_of(cfg);
    int channels = 1;
    if (image.get()) check(fresh_image_shape(image.get(), &channels, nullptr, nullptr), "image");
    check(fresh_model_init(&e, &arch, channels, cfg.seed, model.out()), "model");
  }
  check(fresh_model_write_magnitudes_csv(model.get(), path_in(out, "magnitudes.csv").c_str()),
        "magnitudes");
  check(fresh_model_write_histogram_csv(model.get(), cfg.bins,
                                        path_in(out, "magnitude_histogram.csv").c_str()),
        "histogram");

  if (image.get() && !cfg.checkpoint.empty()) {
    int height = 0;
    int width = 0;
    check(fresh_image_shape(image.get(), nullptr, &height, &width), "image");
    ImageHandle rendered;
    check(fresh_model_render(model.get(), height, width, rendered.out()), "render");
    check(fresh_spectrum_write_csv(rendered.get(), 0, cfg.resolution,
                                   path_in(out, "checkpoint_spectrum.csv").c_str()),
          "checkpoint spectrum");
    if (!cfg.baseline.empty()) {
      ModelHandle baseline;
      check(fresh_model_load(cfg.baseline.c_str(), baseline.out()),
            "loading '" + cfg.baseline + "'");
      ImageHandle baseline_render;
      check(fresh_model_render(baseline.get(), height, width, baseline_render.out()), "render");
      check(fresh_residual_ratio_write_csv(rendered.get(), baseline_render.get(), image.get(), cfg.n,
                                           cfg.resolution,
                                           path_in(out, "residual_ratio.csv").c_str()),
            "residual ratio");
    }
  }
  std::printf("analysis written to %s\n", out.string().c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Spectrum-matched embedding selection and training for implicit neural representations"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML file of key = value defaults; command-line flags win");
  app.get_formatter()->column_width(34);

  app.add_option("--image", cfg.image, "Target image (8-bit PNG, gray or RGB)");
  app.add_option("--model", cfg.model, "Embedding family to tune")
      ->check(CLI::IsMember({"siren", "fourier", "finer", "finer-k0"}))
      ->capture_default_str();
  app.add_option("--grid", cfg.grid,
                 "Candidates as start:stop:step or a comma list; default: siren 10:200:10, "
                 "fourier 1:20:1, finer (k) 0:3:0.1, finer-k0 (omega) 10:200:10");
  app.add_option("--finer-omega", cfg.finer_omega, "Fixed omega of finer k-sweeps")
      ->capture_default_str();
  app.add_option("--n", cfg.n, "Spectrum size")->capture_default_str();
  app.add_option("--repeats", cfg.repeats, "Initializations averaged per candidate")
      ->capture_default_str();
  app.add_option("--resolution", cfg.resolution, "Working resolution of spectra")
      ->capture_default_str();
  app.add_option("--steps", cfg.steps, "Training steps")->capture_default_str();
  app.add_option("--log-every", cfg.log_every, "Steps between logged PSNR values")
      ->capture_default_str();
  app.add_option("--lr", cfg.lr, "Adam learning rate (default 1e-4, fourier 1e-3)");
  app.add_option("--max-batch", cfg.max_batch, "Full-batch pixel limit; larger images use random batches of this size")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Base seed for every random draw")->capture_default_str();
  app.add_option("--jobs", cfg.jobs, "Worker threads for candidate scoring and sweeps")
      ->capture_default_str();
  app.add_option("--out", cfg.out, "Output directory")->capture_default_str();
  app.add_option("--width", cfg.width, "Hidden layer width")->capture_default_str();
  app.add_option("--hidden-layers", cfg.hidden_layers, "Number of hidden layers")
      ->capture_default_str();
  app.add_option("--hidden-omega", cfg.hidden_omega, "Frequency scale of sine hidden layers")
      ->capture_default_str();
  app.add_flag("--double", cfg.double_precision, "Compute networks in double precision");
  app.add_option("--omega0", cfg.omega0, "Siren omega0 (train/analyze)")->capture_default_str();
  app.add_option("--sigma", cfg.sigma, "Fourier sigma (train/analyze)")->capture_default_str();
  app.add_option("--omega", cfg.omega, "Finer omega (train/analyze)")->capture_default_str();
  app.add_option("--k", cfg.k, "Finer bias range (train/analyze)")->capture_default_str();

  auto* select = app.add_subcommand("select", "Choose the embedding hyperparameter for an image");
  auto* train = app.add_subcommand("train", "Fit a model to an image");
  train->add_flag("--fresh", cfg.fresh, "Select the hyperparameter first, then train it");
  auto* sweep =
      app.add_subcommand("sweep", "Train every grid candidate and compare the best with the selection");
  auto* analyze = app.add_subcommand("analyze", "Spectra, residual ratios and embedding magnitudes");
  analyze->add_option("--checkpoint", cfg.checkpoint, "Trained model checkpoint");
  analyze->add_option("--baseline", cfg.baseline, "Checkpoint to compare residuals against");
  analyze->add_option("--bins", cfg.bins, "Magnitude histogram bins")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*select) return cmd_select(cfg);
    if (*train) return cmd_train(cfg);
    if (*sweep) return cmd_sweep(cfg);
    if (*analyze) return cmd_analyze(cfg);
  } catch (const Failure& f) {
    return f.code;
  }
  return kUsage;
}
