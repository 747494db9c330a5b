#include "fresh/fresh.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <new>
#include <string>

#include "error.hpp"
#include "image_io.hpp"
#include "inr.hpp"
#include "metrics.hpp"
#include "reports.hpp"
#include "select.hpp"
#include "spectrum.hpp"
#include "train.hpp"

struct fresh_image {
  fresh::Image image;
};
struct fresh_model {
  fresh::InrModel<double> model;
};
struct fresh_selection {
  fresh::SelectionReport report;
};
struct fresh_training {
  fresh::TrainResult result;
};
struct fresh_sweep {
  fresh::SweepReport report;
};

namespace {

thread_local std::string last_error;

fresh_status status_of(fresh::ErrorKind kind) {
  switch (kind) {
    case fresh::ErrorKind::invalid_argument: return FRESH_ERR_INVALID_ARGUMENT;
    case fresh::ErrorKind::degenerate_input: return FRESH_ERR_DEGENERATE;
    case fresh::ErrorKind::diverged: return FRESH_ERR_DIVERGED;
    case fresh::ErrorKind::io: return FRESH_ERR_IO;
    case fresh::ErrorKind::not_found: return FRESH_ERR_NOT_FOUND;
  }
  return FRESH_ERR_INTERNAL;
}

template <typename F>
fresh_status guarded(F&& fn) {
  try {
    fn();
    last_error.clear();
    return FRESH_OK;
  } catch (const fresh::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return FRESH_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return FRESH_ERR_INTERNAL;
  }
}

template <typename T>
void require(const T* p, const char* what) {
  if (!p) throw fresh::InvalidArgument(std::string(what) + " must not be null");
}

fresh::ModelKind to_kind(fresh_model_kind kind) {
  switch (kind) {
    case FRESH_MODEL_SIREN: return fresh::ModelKind::siren;
    case FRESH_MODEL_FOURIER: return fresh::ModelKind::fourier;
    case FRESH_MODEL_FINER: return fresh::ModelKind::finer;
    case FRESH_MODEL_FINER_K0: return fresh::ModelKind::finer_k0;
  }
  throw fresh::InvalidArgument("unknown model kind " + std::to_string(static_cast<int>(kind)));
}

fresh::EmbeddingConfig to_config(const fresh_embedding* e) {
  require(e, "embedding");
  fresh::EmbeddingConfig config;
  switch (e->family) {
    case FRESH_FAMILY_SIREN: config = fresh::SirenEmbedding{e->param}; break;
    case FRESH_FAMILY_FOURIER: config = fresh::FourierEmbedding{e->param}; break;
    case FRESH_FAMILY_FINER: config = fresh::FinerEmbedding{e->param, e->k}; break;
    default: throw fresh::InvalidArgument("unknown embedding family");
  }
  fresh::validate(config);
  return config;
}

fresh_embedding from_config(const fresh::EmbeddingConfig& config) {
  if (const auto* s = std::get_if<fresh::SirenEmbedding>(&config))
    return {FRESH_FAMILY_SIREN, s->omega0, 0.0};
  if (const auto* f = std::get_if<fresh::FourierEmbedding>(&config))
    return {FRESH_FAMILY_FOURIER, f->sigma, 0.0};
  const auto& fin = std::get<fresh::FinerEmbedding>(config);
  return {FRESH_FAMILY_FINER, fin.omega, fin.k};
}

fresh::Architecture to_arch(const fresh_arch& a) {
  return {a.hidden_layers, a.width, a.hidden_omega};
}

fresh::CandidateGrid to_grid(fresh_model_kind kind, const double* values, size_t count,
                             double fixed_omega) {
  if (count == 0) throw fresh::InvalidArgument("candidate grid is empty");
  require(values, "values");
  return fresh::make_grid(to_kind(kind), std::span<const double>(values, count), fixed_omega);
}

fresh::TrainOptions to_train(const fresh_train_options* o) {
  require(o, "options");
  fresh::TrainOptions t;
  t.steps = o->steps;
  t.log_every = o->log_every;
  if (o->learning_rate > 0.0) t.learning_rate = o->learning_rate;
  t.seed = o->seed;
  t.arch = to_arch(o->arch);
  t.max_batch = o->max_batch;
  t.double_precision = o->double_precision != 0;
  return t;
}

template <typename W>
void write_file(const char* path, W&& writer) {
  require(path, "path");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fresh::IoError(std::string("cannot open '") + path + "' for writing");
  writer(out);
  out.flush();
  if (!out) throw fresh::IoError(std::string("failed writing '") + path + "'");
}

void copy_out(const std::vector<double>& src, double* values, size_t capacity, size_t* count) {
  require(count, "count");
  *count = src.size();
  if (values)
    for (size_t i = 0; i < src.size() && i < capacity; ++i) values[i] = src[i];
}

}  // namespace

extern "C" {

const char* fresh_last_error(void) { return last_error.c_str(); }
const char* fresh_version(void) { return "0.1.0"; }

void fresh_arch_default(fresh_arch* arch) {
  if (!arch) return;
  const fresh::Architecture a;
  *arch = {a.hidden_layers, a.width, a.hidden_omega};
}

void fresh_select_options_default(fresh_select_options* options) {
  if (!options) return;
  const fresh::SelectOptions s;
  options->n = s.n;
  options->repeats = s.repeats;
  options->resolution = s.resolution;
  options->seed = s.seed;
  options->jobs = s.jobs;
  fresh_arch_default(&options->arch);
  options->double_precision = 0;
}

void fresh_train_options_default(fresh_train_options* options) {
  if (!options) return;
  const fresh::TrainOptions t;
  options->steps = t.steps;
  options->log_every = t.log_every;
  options->learning_rate = 0.0;
  options->seed = t.seed;
  fresh_arch_default(&options->arch);
  options->max_batch = t.max_batch;
  options->double_precision = 0;
}

const char* fresh_model_kind_name(fresh_model_kind kind) {
  switch (kind) {
    case FRESH_MODEL_SIREN: return "siren";
    case FRESH_MODEL_FOURIER: return "fourier";
    case FRESH_MODEL_FINER: return "finer";
    case FRESH_MODEL_FINER_K0: return "finer-k0";
  }
  return "unknown";
}

fresh_status fresh_model_kind_parse(const char* name, fresh_model_kind* kind) {
  return guarded([&] {
    require(name, "name");
    require(kind, "kind");
    const auto parsed = fresh::parse_model_kind(name);
    if (!parsed)
      throw fresh::InvalidArgument(std::string("unknown model '") + name +
                                   "' (expected siren, fourier, finer or finer-k0)");
    *kind = static_cast<fresh_model_kind>(static_cast<int>(*parsed));
  });
}

fresh_status fresh_model_kind_embedding(fresh_model_kind kind, double value, double fixed_omega,
                                        fresh_embedding* out) {
  return guarded([&] {
    require(out, "out");
    const auto config = fresh::make_config(to_kind(kind), value, fixed_omega);
    fresh::validate(config);
    *out = from_config(config);
  });
}

fresh_status fresh_default_grid(fresh_model_kind kind, double* values, size_t capacity,
                                size_t* count) {
  return guarded([&] {
    const auto grid = fresh::default_grid(to_kind(kind));
    std::vector<double> v;
    for (const auto& c : grid.candidates) v.push_back(fresh::swept_value(grid.kind, c));
    copy_out(v, values, capacity, count);
  });
}

fresh_status fresh_embedding_describe(const fresh_embedding* embedding, char* buffer,
                                      size_t capacity, size_t* length) {
  return guarded([&] {
    const std::string text = fresh::describe(to_config(embedding));
    if (length) *length = text.size();
    if (buffer && capacity > 0) {
      const size_t n = std::min(capacity - 1, text.size());
      std::memcpy(buffer, text.data(), n);
      buffer[n] = '\0';
    }
  });
}

fresh_status fresh_image_create(int channels, int height, int width, const double* data,
                                fresh_image** out) {
  return guarded([&] {
    require(out, "out");
    if (channels != 1 && channels != 3) throw fresh::InvalidArgument("channels must be 1 or 3");
    if (height < 1 || width < 1) throw fresh::InvalidArgument("image dimensions must be positive");
    fresh::Image image(channels, height, width);
    if (data) std::copy(data, data + image.data.size(), image.data.begin());
    for (double v : image.data)
      if (!std::isfinite(v)) throw fresh::InvalidArgument("image samples must be finite");
    *out = new fresh_image{std::move(image)};
  });
}

fresh_status fresh_image_load(const char* path, fresh_image** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new fresh_image{fresh::load_png(path)};
  });
}

fresh_status fresh_image_save(const fresh_image* image, const char* path) {
  return guarded([&] {
    require(image, "image");
    require(path, "path");
    fresh::save_png(image->image, path);
  });
}

fresh_status fresh_image_shape(const fresh_image* image, int* channels, int* height, int* width) {
  return guarded([&] {
    require(image, "image");
    if (channels) *channels = image->image.channels;
    if (height) *height = image->image.height;
    if (width) *width = image->image.width;
  });
}

const double* fresh_image_data(const fresh_image* image) {
  return image ? image->image.data.data() : nullptr;
}

fresh_status fresh_image_scaled(const fresh_image* image, double alpha, fresh_image** out) {
  return guarded([&] {
    require(image, "image");
    require(out, "out");
    *out = new fresh_image{fresh::scaled(image->image, alpha)};
  });
}

void fresh_image_free(fresh_image* image) { delete image; }

fresh_status fresh_synth_lowfreq(int side, int max_periods, int terms, uint64_t seed,
                                 fresh_image** out) {
  return guarded([&] {
    require(out, "out");
    *out = new fresh_image{fresh::synth_lowfreq(side, max_periods, terms, seed)};
  });
}

fresh_status fresh_psnr(const fresh_image* pred, const fresh_image* target, double* out) {
  return guarded([&] {
    require(pred, "pred");
    require(target, "target");
    require(out, "out");
    *out = fresh::psnr(pred->image, target->image);
  });
}

fresh_status fresh_ssim(const fresh_image* pred, const fresh_image* target, double* out) {
  return guarded([&] {
    require(pred, "pred");
    require(target, "target");
    require(out, "out");
    *out = fresh::ssim(pred->image, target->image);
  });
}

fresh_status fresh_spectrum_write_csv(const fresh_image* image, int n, int resolution,
                                      const char* path) {
  return guarded([&] {
    require(image, "image");
    const fresh::Image square = image->image.is_square()
                                    ? image->image
                                    : fresh::resample_square(image->image, resolution);
    const fresh::Spectrum s =
        n == 0 ? fresh::spectrum_full(square) : fresh::spectrum_cropped(square, n);
    write_file(path, [&](std::ostream& out) { fresh::write_spectrum_csv(s, out); });
  });
}

fresh_status fresh_select(fresh_model_kind kind, const double* values, size_t count,
                          double fixed_omega, const fresh_image* target,
                          const fresh_select_options* options, fresh_selection** out) {
  return guarded([&] {
    require(target, "target");
    require(options, "options");
    require(out, "out");
    fresh::SelectOptions o;
    o.n = options->n;
    o.repeats = options->repeats;
    o.resolution = options->resolution;
    o.seed = options->seed;
    o.jobs = options->jobs;
    o.arch = to_arch(options->arch);
    o.double_precision = options->double_precision != 0;
    const auto grid = to_grid(kind, values, count, fixed_omega);
    *out = new fresh_selection{fresh::select(grid, target->image, o)};
  });
}

size_t fresh_selection_count(const fresh_selection* selection) {
  return selection ? selection->report.scores.size() : 0;
}

size_t fresh_selection_chosen(const fresh_selection* selection) {
  return selection ? selection->report.chosen : 0;
}

fresh_status fresh_selection_candidate(const fresh_selection* selection, size_t index,
                                       double* value, double* mean, double* se) {
  return guarded([&] {
    require(selection, "selection");
    if (index >= selection->report.scores.size())
      throw fresh::InvalidArgument("candidate index out of range");
    const auto& s = selection->report.scores[index];
    if (value) *value = s.value;
    if (mean) *mean = s.mean;
    if (se) *se = s.se;
  });
}

fresh_status fresh_selection_embedding(const fresh_selection* selection, size_t index,
                                       fresh_embedding* out) {
  return guarded([&] {
    require(selection, "selection");
    require(out, "out");
    if (index >= selection->report.scores.size())
      throw fresh::InvalidArgument("candidate index out of range");
    *out = from_config(selection->report.scores[index].config);
  });
}

fresh_status fresh_selection_write_csv(const fresh_selection* selection, const char* path) {
  return guarded([&] {
    require(selection, "selection");
    write_file(path, [&](std::ostream& out) { fresh::write_selection_csv(selection->report, out); });
  });
}

fresh_status fresh_selection_write_json(const fresh_selection* selection, const char* path) {
  return guarded([&] {
    require(selection, "selection");
    write_file(path,
               [&](std::ostream& out) { fresh::write_selection_json(selection->report, out); });
  });
}

void fresh_selection_free(fresh_selection* selection) { delete selection; }

fresh_status fresh_train(const fresh_embedding* embedding, const fresh_image* image,
                         const fresh_train_options* options, fresh_training** out) {
  return guarded([&] {
    require(image, "image");
    require(out, "out");
    *out = new fresh_training{fresh::train_image(to_config(embedding), image->image, to_train(options))};
  });
}

fresh_status fresh_training_final(const fresh_training* training, double* mse, double* psnr,
                                  double* ssim, double* seconds) {
  return guarded([&] {
    require(training, "training");
    const auto& r = training->result.report;
    if (mse) *mse = r.final_mse;
    if (psnr) *psnr = r.final_psnr;
    if (ssim) *ssim = r.final_ssim;
    if (seconds) *seconds = r.seconds;
  });
}

size_t fresh_training_log_count(const fresh_training* training) {
  return training ? training->result.report.log.size() : 0;
}

fresh_status fresh_training_log_entry(const fresh_training* training, size_t index, int* step,
                                      double* mse, double* psnr) {
  return guarded([&] {
    require(training, "training");
    const auto& log = training->result.report.log;
    if (index >= log.size()) throw fresh::InvalidArgument("log index out of range");
    if (step) *step = log[index].step;
    if (mse) *mse = log[index].mse;
    if (psnr) *psnr = log[index].psnr;
  });
}

fresh_status fresh_training_reconstruction(const fresh_training* training, fresh_image** out) {
  return guarded([&] {
    require(training, "training");
    require(out, "out");
    *out = new fresh_image{training->result.reconstruction};
  });
}

fresh_status fresh_training_model(const fresh_training* training, fresh_model** out) {
  return guarded([&] {
    require(training, "training");
    require(out, "out");
    *out = new fresh_model{training->result.model};
  });
}

fresh_status fresh_training_write_csv(const fresh_training* training, const char* path) {
  return guarded([&] {
    require(training, "training");
    write_file(path,
               [&](std::ostream& out) { fresh::write_train_csv(training->result.report, out); });
  });
}

fresh_status fresh_training_write_json(const fresh_training* training, const char* path) {
  return guarded([&] {
    require(training, "training");
    write_file(path,
               [&](std::ostream& out) { fresh::write_train_json(training->result.report, out); });
  });
}

void fresh_training_free(fresh_training* training) { delete training; }

fresh_status fresh_sweep_run(fresh_model_kind kind, const double* values, size_t count,
                             double fixed_omega, const fresh_image* image,
                             const fresh_train_options* options, int jobs,
                             const double* learning_rates, fresh_sweep** out) {
  return guarded([&] {
    require(image, "image");
    require(out, "out");
    fresh::SweepOptions o;
    o.train = to_train(options);
    o.jobs = jobs;
    if (learning_rates) {
      o.learning_rate_overrides.resize(count);
      for (size_t i = 0; i < count; ++i)
        if (learning_rates[i] > 0.0) o.learning_rate_overrides[i] = learning_rates[i];
    }
    const auto grid = to_grid(kind, values, count, fixed_omega);
    *out = new fresh_sweep{fresh::grid_search(grid, image->image, o)};
  });
}

size_t fresh_sweep_count(const fresh_sweep* sweep) { return sweep ? sweep->report.entries.size() : 0; }

long fresh_sweep_best(const fresh_sweep* sweep) {
  if (!sweep || !sweep->report.best) return -1;
  return static_cast<long>(*sweep->report.best);
}

fresh_status fresh_sweep_entry(const fresh_sweep* sweep, size_t index, double* value,
                               int* diverged, double* psnr, double* ssim) {
  return guarded([&] {
    require(sweep, "sweep");
    if (index >= sweep->report.entries.size())
      throw fresh::InvalidArgument("sweep index out of range");
    const auto& e = sweep->report.entries[index];
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    if (value) *value = e.value;
    if (diverged) *diverged = e.diverged() ? 1 : 0;
    if (psnr) *psnr = e.diverged() ? nan : e.result->report.final_psnr;
    if (ssim) *ssim = e.diverged() ? nan : e.result->report.final_ssim;
  });
}

fresh_status fresh_sweep_training(const fresh_sweep* sweep, size_t index, fresh_training** out) {
  return guarded([&] {
    require(sweep, "sweep");
    require(out, "out");
    if (index >= sweep->report.entries.size())
      throw fresh::InvalidArgument("sweep index out of range");
    const auto& e = sweep->report.entries[index];
    if (e.diverged()) throw fresh::Diverged(e.error, -1);
    *out = new fresh_training{*e.result};
  });
}

fresh_status fresh_sweep_write_csv(const fresh_sweep* sweep, const char* path) {
  return guarded([&] {
    require(sweep, "sweep");
    write_file(path, [&](std::ostream& out) { fresh::write_sweep_csv(sweep->report, out); });
  });
}

void fresh_sweep_free(fresh_sweep* sweep) { delete sweep; }

fresh_status fresh_model_init(const fresh_embedding* embedding, const fresh_arch* arch,
                              int channels, uint64_t seed, fresh_model** out) {
  return guarded([&] {
    require(arch, "arch");
    require(out, "out");
    *out = new fresh_model{
        fresh::init_model<double>(to_config(embedding), to_arch(*arch), channels, seed)};
  });
}

fresh_status fresh_model_load(const char* path, fresh_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new fresh_model{fresh::load_checkpoint(path)};
  });
}

fresh_status fresh_model_save(const fresh_model* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    fresh::save_checkpoint(model->model, path);
  });
}

fresh_status fresh_model_embedding(const fresh_model* model, fresh_embedding* out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    *out = from_config(model->model.config);
  });
}

fresh_status fresh_model_channels(const fresh_model* model, int* channels) {
  return guarded([&] {
    require(model, "model");
    require(channels, "channels");
    *channels = model->model.channels;
  });
}

fresh_status fresh_model_render(const fresh_model* model, int height, int width,
                                fresh_image** out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    if (height < 1 || width < 1) throw fresh::InvalidArgument("render size must be positive");
    *out = new fresh_image{fresh::render(model->model, height, width)};
  });
}

fresh_status fresh_model_magnitudes(const fresh_model* model, double* values, size_t capacity,
                                    size_t* count) {
  return guarded([&] {
    require(model, "model");
    copy_out(fresh::frequency_magnitudes(model->model), values, capacity, count);
  });
}

fresh_status fresh_model_write_magnitudes_csv(const fresh_model* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    const auto m = fresh::frequency_magnitudes(model->model);
    write_file(path, [&](std::ostream& out) { fresh::write_magnitudes_csv(m, out); });
  });
}

fresh_status fresh_model_write_histogram_csv(const fresh_model* model, int bins, const char* path) {
  return guarded([&] {
    require(model, "model");
    const auto h = fresh::make_histogram(fresh::frequency_magnitudes(model->model), bins);
    write_file(path, [&](std::ostream& out) { fresh::write_histogram_csv(h, out); });
  });
}

void fresh_model_free(fresh_model* model) { delete model; }

fresh_status fresh_residual_ratio(const fresh_image* pred_a, const fresh_image* pred_b,
                                  const fresh_image* target, int n, int resolution,
                                  double* values, size_t capacity, size_t* count) {
  return guarded([&] {
    require(pred_a, "pred_a");
    require(pred_b, "pred_b");
    require(target, "target");
    const auto ratio = fresh::residual_spectrum_ratio(pred_a->image, pred_b->image, target->image,
                                                      n, resolution);
    std::vector<double> v;
    for (const auto& r : ratio) v.push_back(r.value_or(std::numeric_limits<double>::quiet_NaN()));
    copy_out(v, values, capacity, count);
  });
}

fresh_status fresh_residual_ratio_write_csv(const fresh_image* pred_a, const fresh_image* pred_b,
                                            const fresh_image* target, int n, int resolution,
                                            const char* path) {
  return guarded([&] {
    require(pred_a, "pred_a");
    require(pred_b, "pred_b");
    require(target, "target");
    const auto ratio = fresh::residual_spectrum_ratio(pred_a->image, pred_b->image, target->image,
                                                      n, resolution);
    write_file(path, [&](std::ostream& out) { fresh::write_ratio_csv(ratio, out); });
  });
}

}  // extern "C"
