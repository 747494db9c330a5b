/* C interface to the fresh library: spectrum-matched selection of INR
 * embedding hyperparameters, plus training and analysis helpers.
 *
 * Every function returns a fresh_status. On failure the message of the most
 * recent error on the calling thread is available from fresh_last_error().
 * Objects returned through out-parameters are owned by the caller and must be
 * released with the matching *_free function. Paths are UTF-8. */
#ifndef FRESH_FRESH_H
#define FRESH_FRESH_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(FRESH_BUILDING_LIBRARY)
#define FRESH_API __attribute__((visibility("default")))
#else
#define FRESH_API
#endif

typedef enum fresh_status {
  FRESH_OK = 0,
  FRESH_ERR_INVALID_ARGUMENT = 1,
  FRESH_ERR_DEGENERATE = 2, /* constant target, all-zero spectrum */
  FRESH_ERR_DIVERGED = 3,   /* non-finite training loss */
  FRESH_ERR_IO = 4,
  FRESH_ERR_NOT_FOUND = 5,
  FRESH_ERR_INTERNAL = 6
} fresh_status;

/* Embedding families. */
typedef enum fresh_family {
  FRESH_FAMILY_SIREN = 0,   /* param = omega0 */
  FRESH_FAMILY_FOURIER = 1, /* param = sigma */
  FRESH_FAMILY_FINER = 2    /* param = omega, k = bias range (0 removes the bias) */
} fresh_family;

typedef struct fresh_embedding {
  fresh_family family;
  double param;
  double k;
} fresh_embedding;

/* Which hyperparameter a candidate grid sweeps. FINER sweeps k at a fixed
 * omega; FINER_K0 sweeps omega with k = 0. */
typedef enum fresh_model_kind {
  FRESH_MODEL_SIREN = 0,
  FRESH_MODEL_FOURIER = 1,
  FRESH_MODEL_FINER = 2,
  FRESH_MODEL_FINER_K0 = 3
} fresh_model_kind;

typedef struct fresh_arch {
  int hidden_layers;
  int width;
  double hidden_omega; /* scale of the sine hidden layers */
} fresh_arch;

typedef struct fresh_select_options {
  int n;          /* spectrum size */
  int repeats;    /* initializations averaged per candidate */
  int resolution; /* working resolution R of the spectra */
  uint64_t seed;
  int jobs;
  fresh_arch arch;
  int double_precision;
} fresh_select_options;

typedef struct fresh_train_options {
  int steps;
  int log_every;
  double learning_rate; /* <= 0 selects the family default */
  uint64_t seed;
  fresh_arch arch;
  size_t max_batch; /* full batch up to this many pixels */
  int double_precision;
} fresh_train_options;

typedef struct fresh_image fresh_image;
typedef struct fresh_model fresh_model;
typedef struct fresh_selection fresh_selection;
typedef struct fresh_training fresh_training;
typedef struct fresh_sweep fresh_sweep;

FRESH_API const char* fresh_last_error(void);
FRESH_API const char* fresh_version(void);

FRESH_API void fresh_arch_default(fresh_arch* arch);
FRESH_API void fresh_select_options_default(fresh_select_options* options);
FRESH_API void fresh_train_options_default(fresh_train_options* options);

FRESH_API const char* fresh_model_kind_name(fresh_model_kind kind);
FRESH_API fresh_status fresh_model_kind_parse(const char* name, fresh_model_kind* kind);
/* Embedding for one grid value of `kind`; fixed_omega is used by FINER only. */
FRESH_API fresh_status fresh_model_kind_embedding(fresh_model_kind kind, double value,
                                                  double fixed_omega, fresh_embedding* out);
/* Writes at most `capacity` default grid values; *count receives the full size. */
FRESH_API fresh_status fresh_default_grid(fresh_model_kind kind, double* values, size_t capacity,
                                          size_t* count);
/* Human-readable form such as "siren(omega0=30)". Copies at most `capacity`
 * bytes including the terminator; *length receives the full length. */
FRESH_API fresh_status fresh_embedding_describe(const fresh_embedding* embedding, char* buffer,
                                                size_t capacity, size_t* length);

/* Images: channel-major doubles, sample (c, r, x) at (c * height + r) * width + x. */
FRESH_API fresh_status fresh_image_create(int channels, int height, int width, const double* data,
                                          fresh_image** out);
FRESH_API fresh_status fresh_image_load(const char* path, fresh_image** out);
FRESH_API fresh_status fresh_image_save(const fresh_image* image, const char* path);
FRESH_API fresh_status fresh_image_shape(const fresh_image* image, int* channels, int* height,
                                         int* width);
FRESH_API const double* fresh_image_data(const fresh_image* image);
FRESH_API fresh_status fresh_image_scaled(const fresh_image* image, double alpha,
                                          fresh_image** out);
FRESH_API void fresh_image_free(fresh_image* image);

FRESH_API fresh_status fresh_synth_lowfreq(int side, int max_periods, int terms, uint64_t seed,
                                           fresh_image** out);

FRESH_API fresh_status fresh_psnr(const fresh_image* pred, const fresh_image* target,
                                  double* out);
FRESH_API fresh_status fresh_ssim(const fresh_image* pred, const fresh_image* target,
                                  double* out);

/* Spectrum CSV (`d,value`). n = 0 writes the full spectrum. Non-square images
 * are resampled to resolution x resolution first. */
FRESH_API fresh_status fresh_spectrum_write_csv(const fresh_image* image, int n, int resolution,
                                                const char* path);

/* Selection. */
FRESH_API fresh_status fresh_select(fresh_model_kind kind, const double* values, size_t count,
                                    double fixed_omega, const fresh_image* target,
                                    const fresh_select_options* options, fresh_selection** out);
FRESH_API size_t fresh_selection_count(const fresh_selection* selection);
FRESH_API size_t fresh_selection_chosen(const fresh_selection* selection);
FRESH_API fresh_status fresh_selection_candidate(const fresh_selection* selection, size_t index,
                                                 double* value, double* mean, double* se);
FRESH_API fresh_status fresh_selection_embedding(const fresh_selection* selection, size_t index,
                                                 fresh_embedding* out);
FRESH_API fresh_status fresh_selection_write_csv(const fresh_selection* selection,
                                                 const char* path);
FRESH_API fresh_status fresh_selection_write_json(const fresh_selection* selection,
                                                  const char* path);
FRESH_API void fresh_selection_free(fresh_selection* selection);

/* Training. */
FRESH_API fresh_status fresh_train(const fresh_embedding* embedding, const fresh_image* image,
                                   const fresh_train_options* options, fresh_training** out);
FRESH_API fresh_status fresh_training_final(const fresh_training* training, double* mse,
                                            double* psnr, double* ssim, double* seconds);
FRESH_API size_t fresh_training_log_count(const fresh_training* training);
FRESH_API fresh_status fresh_training_log_entry(const fresh_training* training, size_t index,
                                                int* step, double* mse, double* psnr);
FRESH_API fresh_status fresh_training_reconstruction(const fresh_training* training,
                                                     fresh_image** out);
FRESH_API fresh_status fresh_training_model(const fresh_training* training, fresh_model** out);
FRESH_API fresh_status fresh_training_write_csv(const fresh_training* training, const char* path);
FRESH_API fresh_status fresh_training_write_json(const fresh_training* training,
                                                 const char* path);
FRESH_API void fresh_training_free(fresh_training* training);

/* Grid search. learning_rates may be NULL; otherwise it has `count` entries
 * and a non-positive entry keeps the default. Diverged candidates are
 * recorded, not fatal. */
FRESH_API fresh_status fresh_sweep_run(fresh_model_kind kind, const double* values, size_t count,
                                       double fixed_omega, const fresh_image* image,
                                       const fresh_train_options* options, int jobs,
                                       const double* learning_rates, fresh_sweep** out);
FRESH_API size_t fresh_sweep_count(const fresh_sweep* sweep);
/* Index of the best converged entry, or -1 when every entry diverged. */
FRESH_API long fresh_sweep_best(const fresh_sweep* sweep);
FRESH_API fresh_status fresh_sweep_entry(const fresh_sweep* sweep, size_t index, double* value,
                                         int* diverged, double* psnr, double* ssim);
FRESH_API fresh_status fresh_sweep_training(const fresh_sweep* sweep, size_t index,
                                            fresh_training** out);
FRESH_API fresh_status fresh_sweep_write_csv(const fresh_sweep* sweep, const char* path);
FRESH_API void fresh_sweep_free(fresh_sweep* sweep);

/* Models and checkpoints. */
FRESH_API fresh_status fresh_model_init(const fresh_embedding* embedding, const fresh_arch* arch,
                                        int channels, uint64_t seed, fresh_model** out);
FRESH_API fresh_status fresh_model_load(const char* path, fresh_model** out);
FRESH_API fresh_status fresh_model_save(const fresh_model* model, const char* path);
FRESH_API fresh_status fresh_model_embedding(const fresh_model* model, fresh_embedding* out);
FRESH_API fresh_status fresh_model_channels(const fresh_model* model, int* channels);
FRESH_API fresh_status fresh_model_render(const fresh_model* model, int height, int width,
                                          fresh_image** out);
/* One magnitude per embedding row; see fresh_default_grid for the capacity convention. */
FRESH_API fresh_status fresh_model_magnitudes(const fresh_model* model, double* values,
                                              size_t capacity, size_t* count);
FRESH_API fresh_status fresh_model_write_magnitudes_csv(const fresh_model* model,
                                                        const char* path);
FRESH_API fresh_status fresh_model_write_histogram_csv(const fresh_model* model, int bins,
                                                       const char* path);
FRESH_API void fresh_model_free(fresh_model* model);

/* Ratio of residual spectra (target - pred_a) / (target - pred_b), entries
 * d = 1..n. Missing entries (zero denominator) are NaN in `values` and empty
 * in the CSV. */
FRESH_API fresh_status fresh_residual_ratio(const fresh_image* pred_a, const fresh_image* pred_b,
                                            const fresh_image* target, int n, int resolution,
                                            double* values, size_t capacity, size_t* count);
FRESH_API fresh_status fresh_residual_ratio_write_csv(const fresh_image* pred_a,
                                                      const fresh_image* pred_b,
                                                      const fresh_image* target, int n,
                                                      int resolution, const char* path);

#ifdef __cplusplus
}
#endif

#endif
