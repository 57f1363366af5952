/* C interface for the csar imaging toolkit. */

#ifndef CSAR_H
#define CSAR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum csar_status {
  /**
   * Success.
   */
  CSAR_OK = 0,
  /**
   * A required pointer argument was null.
   */
  CSAR_NULL_ARGUMENT = 1,
  /**
   * An argument failed validation.
   */
  CSAR_INVALID_ARGUMENT = 2,
  /**
   * The operation itself failed; see `csar_last_error`.
   */
  CSAR_RUNTIME_ERROR = 3,
  /**
   * A Rust panic was caught at the boundary.
   */
  CSAR_INTERNAL_ERROR = 4,
} csar_status;

/**
 * Geometry handle: validated radar parameters plus the derived focusing
 * filters. Opaque to C.
 */
typedef struct csar_geometry csar_geometry;

/**
 * Complex image handle (row-major interleaved storage). Opaque to C.
 */
typedef struct csar_image csar_image;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the description of the most recent failure on this thread.
 * The pointer stays valid until the next failing call on the same
 * thread. Never null; empty string when no error has occurred.
 */
const char *csar_last_error(void);

/**
 * Create a geometry handle from a key = value config file.
 * On success writes the new handle to `out`.
 */
enum csar_status csar_geometry_from_config(const char *path, struct csar_geometry **out);

/**
 * Create a geometry handle for the built-in airborne simulation preset.
 */
enum csar_status csar_geometry_preset(struct csar_geometry **out);

/**
 * Release a geometry handle. Null is a no-op.
 */
void csar_geometry_free(struct csar_geometry *g);

/**
 * Raw-data grid of a geometry: scene size plus aperture and pulse
 * padding. Either output pointer may be null.
 */
enum csar_status csar_geometry_raw_dims(const struct csar_geometry *g, size_t *rows, size_t *cols);

/**
 * Number of rows in an image.
 */
size_t csar_image_rows(const struct csar_image *img);

/**
 * Number of columns in an image.
 */
size_t csar_image_cols(const struct csar_image *img);

/**
 * Read one complex sample. `re` and `im` may each be null.
 */
enum csar_status csar_image_sample(const struct csar_image *img,
                                   size_t row,
                                   size_t col,
                                   double *re,
                                   double *im);

/**
 * Load an image from the binary interchange format.
 */
enum csar_status csar_image_load(const char *path, struct csar_image **out);

/**
 * Save an image to the binary interchange format.
 */
enum csar_status csar_image_save(const struct csar_image *img, const char *path);

/**
 * Release an image handle. Null is a no-op.
 */
void csar_image_free(struct csar_image *img);

/**
 * Simulate raw echoes for a point-target scene given as a CSV file.
 * `snr_db` sets additive white Gaussian noise; pass INFINITY for a
 * noiseless simulation.
 */
enum csar_status csar_simulate(const struct csar_geometry *g,
                               const char *scene_csv,
                               double snr_db,
                               uint64_t seed,
                               struct csar_image **out);

/**
 * Classical focusing of a full raw data set.
 */
enum csar_status csar_focus(const struct csar_geometry *g,
                            const struct csar_image *raw,
                            struct csar_image **out);

/**
 * Sparse reconstruction from randomly subsampled raw data. `rate` is
 * the kept fraction of samples in (0, 1]; `ratio_az` and `ratio_rg`
 * weight how the rate splits across the two axes; `sparsity` bounds the
 * number of recovered pixels. `max_iters <= 0` selects the default.
 */
enum csar_status csar_reconstruct(const struct csar_geometry *g,
                                  const struct csar_image *raw,
                                  double rate,
                                  double ratio_az,
                                  double ratio_rg,
                                  uint64_t seed,
                                  size_t sparsity,
                                  int max_iters,
                                  struct csar_image **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CSAR_H */
