/* C interface of the skyplace placement library. */

#ifndef SKYPLACE_H
#define SKYPLACE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum SkyStatus {
  SKY_OK = 0,
  SKY_NULL_POINTER = 1,
  SKY_INVALID_UTF8 = 2,
  SKY_INVALID_ARGUMENT = 3,
  SKY_INFEASIBLE = 4,
  SKY_IO_ERROR = 5,
  SKY_INTERNAL_ERROR = 6,
} SkyStatus;

/**
 * Opaque placement handle.
 */
typedef struct SkyPlacement SkyPlacement;

/**
 * Opaque scenario handle.
 */
typedef struct SkyScenario SkyScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the calling thread's last error message into `buf` (truncated,
 * always NUL-terminated). Returns the full message length in bytes, or 0
 * when no error has been recorded.
 */
uintptr_t sky_last_error_message(char *buf, uintptr_t len);

/**
 * Load a scenario JSON document (any referenced SLF file is resolved
 * relative to it). On success `*out` owns the new handle.
 */
enum SkyStatus sky_scenario_load(const char *path, struct SkyScenario **out);

/**
 * Generate the seeded straight-road scenario.
 */
enum SkyStatus sky_scenario_gen_road(uintptr_t n_gt,
                                     double length_m,
                                     uint64_t seed,
                                     struct SkyScenario **out);

/**
 * Number of ground terminals, or 0 for a null handle.
 */
uintptr_t sky_scenario_n_gt(const struct SkyScenario *scenario);

void sky_scenario_free(struct SkyScenario *scenario);

/**
 * K-means placement with `k` ABSs at the given altitude.
 */
enum SkyStatus sky_place_kmeans(const struct SkyScenario *scenario,
                                uintptr_t k,
                                double altitude_m,
                                uint64_t seed,
                                struct SkyPlacement **out);

/**
 * Spiral disc-cover placement; the coverage radius follows from the
 * scenario's link budget at the given altitude.
 */
enum SkyStatus sky_place_spiral(const struct SkyScenario *scenario,
                                double altitude_m,
                                struct SkyPlacement **out);

/**
 * Number of ABSs, or 0 for a null handle.
 */
uintptr_t sky_placement_n_abs(const struct SkyPlacement *placement);

/**
 * Copy ABS position `index` into `xyz` (3 doubles).
 */
enum SkyStatus sky_placement_position(const struct SkyPlacement *placement,
                                      uintptr_t index,
                                      double *xyz);

void sky_placement_free(struct SkyPlacement *placement);

/**
 * Evaluate a placement under the scenario's channel model. Writes the sum
 * and minimum per-GT rates in bit/s.
 */
enum SkyStatus sky_evaluate(const struct SkyScenario *scenario,
                            const struct SkyPlacement *placement,
                            double *sum_rate_bps,
                            double *min_rate_bps);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SKYPLACE_H */
