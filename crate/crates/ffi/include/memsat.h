#ifndef MEMSAT_H
#define MEMSAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MemsatStatus {
  MEMSAT_STATUS_OK = 0,
  MEMSAT_STATUS_NULL_POINTER = 1,
  MEMSAT_STATUS_INVALID_UTF8 = 2,
  MEMSAT_STATUS_PARSE_ERROR = 3,
  MEMSAT_STATUS_INVALID_CONFIG = 4,
  MEMSAT_STATUS_BUFFER_TOO_SMALL = 5,
  MEMSAT_STATUS_IO = 6,
  MEMSAT_STATUS_PANIC = 7,
} MemsatStatus;

typedef enum MemsatOutcome {
  MEMSAT_OUTCOME_SAT = 0,
  MEMSAT_OUTCOME_BUDGET_EXHAUSTED = 1,
} MemsatOutcome;

typedef enum MemsatEngine {
  // Floating-point integrator.
  MEMSAT_ENGINE_FLOAT = 0,
  // Fixed-point schedule emulator.
  MEMSAT_ENGINE_HW = 1,
} MemsatEngine;

// Opaque parsed or generated 3-SAT instance.
typedef struct MemsatInstance MemsatInstance;

// Opaque outcome of one solve.
typedef struct MemsatResult MemsatResult;

// Solver settings. Start from [`memsat_solve_config_default`].
typedef struct MemsatSolveConfig {
  uint64_t seed;
  uint64_t max_steps;
  uint64_t check_every;
  double dt;
  // Nonzero selects single precision for the float engine.
  uint8_t single_precision;
  // One of the `MemsatEngine` values.
  uint32_t engine;
  // Value format for the hw engine: sign + int_bits + frac_bits.
  uint32_t int_bits;
  uint32_t frac_bits;
  uint64_t cycles_per_interval;
} MemsatSolveConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message (NUL-terminated, truncated to fit) into
// `buf` and returns the buffer size needed for the full message.
// Returns 0 when the last call on this thread succeeded.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t memsat_last_error_message(char *buf, size_t len);

// Parses DIMACS CNF text of `len` bytes.
//
// # Safety
// `data` must be valid for `len` bytes; `out` must be a valid pointer.
enum MemsatStatus memsat_instance_parse_dimacs(const uint8_t *data,
                                               size_t len,
                                               struct MemsatInstance **out);

// Reads a DIMACS file from a NUL-terminated UTF-8 path.
//
// # Safety
// `path` must be a valid C string; `out` must be a valid pointer.
enum MemsatStatus memsat_instance_load(const char *path, struct MemsatInstance **out);

// Generates a planted-solution instance with `round(ratio * num_vars)` clauses.
// If `planted` is non-null it receives the planted assignment as 0/1 bytes
// and must hold `num_vars` bytes.
//
// # Safety
// `out` must be a valid pointer; `planted` must be null or valid for `num_vars` bytes.
enum MemsatStatus memsat_instance_generate(size_t num_vars,
                                           double ratio,
                                           double p0,
                                           uint64_t seed,
                                           uint8_t *planted,
                                           struct MemsatInstance **out);

// # Safety
// `inst` must be null or a live handle.
size_t memsat_instance_num_vars(const struct MemsatInstance *inst);

// # Safety
// `inst` must be null or a live handle.
size_t memsat_instance_num_clauses(const struct MemsatInstance *inst);

// # Safety
// `inst` must be null or a handle not yet freed.
void memsat_instance_free(struct MemsatInstance *inst);

// Default settings for `inst` (float64 engine, seed 0).
//
// # Safety
// `inst` must be null or a live handle.
struct MemsatSolveConfig memsat_solve_config_default(const struct MemsatInstance *inst);

// Runs the solver. Budget exhaustion is a successful call with outcome
// `MEMSAT_OUTCOME_BUDGET_EXHAUSTED`.
//
// # Safety
// `inst` and `config` must be live; `out` must be a valid pointer.
enum MemsatStatus memsat_solve(const struct MemsatInstance *inst,
                               const struct MemsatSolveConfig *config,
                               struct MemsatResult **out);

// # Safety
// `res` must be a live handle.
enum MemsatOutcome memsat_result_outcome(const struct MemsatResult *res);

// # Safety
// `res` must be null or a live handle.
uint64_t memsat_result_steps(const struct MemsatResult *res);

// Clock cycles of an hw-engine run; 0 for the float engine.
//
// # Safety
// `res` must be null or a live handle.
uint64_t memsat_result_cycles(const struct MemsatResult *res);

// # Safety
// `res` must be null or a live handle.
double memsat_result_wall_time(const struct MemsatResult *res);

// Copies the satisfying assignment as 0/1 bytes. `written` receives the
// number of variables (0 when the run did not reach SAT).
//
// # Safety
// `res` must be live; `buf` must be null or valid for `len` bytes; `written` must be valid.
enum MemsatStatus memsat_result_assignment(const struct MemsatResult *res,
                                           uint8_t *buf,
                                           size_t len,
                                           size_t *written);

// # Safety
// `res` must be null or a handle not yet freed.
void memsat_result_free(struct MemsatResult *res);

// Modeled hardware seconds: `steps * (num_clauses + 1) * cycles_per_interval / clock_hz`.
double memsat_project_hw_time(uint64_t steps,
                              size_t num_clauses,
                              double clock_hz,
                              uint64_t cycles_per_interval);

// Estimated LUT usage for `num_vars` variables under the default resource model.
double memsat_estimate_luts(size_t num_vars);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MEMSAT_H */
