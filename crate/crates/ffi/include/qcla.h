#ifndef QCLA_H
#define QCLA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QclaStatus {
  QCLA_STATUS_OK = 0,
  QCLA_STATUS_NULL_POINTER = 1,
  QCLA_STATUS_INVALID_ARGUMENT = 2,
  QCLA_STATUS_WRONG_LEVEL = 3,
  QCLA_STATUS_SIMULATION_FAILED = 4,
  QCLA_STATUS_BUFFER_TOO_SMALL = 5,
  QCLA_STATUS_PANIC = 6,
} QclaStatus;

typedef enum QclaDesign {
  QCLA_DESIGN_OUT1 = 0,
  QCLA_DESIGN_OUT2 = 1,
  QCLA_DESIGN_IN1 = 2,
  QCLA_DESIGN_IN2 = 3,
} QclaDesign;

typedef enum QclaFormat {
  QCLA_FORMAT_QASM3 = 0,
  QCLA_FORMAT_JSON = 1,
} QclaFormat;

typedef enum QclaFormulaSource {
  QCLA_FORMULA_SOURCE_TABLE = 0,
  QCLA_FORMULA_SOURCE_PER_STEP = 1,
} QclaFormulaSource;

/**
 * Opaque circuit handle.
 */
typedef struct QclaCircuit QclaCircuit;

typedef struct QclaResources {
  /**
   * Zero for Toffoli-level circuits; see `clifford_t`.
   */
  uint64_t t_count;
  uint64_t t_depth;
  uint64_t total_depth;
  uint64_t qubit_count;
  uint64_t cnot_count;
  uint64_t measurement_count;
  bool clifford_t;
} QclaResources;

/**
 * A sum of up to 65 bits: `low + 2^64 · high`.
 */
typedef struct QclaSum {
  uint64_t low;
  uint64_t high;
} QclaSum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *qcla_status_message(enum QclaStatus status);

/**
 * Build a Toffoli-level adder of width `n` into `*out`.
 *
 * # Safety
 * `out` must be valid for one pointer write.
 */
enum QclaStatus qcla_build(enum QclaDesign design, uint64_t n, struct QclaCircuit **out);

/**
 * Lower a Toffoli-level circuit to Clifford+T as a new handle.
 *
 * # Safety
 * `circuit` must be a live handle and `out` valid for one pointer write.
 */
enum QclaStatus qcla_lower(const struct QclaCircuit *circuit, struct QclaCircuit **out);

/**
 * Measured resources of a circuit.
 *
 * # Safety
 * `circuit` must be a live handle and `out` valid for one write.
 */
enum QclaStatus qcla_count(const struct QclaCircuit *circuit, struct QclaResources *out);

/**
 * Add `a + b` on the circuit. Toffoli-level circuits run on the reversible
 * simulator; Clifford+T circuits on the statevector simulator with
 * measurement outcomes drawn from `seed`. A wrong sum is an error.
 *
 * # Safety
 * `circuit` must be a live handle and `out` valid for one write.
 */
enum QclaStatus qcla_simulate(const struct QclaCircuit *circuit,
                              uint64_t a,
                              uint64_t b,
                              uint64_t seed,
                              struct QclaSum *out);

/**
 * Serialise into `buf` as a NUL-terminated string. `*written` receives the
 * byte count including the terminator, also when the buffer is too small,
 * so a call with `cap = 0` queries the size.
 *
 * # Safety
 * `circuit` must be a live handle, `written` valid for one write and `buf`
 * valid for `cap` bytes (it may be null when `cap` is 0).
 */
enum QclaStatus qcla_export(const struct QclaCircuit *circuit,
                            enum QclaFormat format,
                            char *buf,
                            size_t cap,
                            size_t *written);

/**
 * Closed-form T-count.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum QclaStatus qcla_formula_tcount(enum QclaDesign design,
                                    uint64_t n,
                                    enum QclaFormulaSource source,
                                    uint64_t *out);

/**
 * Release a handle. Null is ignored.
 *
 * # Safety
 * `circuit` must come from this library and not be used afterwards.
 */
void qcla_circuit_free(struct QclaCircuit *circuit);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCLA_H */
