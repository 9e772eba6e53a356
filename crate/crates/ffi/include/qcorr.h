#ifndef QCORR_H
#define QCORR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible function.
 */
typedef enum QcorrStatus {
  QCORR_STATUS_OK = 0,
  QCORR_STATUS_NULL_POINTER = 1,
  QCORR_STATUS_INVALID_ARGUMENT = 2,
  QCORR_STATUS_DIMENSION_MISMATCH = 3,
  QCORR_STATUS_CHECK_FAILED = 4,
  QCORR_STATUS_INTERNAL = 5,
} QcorrStatus;

/**
 * Code family selector.
 */
typedef enum QcorrFamily {
  QCORR_FAMILY_ODD = 0,
  QCORR_FAMILY_EVEN = 1,
} QcorrFamily;

/**
 * Single-qubit Pauli letter repeated on every qubit.
 */
typedef enum QcorrPauli {
  QCORR_PAULI_I = 0,
  QCORR_PAULI_X = 1,
  QCORR_PAULI_Y = 2,
  QCORR_PAULI_Z = 3,
} QcorrPauli;

/**
 * Region shape reported by [`qcorr_region_kind`].
 */
typedef enum QcorrRegionKind {
  QCORR_REGION_KIND_EMPTY = 0,
  QCORR_REGION_KIND_POINT = 1,
  QCORR_REGION_KIND_SEGMENT = 2,
  QCORR_REGION_KIND_POLYGON = 3,
} QcorrRegionKind;

/**
 * Circuit role selector.
 */
typedef enum QcorrRole {
  QCORR_ROLE_ENCODE = 0,
  QCORR_ROLE_RECOVER = 1,
} QcorrRole;

/**
 * Opaque code handle.
 */
typedef struct QcorrCode QcorrCode;

/**
 * Opaque dense complex matrix.
 */
typedef struct QcorrMatrix QcorrMatrix;

/**
 * Opaque planar convex region.
 */
typedef struct QcorrRegion QcorrRegion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. Owned by the
 * library and valid until the next failing call on the same thread.
 */
const char *qcorr_last_error(void);

/**
 * Builds the odd (`n` odd > 2) or even (`n` even > 2) code.
 *
 * # Safety
 * `out` must be a valid pointer to write a handle into.
 */
enum QcorrStatus qcorr_code_new(enum QcorrFamily fam, uintptr_t n, struct QcorrCode **out);

/**
 * # Safety
 * `code` must be NULL or a handle from [`qcorr_code_new`] not yet freed.
 */
void qcorr_code_free(struct QcorrCode *code);

/**
 * Number of physical qubits, 0 for NULL.
 *
 * # Safety
 * `code` must be NULL or a live handle.
 */
uintptr_t qcorr_code_n(const struct QcorrCode *code);

/**
 * Number of data qubits, 0 for NULL.
 *
 * # Safety
 * `code` must be NULL or a live handle.
 */
uintptr_t qcorr_code_data_qubits(const struct QcorrCode *code);

/**
 * Encoding isometry (`W` or `V`) as a new matrix handle.
 *
 * # Safety
 * `code` must be a live handle and `out` writable.
 */
enum QcorrStatus qcorr_code_isometry(const struct QcorrCode *code, struct QcorrMatrix **out);

/**
 * Full encoding unitary (`R`, or the completion of `V`) as a new handle.
 *
 * # Safety
 * `code` must be a live handle and `out` writable.
 */
enum QcorrStatus qcorr_code_unitary(const struct QcorrCode *code, struct QcorrMatrix **out);

/**
 * # Safety
 * `m` must be NULL or a matrix handle not yet freed.
 */
void qcorr_matrix_free(struct QcorrMatrix *m);

/**
 * # Safety
 * `m` must be NULL or a live handle.
 */
uintptr_t qcorr_matrix_rows(const struct QcorrMatrix *m);

/**
 * # Safety
 * `m` must be NULL or a live handle.
 */
uintptr_t qcorr_matrix_cols(const struct QcorrMatrix *m);

/**
 * Copies all entries into `buf` as interleaved `re, im` pairs, row-major.
 * `len` is the capacity of `buf` in doubles and must be at least
 * `2 * rows * cols`.
 *
 * # Safety
 * `m` must be a live handle and `buf` must hold `len` doubles.
 */
enum QcorrStatus qcorr_matrix_copy(const struct QcorrMatrix *m, double *buf, uintptr_t len);

/**
 * Applies the correlated channel with probabilities `p[0..4]` to a
 * `dim x dim` density matrix.
 *
 * # Safety
 * `p` must hold 4 doubles; `rho` and `out` must hold `2 * dim * dim` doubles.
 */
enum QcorrStatus qcorr_channel_apply(const double *p,
                                     bool relaxed,
                                     const double *rho,
                                     uintptr_t dim,
                                     double *out);

/**
 * Encodes `rho` (dimension `2^data_qubits`), applies the channel, decodes,
 * and writes the decoded data factor to `data_out` (same size as `rho`),
 * the ancilla factor to `ancilla_out` (2x2 for odd codes, 4x4 for even
 * codes; may be NULL) and the product residual to `residual`.
 *
 * # Safety
 * Pointers must be valid for the sizes described above.
 */
enum QcorrStatus qcorr_recover(const struct QcorrCode *code,
                               const double *p,
                               bool relaxed,
                               const double *rho,
                               uintptr_t dim,
                               double *data_out,
                               double *ancilla_out,
                               double *residual);

/**
 * Knill-Laflamme check against `{I, X_n, Y_n, Z_n}`. Writes the verdict and
 * the largest residual; `mu_out`, if non-NULL, receives the 4x4 matrix of
 * scalars as 32 interleaved doubles.
 *
 * # Safety
 * `pass` and `max_residual` must be writable; `mu_out` NULL or 32 doubles.
 */
enum QcorrStatus qcorr_kl_check(const struct QcorrCode *code,
                                double tol,
                                bool *pass,
                                double *max_residual,
                                double *mu_out);

/**
 * Decoded ancilla bit for error `err` on an odd code.
 *
 * # Safety
 * `code` must be a live handle and `bit` writable.
 */
enum QcorrStatus qcorr_syndrome(const struct QcorrCode *code, enum QcorrPauli err, uint8_t *bit);

/**
 * Rank-`k` numerical range of `A_n + i B_n`.
 *
 * # Safety
 * `out` must be writable.
 */
enum QcorrStatus qcorr_nrange_pair(enum QcorrPauli a,
                                   enum QcorrPauli b,
                                   uintptr_t n,
                                   uintptr_t k,
                                   struct QcorrRegion **out);

/**
 * # Safety
 * `r` must be NULL or a region handle not yet freed.
 */
void qcorr_region_free(struct QcorrRegion *r);

/**
 * # Safety
 * `r` must be NULL or a live handle.
 */
enum QcorrRegionKind qcorr_region_kind(const struct QcorrRegion *r);

/**
 * # Safety
 * `r` must be NULL or a live handle.
 */
uintptr_t qcorr_region_vertex_count(const struct QcorrRegion *r);

/**
 * Writes vertex `i` (counter-clockwise order) to `x`, `y`.
 *
 * # Safety
 * `r` must be a live handle; `x` and `y` writable.
 */
enum QcorrStatus qcorr_region_vertex(const struct QcorrRegion *r,
                                     uintptr_t i,
                                     double *x,
                                     double *y);

/**
 * Encoding or recovery circuit in the line format (`cnot 2 1` ...). The
 * returned string must be released with [`qcorr_string_free`].
 *
 * # Safety
 * `out` must be writable.
 */
enum QcorrStatus qcorr_circuit_text(enum QcorrFamily fam,
                                    uintptr_t n,
                                    enum QcorrRole role,
                                    char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void qcorr_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCORR_H */
