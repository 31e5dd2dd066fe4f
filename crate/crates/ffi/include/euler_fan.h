#ifndef EULER_FAN_H
#define EULER_FAN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EfCase {
  EfCase_Case1Unique = 1,
  EfCase_Case2 = 2,
  EfCase_Case3 = 3,
  EfCase_Case4 = 4,
  EfCase_TwoShocks = 5,
  EfCase_ContactFamilyOpen = 6,
} EfCase;

typedef enum EfStatus {
  EfStatus_Ok = 0,
  EfStatus_NullPointer = 1,
  EfStatus_Domain = 3,
  EfStatus_NotFound = 4,
  EfStatus_VerificationFailed = 5,
  EfStatus_Vacuum = 6,
  EfStatus_Panic = 9,
} EfStatus;

typedef enum EfWave {
  EfWave_None = 0,
  EfWave_Shock = 1,
  EfWave_Rarefaction = 2,
} EfWave;

/**
 * Gas model handle.
 */
typedef struct EfGas EfGas;

/**
 * Patched composite.
 */
typedef struct EfPatched EfPatched;

/**
 * Fan subsolution found for normalised data.
 */
typedef struct EfSubsolution EfSubsolution;

/**
 * Primitive state `(rho, u, v, p)`.
 */
typedef struct EfState {
  double rho;
  double u;
  double v;
  double p;
} EfState;

typedef struct EfMiddle {
  double p;
  double v;
  double rho_left;
  double rho_right;
  double u_left;
  double u_right;
} EfMiddle;

/**
 * `middle` is zeroed when `has_middle` is false.
 */
typedef struct EfPattern {
  uint8_t row;
  enum EfWave left_wave;
  bool contact;
  enum EfWave right_wave;
  bool has_middle;
  struct EfMiddle middle;
} EfPattern;

typedef struct EfWindow {
  double upper;
  double v_est;
} EfWindow;

/**
 * One interior region of a fan quintuple.
 */
typedef struct EfRegion {
  double rho;
  double alpha;
  double beta;
  double gamma;
  double delta;
  double c;
  double p;
} EfRegion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ef_version(void);

/**
 * Copies the last error of this thread into `buf` (NUL-terminated, truncated
 * to `len`). Returns the full message length, 0 when there is none.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
uintptr_t ef_last_error_message(char *buf, uintptr_t len);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum EfStatus ef_gas_new(double c_v, struct EfGas **out);

/**
 * # Safety
 * `gas` must come from [`ef_gas_new`] and not be used afterwards.
 */
void ef_gas_free(struct EfGas *gas);

/**
 * # Safety
 * Pointers must be valid; `gas` must be a live handle.
 */
enum EfStatus ef_gas_gamma(const struct EfGas *gas, double *out);

/**
 * Wave pattern of the Riemann problem `left | right`.
 *
 * # Safety
 * Pointers must be valid; `gas` must be a live handle.
 */
enum EfStatus ef_classify(const struct EfGas *gas,
                          const struct EfState *left,
                          const struct EfState *right,
                          double tol_cls,
                          struct EfPattern *out);

/**
 * Upper edge of the window for `rho- v-^2`.
 *
 * # Safety
 * Pointers must be valid; `gas` must be a live handle.
 */
enum EfStatus ef_smallness_upper(const struct EfGas *gas,
                                 double p_minus,
                                 double p_plus,
                                 double *out);

/**
 * # Safety
 * Pointers must be valid; `gas` must be a live handle.
 */
enum EfStatus ef_estimate_threshold(const struct EfGas *gas,
                                    double rho_minus,
                                    double p_minus,
                                    double p_plus,
                                    struct EfWindow *out);

/**
 * Normalises the data and searches the explicit fan family.
 *
 * # Safety
 * Pointers must be valid; `gas` must be a live handle.
 */
enum EfStatus ef_subsolution_find(const struct EfGas *gas,
                                  const struct EfState *left,
                                  const struct EfState *right,
                                  struct EfSubsolution **out);

/**
 * # Safety
 * `sub` must come from [`ef_subsolution_find`] and not be used afterwards.
 */
void ef_subsolution_free(struct EfSubsolution *sub);

/**
 * Interface speeds `mu0 < mu1 < mu2` into `out[0..3]`.
 *
 * # Safety
 * `out` must be valid for three writes; `sub` must be a live handle.
 */
enum EfStatus ef_subsolution_speeds(const struct EfSubsolution *sub, double *out);

/**
 * Interior region `index` (0 or 1) of the lifted quintuple.
 *
 * # Safety
 * Pointers must be valid; `sub` must be a live handle.
 */
enum EfStatus ef_subsolution_region(const struct EfSubsolution *sub,
                                    uintptr_t index,
                                    struct EfRegion *out);

/**
 * Re-runs the full verification with tolerance `tol_eq`; writes the smallest
 * strict margin. Returns [`EfStatus::VerificationFailed`] if any check fails.
 *
 * # Safety
 * Pointers must be valid; `sub` must be a live handle.
 */
enum EfStatus ef_subsolution_verify(const struct EfSubsolution *sub,
                                    const struct EfGas *gas,
                                    double tol_eq,
                                    double *min_margin);

/**
 * Fan subsolution plus trailing wave for any datum of cases 2 to 4.
 *
 * # Safety
 * Pointers must be valid; `gas` must be a live handle.
 */
enum EfStatus ef_patch_assemble(const struct EfGas *gas,
                                const struct EfState *left,
                                const struct EfState *right,
                                struct EfPatched **out);

/**
 * # Safety
 * `p` must come from [`ef_patch_assemble`] and not be used afterwards.
 */
void ef_patched_free(struct EfPatched *p);

/**
 * # Safety
 * Pointers must be valid; `p` must be a live handle.
 */
enum EfStatus ef_patched_case(const struct EfPatched *p, enum EfCase *out);

/**
 * `delta` used, 0 in case 2.
 *
 * # Safety
 * Pointers must be valid; `p` must be a live handle.
 */
enum EfStatus ef_patched_delta(const struct EfPatched *p, double *out);

/**
 * Compatibility margin; NaN when there is no trailing wave.
 *
 * # Safety
 * Pointers must be valid; `p` must be a live handle.
 */
enum EfStatus ef_patched_compatibility(const struct EfPatched *p, double *out);

/**
 * Auxiliary state in the normalised frame; `has_aux` is false in case 2.
 *
 * # Safety
 * Pointers must be valid; `p` must be a live handle.
 */
enum EfStatus ef_patched_aux_state(const struct EfPatched *p, bool *has_aux, struct EfState *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* EULER_FAN_H */
