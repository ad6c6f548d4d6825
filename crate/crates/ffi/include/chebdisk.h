#ifndef CHEBDISK_H
#define CHEBDISK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Newton tolerance used by the command-line tool.
 */
#define CD_DEFAULT_TOL 1e-8

/*
 Newton iteration cap used by the command-line tool.
 */
#define CD_DEFAULT_MAX_ITER 50

/*
 Result of every fallible call.
 */
enum CdStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  CD_STATUS_OK = 0,
  CD_STATUS_NULL_POINTER = 1,
  CD_STATUS_INVALID_ARGUMENT = 2,
  CD_STATUS_INVALID_GRID = 3,
  CD_STATUS_UNKNOWN_PROBLEM = 4,
  CD_STATUS_SINGULAR = 5,
  /*
   The solution handle is still produced.
   */
  CD_STATUS_NO_CONVERGENCE = 6,
  CD_STATUS_BUFFER_TOO_SMALL = 7,
  CD_STATUS_PANIC = 8,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum CdStatus CdStatus;
#else
typedef int32_t CdStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/*
 A registered problem discretized on one grid.
 */
typedef struct CdProblem CdProblem;

/*
 The outcome of a solve.
 */
typedef struct CdSolution CdSolution;

/*
 Scalar diagnostics of a solution.
 */
typedef struct CdSolveInfo {
  size_t newton_iterations;
  /*
   1 when the Newton tolerance was met or the problem is linear.
   */
  int32_t converged;
  double residual_norm;
  double max_error;
  double two_norm_error;
  /*
   Reciprocal condition estimate; below machine epsilon the system was
   singular to working precision.
   */
  double rcond;
} CdSolveInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *cd_version(void);

/*
 Copies the last error message of this thread into `buf` (truncated and
 NUL-terminated) and returns its full length in bytes. Passing a null
 `buf` only queries the length.

 # Safety
 `buf` must be null or valid for `len` bytes.
 */
size_t cd_last_error(char *buf, size_t len);

/*
 Number of registered problems.
 */
size_t cd_problem_count(void);

/*
 Writes the identifier of problem `index` into `buf`.

 # Safety
 `buf` must be valid for `len` bytes.
 */
CdStatus cd_problem_id(size_t index, char *buf, size_t len);

/*
 Builds an interval problem with `n` panels.

 # Safety
 `id` must be a NUL-terminated string and `out` a valid pointer.
 */
CdStatus cd_problem_new_line(const char *id, size_t n, struct CdProblem **out);

/*
 Builds a disk problem with `n_rings` rings of `n_theta` angles.

 # Safety
 `id` must be a NUL-terminated string and `out` a valid pointer.
 */
CdStatus cd_problem_new_disk(const char *id,
                             size_t n_rings,
                             size_t n_theta,
                             double radius,
                             struct CdProblem **out);

/*
 Releases a problem; null is ignored.

 # Safety
 `p` must be null or a handle from this library not yet freed.
 */
void cd_problem_free(struct CdProblem *p);

/*
 Number of unknowns after boundary elimination; 0 for a null handle.

 # Safety
 `p` must be null or a live problem handle.
 */
size_t cd_problem_unknowns(const struct CdProblem *p);

/*
 Solves `p`. On `CD_STATUS_NO_CONVERGENCE` the best iterate is still
 returned through `out`.

 # Safety
 `p` must be a live problem handle and `out` a valid pointer.
 */
CdStatus cd_solve(const struct CdProblem *p, double tol, size_t max_iter, struct CdSolution **out);

/*
 Releases a solution; null is ignored.

 # Safety
 `s` must be null or a handle from this library not yet freed.
 */
void cd_solution_free(struct CdSolution *s);

/*
 Number of grid nodes in the solution; 0 for a null handle.

 # Safety
 `s` must be null or a live solution handle.
 */
size_t cd_solution_len(const struct CdSolution *s);

/*
 Copies the values at every node into `buf`.

 # Safety
 `s` must be a live solution handle and `buf` valid for `len` doubles.
 */
CdStatus cd_solution_values(const struct CdSolution *s, double *buf, size_t len);

/*
 Copies node coordinates: `x` into `first` on an interval (`second` may
 be null), `r` and `theta` into `first` and `second` on the disk.

 # Safety
 `s` must be a live solution handle; `first` and non-null `second` must be
 valid for `len` doubles.
 */
CdStatus cd_solution_nodes(const struct CdSolution *s, double *first, double *second, size_t len);

/*
 Fills `info` with the solve diagnostics and errors against the exact solution.

 # Safety
 `s` must be a live solution handle and `info` a valid pointer.
 */
CdStatus cd_solution_info(const struct CdSolution *s, struct CdSolveInfo *info);

/*
 Writes the `n + 1` Chebyshev-Gauss-Lobatto nodes of `[a, b]`, descending.

 # Safety
 `buf` must be valid for `len` doubles.
 */
CdStatus cd_cheb_nodes(size_t n, double a, double b, double *buf, size_t len);

/*
 Writes the order-`m` Chebyshev differentiation matrix on `n` panels of
 `[a, b]` in row-major order, `(n + 1)^2` values.

 # Safety
 `buf` must be valid for `len` doubles.
 */
CdStatus cd_cheb_diff_matrix(size_t n, double a, double b, size_t m, double *buf, size_t len);

/*
 Writes the order-`m` Fourier differentiation matrix on `n_theta`
 equispaced angles in row-major order, `n_theta^2` values.

 # Safety
 `buf` must be valid for `len` doubles.
 */
CdStatus cd_fourier_diff_matrix(size_t n_theta, size_t m, double *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHEBDISK_H */
