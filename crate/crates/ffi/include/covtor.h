#ifndef COVTOR_H
#define COVTOR_H

/* Generated by cbindgen from covtor-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes shared by every fallible call.
 */
typedef enum CovtorStatus {
  COVTOR_STATUS_OK = 0,
  /*
   Malformed input: JSON, spec strings, ranges.
   */
  COVTOR_STATUS_PARSE = 1,
  /*
   Structurally invalid mathematics: shapes, chain condition,
   rank-deficient lattices, empty intersections.
   */
  COVTOR_STATUS_VALIDATION = 2,
  /*
   Exact/spectral cross-checks failed (rank firewall, norm bound,
   kernel coverage).
   */
  COVTOR_STATUS_CROSSCHECK = 3,
  /*
   A panic or other internal fault; details in the last error.
   */
  COVTOR_STATUS_INTERNAL = 4,
  /*
   A NULL argument or invalid handle.
   */
  COVTOR_STATUS_NULL_ARGUMENT = 5,
} CovtorStatus;

/*
 Opaque handle to a validated-shape chain complex.
 */
typedef struct CovtorComplex CovtorComplex;

/*
 Opaque handle to a sublattice of Z^n.
 */
typedef struct CovtorLattice CovtorLattice;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static string; do not free.
 */
const char *covtor_version(void);

/*
 Copy of the last error message on this thread, or NULL if none.
 Free with `covtor_string_free`.
 */
char *covtor_last_error(void);

/*
 Frees a string allocated by this library. NULL is a no-op.

 # Safety
 `s` must have been returned by a covtor function and not freed before.
 */
void covtor_string_free(char *s);

/*
 Parses a complex from JSON text. Returns NULL on failure.

 # Safety
 `json` must be a valid NUL-terminated string.
 */
struct CovtorComplex *covtor_complex_parse_json(const char *json);

/*
 Loads a complex from a JSON file. Returns NULL on failure.

 # Safety
 `path` must be a valid NUL-terminated string.
 */
struct CovtorComplex *covtor_complex_load(const char *path);

/*
 Frees a complex handle. NULL is a no-op.

 # Safety
 `c` must be a live handle from this library.
 */
void covtor_complex_free(struct CovtorComplex *c);

/*
 Checks the chain condition exactly.

 # Safety
 `c` must be a live handle from this library.
 */
enum CovtorStatus covtor_complex_validate(const struct CovtorComplex *c);

/*
 Number of variables of the ambient group ring.

 # Safety
 `c` must be a live handle from this library.
 */
uintptr_t covtor_complex_dim(const struct CovtorComplex *c);

/*
 Number of chain levels (top level + 1).

 # Safety
 `c` must be a live handle from this library.
 */
uintptr_t covtor_complex_levels(const struct CovtorComplex *c);

/*
 Parses a sublattice spec (`diag:…` or `mat:…`) in ambient dimension
 `n`. Returns NULL on failure.

 # Safety
 `spec` must be a valid NUL-terminated string.
 */
struct CovtorLattice *covtor_lattice_parse(const char *spec, uintptr_t n);

/*
 Frees a lattice handle. NULL is a no-op.

 # Safety
 `l` must be a live handle from this library.
 */
void covtor_lattice_free(struct CovtorLattice *l);

/*
 Girth (minimal l1 norm of a nonzero lattice vector) of a full-rank
 lattice, written to `out`.

 # Safety
 `l` must be a live handle; `out` must point to writable memory.
 */
enum CovtorStatus covtor_lattice_girth(const struct CovtorLattice *l, uint64_t *out);

/*
 Index `|Z^n : Gamma|` as a decimal string (big integers do not fit a
 fixed-width type). Returns NULL on failure; free the result.

 # Safety
 `l` must be a live handle from this library.
 */
char *covtor_lattice_index(const struct CovtorLattice *l);

/*
 Full torsion report (homology torsion, Ray-Singer torsion, squared
 regulators, residual) as a JSON string. `eps` is the relative rank
 tolerance; pass 0 for the default 1e-9. Returns NULL on failure.

 # Safety
 `c` and `l` must be live handles from this library.
 */
char *covtor_report_json(const struct CovtorComplex *c, const struct CovtorLattice *l, double eps);

/*
 Torsion-coset diagnostics for the Laplacian at `level`: per-coset
 membership counts, volumes, and the kernel decomposition check.
 `cosets` is an array of `n_cosets` spec strings `u=…;L=…`. Returns a
 JSON string or NULL on failure (a non-covering coset list is a
 failure with crosscheck status).

 # Safety
 `c` and `l` must be live handles; `cosets` must point to `n_cosets`
 valid NUL-terminated strings.
 */
char *covtor_coset_json(const struct CovtorComplex *c,
                        const struct CovtorLattice *l,
                        uintptr_t level,
                        const char *const *cosets,
                        uintptr_t n_cosets);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COVTOR_H */
