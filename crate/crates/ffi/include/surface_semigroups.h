#ifndef SURFACE_SEMIGROUPS_H
#define SURFACE_SEMIGROUPS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SsField {
  SS_FIELD_GAUSSIAN = 0,
  SS_FIELD_EISENSTEIN = 1,
  SS_FIELD_GENERIC = 2,
} SsField;

typedef enum SsModuliKind {
  SS_MODULI_KIND_ISOLATED_REDUCED_POINTS = 0,
  SS_MODULI_KIND_ELLIPTIC_QUOTIENT = 1,
  SS_MODULI_KIND_ABELIAN_FACTOR = 2,
  SS_MODULI_KIND_FINITE_SET = 3,
  SS_MODULI_KIND_EMPTY = 4,
  SS_MODULI_KIND_UNKNOWN = 5,
} SsModuliKind;

// Result of every fallible call.
typedef enum SsStatus {
  SS_STATUS_OK = 0,
  SS_STATUS_NULL_POINTER = 1,
  SS_STATUS_INVALID_UTF8 = 2,
  SS_STATUS_PARSE_ERROR = 3,
  SS_STATUS_SCHEMA_ERROR = 4,
  SS_STATUS_INVALID_DESCRIPTOR = 5,
  SS_STATUS_ACTION_INVALID = 6,
  SS_STATUS_INVALID_ARGUMENT = 7,
  SS_STATUS_OVERFLOW = 8,
  SS_STATUS_INTERNAL = 9,
  SS_STATUS_PANIC = 10,
} SsStatus;

typedef enum SsSubcommand {
  SS_SUBCOMMAND_CLASSIFY = 0,
  SS_SUBCOMMAND_VERIFY_LAW = 1,
  SS_SUBCOMMAND_MODULI = 2,
  SS_SUBCOMMAND_CONE = 3,
} SsSubcommand;

typedef enum SsVerdict {
  SS_VERDICT_YES = 0,
  SS_VERDICT_NO = 1,
  SS_VERDICT_CONDITIONAL = 2,
} SsVerdict;

// Opaque parsed surface descriptor.
typedef struct SsDescriptor SsDescriptor;

// Opaque classification report.
typedef struct SsReport SsReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. The pointer
// stays valid until the next call into the library from the same thread.
const char *ss_last_error_message(void);

// Releases a string returned by the library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed already.
void ss_string_free(char *s);

// Parses a JSON descriptor document.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
enum SsStatus ss_descriptor_parse(const char *json, struct SsDescriptor **out);

// Canonical JSON for a descriptor; free the result with [`ss_string_free`].
//
// # Safety
// `d` must be a live descriptor handle and `out` a writable pointer.
enum SsStatus ss_descriptor_to_json(const struct SsDescriptor *d, char **out);

// # Safety
// `d` must be NULL or a handle from [`ss_descriptor_parse`] not yet freed.
void ss_descriptor_free(struct SsDescriptor *d);

// # Safety
// `d` must be a live descriptor handle and `out` a writable pointer.
enum SsStatus ss_classify(const struct SsDescriptor *d, struct SsReport **out);

// # Safety
// `r` must be NULL or a handle from [`ss_classify`] not yet freed.
void ss_report_free(struct SsReport *r);

// # Safety
// `r` must be a live report handle and `out` a writable pointer.
enum SsStatus ss_report_verdict(const struct SsReport *r, enum SsVerdict *out);

// # Safety
// `r` must be a live report handle and `out` a writable pointer.
enum SsStatus ss_report_moduli_kind(const struct SsReport *r, enum SsModuliKind *out);

// Human-readable derivation; free the result with [`ss_string_free`].
//
// # Safety
// `r` must be a live report handle and `out` a writable pointer.
enum SsStatus ss_report_explain(const struct SsReport *r, char **out);

// Machine-format JSON for a report, as printed by `classify --format machine`.
//
// # Safety
// `r` must be a live report handle and `out` a writable pointer.
enum SsStatus ss_report_to_json(const struct SsReport *r, char **out);

// Runs a CLI subcommand on a JSON document and returns its machine output.
// Errors in the document are reported inside the JSON and through
// `exit_code`, not through the status.
//
// # Safety
// `json` must be a NUL-terminated string; `out_json` and `exit_code` must be
// writable pointers.
enum SsStatus ss_run(enum SsSubcommand subcommand,
                     const char *json,
                     uint32_t torsion_level,
                     char **out_json,
                     int32_t *exit_code);

// `D₁·D₂` for `D = a·C₀ + b·f` on a ruled surface of genus `g` and invariant `e`.
//
// # Safety
// `out` must be a writable pointer.
enum SsStatus ss_ruled_intersect(uint32_t g,
                                 int64_t e,
                                 int64_t a1,
                                 int64_t b1,
                                 int64_t a2,
                                 int64_t b2,
                                 int64_t *out);

// # Safety
// `out` must be a writable pointer.
enum SsStatus ss_ruled_is_ample(uint32_t g, int64_t e, int64_t a, int64_t b, bool *out);

// `dim Ext¹(𝒪(−d₂), 𝒪(d₁))` on the projective line.
uint64_t ss_ext1_dim(int64_t d1, int64_t d2);

// Number of fixed points of `x ↦ (re + im·τ)x` on the torus of `field`.
//
// # Safety
// `out` must be a writable pointer.
enum SsStatus ss_fixed_point_count(int64_t re, int64_t im, enum SsField field, int64_t *out);

// `δ = 2g_B − 2 + χ(O_S) + Σ(1 − 1/mᵢ)` for a minimal elliptic fibration,
// written as `num/den` in lowest terms.
//
// # Safety
// `multiplicities` must point to `len` readable values (or be NULL when
// `len` is 0); `num` and `den` must be writable pointers.
enum SsStatus ss_delta_invariant(uint32_t g_b,
                                 int64_t chi,
                                 const uint32_t *multiplicities,
                                 size_t len,
                                 int64_t *num,
                                 int64_t *den);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SURFACE_SEMIGROUPS_H */
