/*
 * polymax — exact algebra and oracle detection for convex piecewise-affine
 * functions with integer slopes.
 *
 * C interface to the shared library. All handles are opaque; every function
 * that can fail returns a pm_status and leaves a thread-local message
 * readable through pm_last_error(). Rationals cross the boundary as exact
 * strings ("p/q" or "p"), points as comma-separated rationals ("1/2,-3"),
 * and structured data as JSON documents matching the file formats described
 * in the README.
 *
 * Strings returned through char** parameters (and from pm_function_to_json
 * and friends) are heap-allocated; release them with pm_string_free.
 */
#ifndef POLYMAX_H
#define POLYMAX_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct pm_function pm_function;
typedef struct pm_polyhedron pm_polyhedron;
typedef struct pm_oracle pm_oracle;
typedef struct pm_outcome pm_outcome;

typedef enum pm_status {
  PM_OK = 0,
  PM_ERR_PARSE = 1,
  PM_ERR_DIMENSION = 2,
  PM_ERR_DOMAIN = 3,
  PM_ERR_PRECONDITION = 4,
  PM_ERR_UNKNOWN_NAME = 5,
  PM_ERR_INVALID_ARGUMENT = 6,
  PM_ERR_UNSUPPORTED = 7,
  PM_ERR_INTERNAL = 8
} pm_status;

const char* pm_version(void);
/* Message for the most recent failure on this thread; never NULL. */
const char* pm_last_error(void);
void pm_string_free(char* s);

/* Exact arithmetic on rational strings ("p/q" or "p", lowest terms). */
pm_status pm_rat_add(const char* a, const char* b, char** out);
/* *out is -1, 0 or 1. */
pm_status pm_rat_cmp(const char* a, const char* b, int* out);

/* ---- polyhedral functions (max of affine functionals) ---- */

pm_status pm_function_parse(const char* json, pm_function** out);
char* pm_function_to_json(const pm_function* f);
void pm_function_free(pm_function* f);
int pm_function_dim(const pm_function* f);

pm_status pm_function_eval(const pm_function* f, const char* point, char** value_out);
pm_status pm_function_canonicalize(const pm_function* f, pm_function** out);
/* "integral" | "transintegral" | "general" (of the canonical form). */
pm_status pm_function_classify(const pm_function* f, char** class_out);
pm_status pm_function_trop_add(const pm_function* f, const pm_function* g, pm_function** out);
pm_status pm_function_trop_mul(const pm_function* f, const pm_function* g, pm_function** out);
pm_status pm_function_restrict(const pm_function* f, const char* base, const char* direction,
                               pm_function** out);
pm_status pm_function_dir_deriv(const pm_function* f, const char* x, const char* z,
                                char** value_out);
pm_status pm_function_support_at(const pm_function* f, const char* x, char** functional_json);
/* All maximal domains of affinity: [{"functional": ..., "region": ...}]. */
pm_status pm_function_domains(const pm_function* f, char** json_out);
pm_status pm_function_is_tropical(const pm_function* f, int* out);
/* {"down": fn, "left": fn, "diag": fn} restrictions to the tropical line. */
pm_status pm_function_tropical_restrictions(const pm_function* f, const char* center,
                                            char** json_out);
/* Canonical 1-D structure: {"lines": [...], "breakpoints": [...]}. */
pm_status pm_function_pieces1d(const pm_function* f, char** json_out);
/* 2-D cell decomposition clipped to a box, with polygon vertices. */
pm_status pm_function_cells2d(const pm_function* f, const char* box_json, char** json_out);

/* ---- rational polyhedra ---- */

pm_status pm_polyhedron_parse(const char* json, pm_polyhedron** out);
char* pm_polyhedron_to_json(const pm_polyhedron* p);
void pm_polyhedron_free(pm_polyhedron* p);
pm_status pm_polyhedron_contains(const pm_polyhedron* p, const char* point, int* out);
pm_status pm_polyhedron_interior_contains(const pm_polyhedron* p, const char* point, int* out);
pm_status pm_polyhedron_facets(const pm_polyhedron* p, char** json_out);
pm_status pm_polyhedron_vertices(const pm_polyhedron* p, char** json_out);
pm_status pm_polyhedron_is_affine_orthant(const pm_polyhedron* p, int* out);

/* ---- oracles ---- */

pm_status pm_oracle_builtin(const char* name, pm_oracle** out);
/* domain may be NULL for all of R^n. */
pm_status pm_oracle_from_function(const pm_function* f, const pm_polyhedron* domain,
                                  pm_oracle** out);
void pm_oracle_free(pm_oracle* o);
int pm_oracle_dim(const pm_oracle* o);
pm_status pm_oracle_query(pm_oracle* o, const char* point, char** value_out);
long long pm_oracle_query_count(const pm_oracle* o);

/* Jensen checks along all pairs on axis-parallel grid lines of the box at
 * the given resolution, with convex-combination weights ts ("1/4,1/2,3/4").
 * Emits a report JSON; *pass_out is 1 on pass. */
pm_status pm_oracle_jensen_box(pm_oracle* o, const char* box_json, const char* resolution,
                               const char* ts, char** report_json, int* pass_out);
pm_status pm_oracle_lipschitz(pm_oracle* o, const char* box_json, const char* resolution,
                              char** value_out);

/* ---- detectors; outcomes carry their certificates ---- */

pm_status pm_detect1d(pm_oracle* o, const char* a, const char* b, int budget,
                      pm_outcome** out);
pm_status pm_detect_integral(pm_oracle* o, const char* a, const char* b, int budget,
                             int samples, pm_outcome** out);
/* integral_mode: 0 transintegral, 1 integral. step: one rational for all axes. */
pm_status pm_detectnd(pm_oracle* o, const char* box_json, const char* step, int budget,
                      int integral_mode, pm_outcome** out);
/* lines_json: [{"base": "...", "direction": "...", "kind": "segment"|"ray",
 *               "t0": "...", "t1": "..."}]. */
pm_status pm_detect_skeleton(pm_oracle* o, const pm_polyhedron* p, const char* lines_json,
                             int budget, pm_outcome** out);
/* centers_json: ["0,0", "1,-1", ...]. */
pm_status pm_detect_tropical(pm_oracle* o, const char* box_json, const char* centers_json,
                             const char* ray_length, const char* step, int budget,
                             pm_outcome** out);
/* directions_json may be NULL for the exact defaults. */
pm_status pm_slope_bound(const pm_function* f, const pm_polyhedron* p,
                         const char* directions_json, char** report_json, int* certified_out);

/* 0 accept, 1 reject, 2 exhausted. */
int pm_outcome_tag(const pm_outcome* oc);
char* pm_outcome_certificate(const pm_outcome* oc);
/* The reconstruction as a polyhedral function (accept outcomes only). */
pm_status pm_outcome_function(const pm_outcome* oc, pm_function** out);
void pm_outcome_free(pm_outcome* oc);

/* Replays every logged query of a certificate against the oracle. *ok_out is
 * 1 when there were no mismatches. */
pm_status pm_verify_certificate(const char* cert_json, pm_oracle* o, char** report_json,
                                int* ok_out);

#ifdef __cplusplus
}
#endif

#endif /* POLYMAX_H */
