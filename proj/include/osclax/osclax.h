/* C interface of the osclax library. All strings are UTF-8; strings returned
 * by the library are owned by the caller and released with osclax_string_free.
 * Handles are opaque. Every call that can fail returns an osclax_status and
 * leaves a message retrievable with osclax_last_error (per thread). */
#ifndef OSCLAX_H
#define OSCLAX_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define OSCLAX_API __declspec(dllexport)
#else
#define OSCLAX_API __attribute__((visibility("default")))
#endif

typedef enum osclax_status {
  OSCLAX_OK = 0,
  OSCLAX_E_INVALID_ARGUMENT = 1,
  OSCLAX_E_CONTEXT_MISMATCH = 2,
  OSCLAX_E_DIVERGENT_TRACE = 3,
  OSCLAX_E_NOT_HOMOMORPHIC = 4,
  OSCLAX_E_STRUCTURAL = 5,
  OSCLAX_E_PRECONDITION = 6,
  OSCLAX_E_PARSE = 7,
  OSCLAX_E_INTERNAL = 100
} osclax_status;

typedef struct osclax_report osclax_report;
typedef struct osclax_lax osclax_lax;
typedef struct osclax_qop osclax_qop;

OSCLAX_API const char* osclax_version(void);
OSCLAX_API int osclax_schema_version(void);
/* Message of the last failed call on this thread ("" if none). */
OSCLAX_API const char* osclax_last_error(void);
OSCLAX_API const char* osclax_status_name(osclax_status s);

/* 0 = hardware concurrency. Results do not depend on it. */
OSCLAX_API void osclax_set_threads(int n);
OSCLAX_API void osclax_set_witness_limit(int n);

/* Runs a batch command given as a JSON run config, e.g.
 * {"command":"verify","target":"rtt","family":"spinor-degenerate","rank":4}. */
OSCLAX_API osclax_status osclax_run(const char* config_json, osclax_report** out);
OSCLAX_API int osclax_report_passed(const osclax_report* r);
OSCLAX_API char* osclax_report_json(const osclax_report* r, int with_timing);
/* Dump of the constructed object if the config asked for one, else NULL. */
OSCLAX_API char* osclax_report_dump(const osclax_report* r);
OSCLAX_API void osclax_report_free(osclax_report* r);

/* Lax matrix from a JSON LaxSpec, e.g. {"family":"fund-degenerate","rank":3}. */
OSCLAX_API osclax_status osclax_lax_new(const char* spec_json, osclax_lax** out);
OSCLAX_API int osclax_lax_dim(const osclax_lax* l);
OSCLAX_API char* osclax_lax_entry(const osclax_lax* l, int row, int col);
OSCLAX_API char* osclax_lax_dump(const osclax_lax* l);
/* check is "rtt" or "yangian". */
OSCLAX_API osclax_status osclax_lax_check(const osclax_lax* l, const char* check, osclax_report** out);
OSCLAX_API void osclax_lax_free(osclax_lax* l);

/* Quantum-space operator. family: transfer, q0, spinor, fund, fund-bar,
 * fund-i, fund-bar-i; minus: sign positions (spinor) as an int array of
 * length n_minus; node: fund-i index. Spectral variable is "z" ("x" for
 * transfer). chain_json: {"rank":4,"length":1,"twists":["1/2",...]}. */
OSCLAX_API osclax_status osclax_qop_new(const char* chain_json, const char* family, const int* minus, int n_minus,
                                        int node, osclax_qop** out);
OSCLAX_API int osclax_qop_dim(const osclax_qop* q);
OSCLAX_API char* osclax_qop_entry(const osclax_qop* q, int row, int col);
OSCLAX_API char* osclax_qop_dump(const osclax_qop* q);
/* *commutes = 1 if ab = ba as polynomial matrices. */
OSCLAX_API osclax_status osclax_qop_commutes(const osclax_qop* a, const osclax_qop* b, int* commutes);
OSCLAX_API void osclax_qop_free(osclax_qop* q);

OSCLAX_API void osclax_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
