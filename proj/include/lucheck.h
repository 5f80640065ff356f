/* lucheck C API: local-unitary equivalence and local distinguishability of
 * multipartite pure states behind opaque handles and integer status codes.
 *
 * Every function that can fail returns lucheck_status: 0 on success, one of
 * the LUCHECK_ERR_* codes otherwise, with a message retrievable through
 * lucheck_last_error() on the same thread.  Handles returned through out
 * parameters are owned by the caller and released with the matching _free().
 *
 * Rich results (verdicts, spectra tables, dimension reports) are returned as
 * JSON text via lucheck_result_json(); the schema is documented in README.md.
 */
#ifndef LUCHECK_H
#define LUCHECK_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef LUCHECK_API
#if defined(_WIN32)
#define LUCHECK_API __declspec(dllexport)
#else
#define LUCHECK_API __attribute__((visibility("default")))
#endif
#endif

typedef int32_t lucheck_status;

enum {
  LUCHECK_OK = 0,
  /* Codes >= 10 mirror the CLI exit codes for failures. */
  LUCHECK_ERR_PARSE = 10,     /* malformed state/witness/config text or file */
  LUCHECK_ERR_DIMENSION = 11, /* operand dimensions or shapes disagree */
  LUCHECK_ERR_NUMERIC = 12,   /* eigensolver failure, inconsistent ranks, ... */
  LUCHECK_ERR_CONFIG = 13,    /* invalid tolerance/search configuration */
  LUCHECK_ERR_IO = 14,        /* file could not be read or written */
  LUCHECK_ERR_NULLPTR = 15    /* required argument was NULL */
};

typedef struct lucheck_state_t lucheck_state_t;
typedef struct lucheck_result_t lucheck_result_t;

/* Library version string, e.g. "0.1.0". */
LUCHECK_API const char* lucheck_version(void);

/* Message for the most recent failure on this thread; never NULL. */
LUCHECK_API const char* lucheck_last_error(void);

/* ---- states ---------------------------------------------------------- */

/* Creates a state from party dimensions and interleaved re/im amplitudes in
 * row-major order; namps counts complex entries and must equal prod(dims). */
LUCHECK_API lucheck_status lucheck_state_create(const int32_t* dims,
                                                int32_t nparties,
                                                const double* amps_re_im,
                                                int64_t namps,
                                                lucheck_state_t** out);

LUCHECK_API lucheck_status lucheck_state_load(const char* path,
                                              lucheck_state_t** out);
LUCHECK_API lucheck_status lucheck_state_parse(const char* json_text,
                                               lucheck_state_t** out);
LUCHECK_API lucheck_status lucheck_state_save(const lucheck_state_t* s,
                                              const char* path);

/* kind: "haar" | "product" | "ghz" | "w".  ghz requires equal dims. */
LUCHECK_API lucheck_status lucheck_state_generate(const char* kind,
                                                  const int32_t* dims,
                                                  int32_t nparties,
                                                  uint64_t seed,
                                                  lucheck_state_t** out);

LUCHECK_API int32_t lucheck_state_num_parties(const lucheck_state_t* s);
LUCHECK_API int64_t lucheck_state_size(const lucheck_state_t* s);
LUCHECK_API lucheck_status lucheck_state_dims(const lucheck_state_t* s,
                                              int32_t* out, int32_t cap);
/* Copies interleaved re/im amplitudes; cap_pairs is the capacity in complex
 * entries and must be >= lucheck_state_size(s). */
LUCHECK_API lucheck_status lucheck_state_amplitudes(const lucheck_state_t* s,
                                                    double* out_re_im,
                                                    int64_t cap_pairs);
LUCHECK_API void lucheck_state_free(lucheck_state_t* s);

/* ---- operations ------------------------------------------------------ */
/* cfg_json is a flat JSON object overriding defaults (see README.md), or
 * NULL/empty for defaults.  Unknown keys are rejected with
 * LUCHECK_ERR_CONFIG. */

/* Local-unitary equivalence decision.  Result exit code: 0 equivalent,
 * 1 not equivalent, 2 undecided. */
LUCHECK_API lucheck_status lucheck_check(const lucheck_state_t* a,
                                         const lucheck_state_t* b,
                                         const char* cfg_json,
                                         lucheck_result_t** out);

/* Per-party reduced spectra and degeneracy clusters.  Exit code 0. */
LUCHECK_API lucheck_status lucheck_spectra(const lucheck_state_t* a,
                                           const char* cfg_json,
                                           lucheck_result_t** out);

/* Canonical form; canon_out receives the rotated state.  Exit code 0. */
LUCHECK_API lucheck_status lucheck_canonicalize(const lucheck_state_t* a,
                                                const char* cfg_json,
                                                lucheck_state_t** canon_out,
                                                lucheck_result_t** out);

/* Orbit/kernel/stabilizer dimension report.  Exit code 0. */
LUCHECK_API lucheck_status lucheck_dimensions(const lucheck_state_t* a,
                                              const char* cfg_json,
                                              lucheck_result_t** out);

/* Local distinguishability report.  Exit code: 0 locally indistinguishable,
 * 1 locally distinguishable (raw reduced matrices decide). */
LUCHECK_API lucheck_status lucheck_indistinguishable(const lucheck_state_t* a,
                                                     const lucheck_state_t* b,
                                                     const char* cfg_json,
                                                     lucheck_result_t** out);

/* Verifies that the witness (JSON text, bare or embedded in a report) maps b
 * onto a projectively.  Exit code: 0 verified, 1 rejected. */
LUCHECK_API lucheck_status lucheck_verify(const lucheck_state_t* a,
                                          const lucheck_state_t* b,
                                          const char* witness_json,
                                          const char* cfg_json,
                                          lucheck_result_t** out);

/* ---- results --------------------------------------------------------- */

/* JSON text owned by the result handle; valid until the handle is freed. */
LUCHECK_API const char* lucheck_result_json(const lucheck_result_t* r);
LUCHECK_API int32_t lucheck_result_exit_code(const lucheck_result_t* r);
LUCHECK_API void lucheck_result_free(lucheck_result_t* r);

#ifdef __cplusplus
}
#endif

#endif /* LUCHECK_H */
