/*
 * germfold C API.
 *
 * A germ is loaded from a schema-1 JSON definition into an opaque handle;
 * the analysis entry points return JSON reports as heap strings owned by
 * the library (release with gf_string_free). Every function returns a
 * gf_status; on failure gf_last_error() describes the problem.
 *
 * Status codes double as CLI exit codes: 0 pass, 1 property failure,
 * 2 validation failure, 3 hypothesis/obstruction refusal, 4 numeric
 * non-convergence.
 */
#ifndef GERMFOLD_H
#define GERMFOLD_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct gf_germ gf_germ;

typedef enum gf_status {
  GF_OK = 0,
  GF_PROPERTY_FAILURE = 1,
  GF_VALIDATION_ERROR = 2,
  GF_OBSTRUCTED = 3,
  GF_NO_CONVERGENCE = 4,
  GF_BAD_ARGUMENT = 5,
  GF_INTERNAL_ERROR = 6
} gf_status;

const char* gf_version(void);

/* Thread-local message for the most recent failure in this thread. */
const char* gf_last_error(void);

void gf_string_free(char* s);

int gf_germ_from_json(const char* json_text, gf_germ** out);
int gf_germ_from_corpus(const char* name, gf_germ** out);
void gf_germ_free(gf_germ* germ);

/* JSON array of built-in corpus germ names. */
int gf_corpus_names(char** json_out);
/* Full definition JSON of a corpus germ (loadable via gf_germ_from_json). */
int gf_corpus_definition(const char* name, char** json_out);

/* Validation summary: weights, groups, p, delta, mode. */
int gf_check(const gf_germ* germ, const char* options_json, char** json_out);

/* Obstruction-locus scan. Options: {"samples","seed","tol"}. */
int gf_analyze(const gf_germ* germ, const char* options_json, char** json_out);

/* Deformed-arc solve. Options: {"s":[...],"eps","order"}. */
int gf_deform(const gf_germ* germ, const char* options_json, char** json_out);

/* Trivialization diagnostics and/or point maps.
 * Options: {"eps","seed","samples","scan":bool,"points":[[...],...],
 *           "allow_obstructed":bool}. */
int gf_trivialize(const gf_germ* germ, const char* options_json,
                  char** json_out);

/* Property-verification suite for one germ.
 * Options: {"seed","allow_obstructed":bool}.
 * Returns GF_PROPERTY_FAILURE when a check fails; json_out still carries
 * the full report. */
int gf_verify(const gf_germ* germ, const char* options_json, char** json_out);

/* Verification across the whole built-in corpus. */
int gf_verify_corpus(const char* options_json, char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* GERMFOLD_H */
