/* C interface to the midconv library.
 *
 * Problems are JSON documents. A result holds a JSON document and a short
 * text rendering; both strings stay valid until the result is destroyed.
 */
#ifndef MIDCONV_H
#define MIDCONV_H

#include <stddef.h>
#include <stdint.h>

#if defined(MIDCONV_BUILDING_LIBRARY)
#define MIDCONV_API __attribute__((visibility("default")))
#else
#define MIDCONV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct mc_problem mc_problem;
typedef struct mc_result mc_result;

typedef enum {
  MC_OK = 0,
  MC_INPUT_ERROR = 1,
  MC_NEGATIVE = 2, /* the mathematics says no: empty, unconstructible, convention failure */
  MC_INTERNAL_ERROR = 3
} mc_status;

typedef enum {
  MC_VERB_DEFECT = 0,
  MC_VERB_TRANSFORM,
  MC_VERB_RUN,
  MC_VERB_CLASSIFY,
  MC_VERB_VERIFY,
  MC_VERB_HIGGS
} mc_verb;

typedef enum {
  MC_BETA_V_DOCUMENT = 0, /* whatever the document asks for; same-as-h by default */
  MC_BETA_V_SAME,
  MC_BETA_V_FRESH,
  MC_BETA_V_EXPLICIT
} mc_beta_v;

typedef struct {
  int has_seed;
  uint64_t seed;
  double tol;    /* <= 0: document value or the default */
  int max_steps; /* <= 0: default */
  mc_beta_v beta_v;
} mc_options;

MIDCONV_API void mc_options_init(mc_options* options);

/* Parses JSON text. On failure *out is NULL and mc_last_error() explains. */
MIDCONV_API mc_status mc_problem_parse(const char* json, size_t length, mc_problem** out);
MIDCONV_API void mc_problem_destroy(mc_problem* problem);

MIDCONV_API mc_status mc_verb_from_name(const char* name, mc_verb* out);
MIDCONV_API const char* mc_verb_name(mc_verb verb);

/* Runs one command. A result is produced for every status except when the
 * arguments themselves are invalid; error results carry {"error": {...}}. */
MIDCONV_API mc_status mc_run(const mc_problem* problem, mc_verb verb, const mc_options* options,
                             mc_result** out);

MIDCONV_API mc_status mc_result_status(const mc_result* result);
MIDCONV_API const char* mc_result_json(const mc_result* result);
MIDCONV_API const char* mc_result_text(const mc_result* result);
MIDCONV_API void mc_result_destroy(mc_result* result);

/* Message for the last failure on the calling thread. */
MIDCONV_API const char* mc_last_error(void);
MIDCONV_API const char* mc_version(void);

#ifdef __cplusplus
}
#endif

#endif
