/*
 * C interface to the pmin weighted p-energy toolkit.
 *
 * Maps are opaque handles created from label strings and released with
 * pmin_map_free. Every fallible call returns a pmin_status; on failure the
 * message of the last error on the calling thread is available from
 * pmin_last_error(). Strings returned through char** out-parameters are
 * allocated by the library and must be released with pmin_string_free.
 *
 * Report documents are JSON objects of the form
 *   {"schema": 1, "kind": "...", "payload": {...}, "metadata": {...}}
 * where only "payload" is deterministic for fixed inputs and seeds.
 */
#ifndef PMIN_H
#define PMIN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PMIN_BUILDING_LIBRARY)
#    define PMIN_API __declspec(dllexport)
#  else
#    define PMIN_API __declspec(dllimport)
#  endif
#else
#  define PMIN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pmin_status {
  PMIN_OK = 0,
  PMIN_ERR_INVALID_ARGUMENT = 1,
  PMIN_ERR_INVALID_DIMENSION = 2,
  PMIN_ERR_INVALID_PLANE = 3,
  PMIN_ERR_SINGULAR_POINT = 4,
  PMIN_ERR_AXIS_SINGULARITY = 5,
  PMIN_ERR_OUTSIDE_CHART = 6,
  PMIN_ERR_WRONG_SLICE = 7,
  PMIN_ERR_DIVERGENT_ENERGY = 8,
  PMIN_ERR_DEGENERATE_PERTURBATION = 9,
  PMIN_ERR_NON_INTEGRABLE = 10,
  PMIN_ERR_DOMAIN = 11,
  PMIN_ERR_UNKNOWN_LABEL = 12,
  PMIN_ERR_BUFFER_TOO_SMALL = 13,
  PMIN_ERR_PARSE = 14,
  PMIN_ERR_INTERNAL = 15
} pmin_status;

typedef enum pmin_method {
  PMIN_METHOD_MONTE_CARLO = 0,
  PMIN_METHOD_RADIAL_PRODUCT = 1
} pmin_method;

typedef struct pmin_map pmin_map;

typedef struct pmin_quadrature_spec {
  int method;            /* pmin_method */
  int64_t samples;       /* MC samples, or sphere directions (product rule) */
  int radial_nodes;      /* product rule only */
  uint64_t seed;
  double r_min;
  int workers;
} pmin_quadrature_spec;

typedef struct pmin_estimate {
  double value;
  double std_error;
  int64_t n_eval;
  double bias_bound;     /* valid when has_bias_bound != 0 */
  int has_bias_bound;
} pmin_estimate;

typedef struct pmin_verify_options {
  const char* check;     /* "lemma1", "lemma2", "lemma3", "lemma4", "theorem" */
  int n;                 /* base dimension */
  double p;
  double alpha;
  const char* map_label; /* base map for lemma1, lemma3, theorem */
  int64_t n_points;      /* lemma1, lemma2 */
  double tol;            /* identity tolerance; <= 0 selects the default */
  double sigmas;         /* inequality sigma multiplier */
  int n_max;             /* lemma4 */
  pmin_quadrature_spec spec;
} pmin_verify_options;

typedef struct pmin_probe_options {
  int n;
  double p;
  double alpha;
  const char* family;    /* "rotation" or "perturbation" */
  const char* field;     /* perturbation field: "const" or "swirl" */
  int axis;              /* const field axis, -1 for the last one */
  int plane_i;
  int plane_j;
  double t_min;
  double t_max;
  int steps;
  double h;              /* second-variation step */
  int refine;            /* golden-section refinement when non-zero */
  pmin_quadrature_spec spec;
} pmin_probe_options;

PMIN_API int pmin_schema_version(void);
PMIN_API const char* pmin_status_name(pmin_status status);
PMIN_API const char* pmin_last_error(void);
PMIN_API void pmin_string_free(char* s);

/* Defaults; the seed honours the PMIN_SEED environment variable. */
PMIN_API void pmin_quadrature_spec_init(pmin_quadrature_spec* spec);
PMIN_API void pmin_verify_options_init(pmin_verify_options* options);
PMIN_API void pmin_probe_options_init(pmin_probe_options* options);

PMIN_API pmin_status pmin_map_from_label(const char* label, int n,
                                         pmin_map** out);
PMIN_API pmin_status pmin_map_lift(const pmin_map* base, pmin_map** out);
PMIN_API void pmin_map_free(pmin_map* map);
PMIN_API int pmin_map_dim(const pmin_map* map);
PMIN_API pmin_status pmin_map_label(const pmin_map* map, char** out);
PMIN_API pmin_status pmin_map_evaluate(const pmin_map* map, const double* x,
                                       size_t len, double* out, size_t out_len);
PMIN_API pmin_status pmin_map_gradient_norm_sq(const pmin_map* map,
                                               const double* x, size_t len,
                                               double* out);
PMIN_API pmin_status pmin_energy(const pmin_map* map, double p, double alpha,
                                 const pmin_quadrature_spec* spec,
                                 int allow_divergent, pmin_estimate* out);

/* Report producers; each writes a JSON document. */
PMIN_API pmin_status pmin_energy_json(const char* map_label, int n, double p,
                                      double alpha,
                                      const pmin_quadrature_spec* spec,
                                      int allow_divergent, char** out_json);
PMIN_API pmin_status pmin_closed_forms_json(int n, double p, double alpha,
                                            char** out_json);
PMIN_API pmin_status pmin_verify_json(const pmin_verify_options* options,
                                      char** out_json, int* passed);
PMIN_API pmin_status pmin_classify_json(int n, double p, double alpha,
                                        char** out_json);
/* CSV rows "n,p,alpha" (optional header) to a "verdicts" document. */
PMIN_API pmin_status pmin_classify_batch_json(const char* csv,
                                              char** out_json);
PMIN_API pmin_status pmin_probe_json(const pmin_probe_options* options,
                                     char** out_json);

/* Re-parse a document into its report type and serialize it again. */
PMIN_API pmin_status pmin_report_normalize(const char* json, char** out_json);
PMIN_API pmin_status pmin_report_to_csv(const char* json, char** out_csv);

#ifdef __cplusplus
}
#endif

#endif /* PMIN_H */
