#ifndef SIMCHAR_SIMCHAR_H
#define SIMCHAR_SIMCHAR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SIMCHAR_API __declspec(dllexport)
#else
#define SIMCHAR_API __attribute__((visibility("default")))
#endif

typedef enum simchar_status {
  SIMCHAR_OK = 0,
  SIMCHAR_INVALID_ARGUMENT = 1,
  SIMCHAR_NON_ORIENTABLE,
  SIMCHAR_DEGENERATE_SIMPLEX,
  SIMCHAR_BOUNDARY_DETECTED,
  SIMCHAR_DEGREE_OUT_OF_RANGE,
  SIMCHAR_PERTURBATION_ESCAPED_SIMPLEX,
  SIMCHAR_INDEX_OUT_OF_RANGE,
  SIMCHAR_DEGREE_MISMATCH,
  SIMCHAR_NO_PARENT_LINK,
  SIMCHAR_SINGULAR_GRAM,
  SIMCHAR_NOT_A_CYCLE,
  SIMCHAR_NOT_A_SPARK,
  SIMCHAR_EXACTNESS_VIOLATION,
  SIMCHAR_NOT_POSITIVE_DEFINITE,
  SIMCHAR_NON_CONVERGENT,
  SIMCHAR_UNSUPPORTED_ACTION,
  SIMCHAR_TRUNCATION_INSUFFICIENT,
  SIMCHAR_TOO_LARGE,
  SIMCHAR_UNKNOWN_MANIFOLD,
  SIMCHAR_IO_ERROR,
  SIMCHAR_PARSE_ERROR,
  SIMCHAR_INTERNAL_ERROR = 100
} simchar_status;

typedef struct simchar_complex simchar_complex;
typedef struct simchar_model simchar_model;

typedef enum simchar_subdivision {
  SIMCHAR_SUBDIVIDE_BARYCENTRIC = 0,
  SIMCHAR_SUBDIVIDE_PERTURBED = 1,
  SIMCHAR_SUBDIVIDE_MIDPOINT = 2
} simchar_subdivision;

/* Flags for loading complexes from text. */
#define SIMCHAR_LOAD_ALLOW_BOUNDARY 1u

typedef enum simchar_oracle {
  SIMCHAR_ORACLE_NONE = 0,
  SIMCHAR_ORACLE_QUADRATURE = 1,
  SIMCHAR_ORACLE_MONTE_CARLO = 2
} simchar_oracle;

typedef struct simchar_partition_options {
  /* Action name; only "maxwell" is accepted. */
  const char* action;
  double g2;
  /* "const" or "wilson:<cycle index>:<charge>". */
  const char* observable;
  int window;
  double tolerance;
  simchar_oracle oracle;
  uint64_t samples;
  uint64_t seed;
} simchar_partition_options;

typedef struct simchar_partition_value {
  double value;
  double imaginary;
  double log_abs_value;
  double oracle_value;
  double oracle_standard_error;
} simchar_partition_value;

SIMCHAR_API const char* simchar_status_name(simchar_status status);
/* Message of the last failure on the calling thread. */
SIMCHAR_API const char* simchar_last_error(void);
/* Frees strings returned through char** out parameters. */
SIMCHAR_API void simchar_string_free(char* s);

SIMCHAR_API simchar_status simchar_complex_catalog(const char* id, simchar_complex** out);
SIMCHAR_API simchar_status simchar_complex_load(const char* path, unsigned flags, simchar_complex** out);
/* Existing file path, else catalog id. */
SIMCHAR_API simchar_status simchar_complex_open(const char* spec, unsigned flags, simchar_complex** out);
SIMCHAR_API simchar_status simchar_complex_from_text(const char* text, unsigned flags, simchar_complex** out);
SIMCHAR_API simchar_status simchar_complex_to_text(const simchar_complex* x, char** out);
SIMCHAR_API simchar_status simchar_complex_save(const simchar_complex* x, const char* path);
SIMCHAR_API simchar_status simchar_complex_subdivide(const simchar_complex* x, simchar_subdivision kind,
                                                     uint64_t seed, double scale, simchar_complex** out);
SIMCHAR_API simchar_status simchar_complex_dimension(const simchar_complex* x, int* dim);
SIMCHAR_API simchar_status simchar_complex_count(const simchar_complex* x, int k, int* count);
SIMCHAR_API simchar_status simchar_complex_mesh(const simchar_complex* x, double* mesh);
SIMCHAR_API simchar_status simchar_complex_fullness(const simchar_complex* x, double* fullness);
/* JSON with f-vector, mesh, fullness, Betti numbers and torsion. */
SIMCHAR_API simchar_status simchar_complex_measure(const simchar_complex* x, char** json);
SIMCHAR_API void simchar_complex_free(simchar_complex* x);

SIMCHAR_API simchar_status simchar_verify_model(const simchar_complex* base, const simchar_complex* desc,
                                                uint64_t seed, int* passed, char** json);

SIMCHAR_API simchar_status simchar_model_create(const simchar_complex* base, const simchar_complex* desc,
                                                int degree, double kernel_threshold, simchar_model** out);
SIMCHAR_API simchar_status simchar_model_torus_dimension(const simchar_model* m, int* dim);
SIMCHAR_API simchar_status simchar_model_free_rank(const simchar_model* m, int* rank);
SIMCHAR_API simchar_status simchar_model_torsion_order(const simchar_model* m, char** order);
SIMCHAR_API void simchar_model_free(simchar_model* m);

SIMCHAR_API simchar_status simchar_grid_check(const simchar_model* m, int* exact, char** json);

SIMCHAR_API void simchar_partition_options_default(simchar_partition_options* opts);
SIMCHAR_API simchar_status simchar_partition(const simchar_model* m, const simchar_partition_options* opts,
                                             simchar_partition_value* value, char** json);

/* Runs a JSON plan; reports go to the plan's output prefix unless out_prefix is non-null. */
SIMCHAR_API simchar_status simchar_run_plan(const char* plan_path, const char* out_prefix, int* passed,
                                            char** summary_json);

#ifdef __cplusplus
}
#endif

#endif
