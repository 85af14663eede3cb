/* C interface to the modlie library. All handles are opaque; every function
 * that can fail returns a modlie_status and leaves a thread-local message
 * in modlie_last_error(). Strings returned through char** are owned by the
 * caller and released with modlie_string_free. */
#ifndef MODLIE_H
#define MODLIE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MODLIE_API __declspec(dllexport)
#else
#define MODLIE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum modlie_status {
    MODLIE_OK = 0,
    MODLIE_ERR_INVALID_ARGUMENT = 1,
    MODLIE_ERR_VALIDATION = 2,
    MODLIE_ERR_RESOURCE_LIMIT = 3,
    MODLIE_ERR_PARSE = 4,
    MODLIE_ERR_IO = 5,
    MODLIE_ERR_DEGENERATE = 6,
    MODLIE_ERR_INTERNAL = 7
} modlie_status;

typedef enum modlie_format { MODLIE_FORMAT_JSON = 0, MODLIE_FORMAT_CSV = 1, MODLIE_FORMAT_TEXT = 2 } modlie_format;

typedef struct modlie_algebra modlie_algebra;
typedef struct modlie_report modlie_report;

/* family: "W", "H2", "sl", "psl", "br8" or "model".
 *   W      uses m and n (n_len == m)
 *   H2     uses r and n (n_len == 2r)
 *   sl/psl use size
 *   model  uses model, action, k, ideal_dim (p is always 3)  */
typedef struct modlie_family_spec {
    const char* family;
    unsigned p;
    unsigned r;
    unsigned m;
    const unsigned* n;
    size_t n_len;
    unsigned size;
    const char* model;  /* "sl2_semi_v2", "h3_rtimes_line", "almost_abelian" */
    const char* action; /* "id" or "flip" */
    unsigned k;
    unsigned ideal_dim;
    int closed_form; /* H2 with r = 1: use the closed-form structure constants */
} modlie_family_spec;

MODLIE_API void modlie_family_spec_init(modlie_family_spec* spec);

MODLIE_API modlie_status modlie_algebra_build(const modlie_family_spec* spec, modlie_algebra** out);
MODLIE_API modlie_status modlie_algebra_parse(const char* text, modlie_algebra** out);
MODLIE_API modlie_status modlie_algebra_load(const char* path, modlie_algebra** out);
MODLIE_API modlie_status modlie_algebra_save(const modlie_algebra* a, const char* path);
MODLIE_API modlie_status modlie_algebra_to_text(const modlie_algebra* a, char** out);
MODLIE_API size_t modlie_algebra_dim(const modlie_algebra* a);
MODLIE_API unsigned modlie_algebra_prime(const modlie_algebra* a);
/* Non-null when construction succeeded with a caveat (psl_n with p not dividing n). */
MODLIE_API const char* modlie_algebra_warning(const modlie_algebra* a);
/* MODLIE_ERR_VALIDATION when the Jacobi identity fails; *violations (optional) gets the count. */
MODLIE_API modlie_status modlie_algebra_validate(const modlie_algebra* a, size_t* violations);
MODLIE_API void modlie_algebra_free(modlie_algebra* a);

typedef struct modlie_analysis_options {
    unsigned threads;         /* 0: hardware concurrency */
    uint64_t mem_limit_bytes; /* 0: default 8 GiB */
    double time_limit_seconds; /* <= 0: unlimited */
    const char* cache_dir;    /* NULL: no cache */
    uint64_t seed;
    size_t trials;
    int probe;
    int validate;
} modlie_analysis_options;

MODLIE_API void modlie_analysis_options_init(modlie_analysis_options* opts);

/* Returns MODLIE_OK with a report also when a resource ceiling was hit;
 * check modlie_report_complete. */
MODLIE_API modlie_status modlie_analyze(const modlie_algebra* a, const modlie_analysis_options* opts, modlie_report** out);
MODLIE_API int modlie_report_complete(const modlie_report* r);
/* Empty string for a complete report. */
MODLIE_API const char* modlie_report_incomplete_reason(const modlie_report* r);
MODLIE_API int modlie_report_checks_passed(const modlie_report* r);
MODLIE_API int modlie_report_solvable(const modlie_report* r);
MODLIE_API void modlie_report_dims(const modlie_report* r, size_t* g, size_t* der, size_t* inn, size_t* out);
MODLIE_API modlie_status modlie_report_render(const modlie_report* r, modlie_format fmt, int include_telemetry, char** out);
MODLIE_API void modlie_report_free(modlie_report* r);

typedef struct modlie_reproduce_options {
    modlie_analysis_options analysis;
    int include_large;
    int include_telemetry;
} modlie_reproduce_options;

MODLIE_API void modlie_reproduce_options_init(modlie_reproduce_options* opts);

/* table: "cartan_survey", "gap_series" or "newtype_survey". */
MODLIE_API modlie_status modlie_reproduce(const char* table, const modlie_reproduce_options* opts, modlie_format fmt,
                                          char** out, int* any_fail);

MODLIE_API modlie_status modlie_parse_format(const char* name, modlie_format* out);
MODLIE_API void modlie_string_free(char* s);
MODLIE_API const char* modlie_version(void);
MODLIE_API const char* modlie_last_error(void);

#ifdef __cplusplus
}
#endif

#endif
