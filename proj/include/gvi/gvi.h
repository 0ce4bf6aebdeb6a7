#ifndef GVI_H
#define GVI_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define GVI_API __declspec(dllexport)
#else
#define GVI_API __attribute__((visibility("default")))
#endif

typedef enum gvi_status {
    GVI_OK = 0,
    GVI_ERR_ASSUMPTION = 2,      /* NOT_ELLIPTIC, ASSUMPTION_FAILED */
    GVI_ERR_K_TOO_LARGE = 3,     /* K_TOO_LARGE, NORM_ESCAPE */
    GVI_ERR_NO_CONVERGENCE = 4,
    GVI_ERR_CONFIG = 5,          /* bad config, INDEX_OUT_OF_RANGE */
    GVI_ERR_INVALID_ARGUMENT = 6,
    GVI_ERR_DOMAIN = 7,
    GVI_ERR_IO = 8,
    GVI_ERR_INTERNAL = 9
} gvi_status;

typedef struct gvi_constants gvi_constants;
typedef struct gvi_symbol gvi_symbol;

/* Message and error-code name of the last failure on this thread. */
GVI_API const char* gvi_last_error(void);
GVI_API const char* gvi_last_error_code(void);
GVI_API const char* gvi_version(void);

/* Strings returned through char** are owned by the caller. */
GVI_API void gvi_string_free(char* s);

GVI_API gvi_status gvi_constants_canonical(gvi_constants** out);
GVI_API gvi_status gvi_constants_derive(int k_max, int n_max, int threads, gvi_constants** out);
GVI_API gvi_status gvi_constants_load(const char* path, gvi_constants** out);
GVI_API gvi_status gvi_constants_save(const gvi_constants* c, const char* path);
GVI_API double gvi_constants_c0(const gvi_constants* c);
GVI_API double gvi_constants_c1(const gvi_constants* c);
/* 1 when both constants agree bit for bit */
GVI_API int gvi_constants_equal(const gvi_constants* a, const gvi_constants* b);
GVI_API void gvi_constants_free(gvi_constants* c);

/* name is a built-in model or file:<path> */
GVI_API gvi_status gvi_symbol_open(const char* name, gvi_symbol** out);
GVI_API gvi_status gvi_symbol_check(const gvi_symbol* s, char** report_json);
GVI_API void gvi_symbol_free(gvi_symbol* s);
/* Newline-separated list of built-in model names. */
GVI_API gvi_status gvi_builtin_models(char** names);

/* Phi_k(t) of the model majorant for a multi-index k of length d. */
GVI_API gvi_status gvi_phi_coefficient(const int* k, int d, double c0, double R, double rho, double t,
                                       double* out);
GVI_API gvi_status gvi_gevrey_norm(double eps, double sigma, double c, double amplitude, double M,
                                   double* closed_form, double* direct);

/* Runs the sweep in config_path. out_prefix may be NULL (config "output" is used).
   constants may be NULL (canonical values). summary_json may be NULL. */
GVI_API gvi_status gvi_sweep_run(const char* config_path, const char* out_prefix, int threads,
                                 const gvi_constants* constants, char** summary_json);

/* Monotonicity verdicts for a sweep CSV. */
GVI_API gvi_status gvi_report(const char* csv_path, char** report_json, int* all_pass);

#ifdef __cplusplus
}
#endif

#endif
