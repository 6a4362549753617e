/* magicsq: quantum magic squares, quantum Latin squares, semiclassicality
 * decision procedures and matrix-convex purification.
 *
 * C interface over the C++ core. All functionality flows through opaque
 * document handles holding one JSON-interchange document each (kinds: qms,
 * qls, latin, basis, povm, decomposition, combination, report, bundle).
 * Every function returns a status code; on failure the thread-local message
 * from magicsq_last_error() describes what went wrong. Out-parameters are
 * only written on MAGICSQ_OK.
 *
 * Handles returned by the library are owned by the caller and released with
 * magicsq_doc_free(); strings with magicsq_string_free().
 *
 * The environment variable MAGIC_TOLERANCE_SCALE (decimal float, default 1)
 * multiplies all residual tolerances.
 */

#ifndef MAGICSQ_H
#define MAGICSQ_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define MAGICSQ_API __declspec(dllexport)
#else
#define MAGICSQ_API __attribute__((visibility("default")))
#endif

typedef struct magicsq_doc magicsq_doc;

typedef enum magicsq_status {
    MAGICSQ_OK = 0,
    MAGICSQ_ERR_ARGUMENT = 1,  /* null handle, wrong document kind, bad flag */
    MAGICSQ_ERR_PARSE = 2,     /* malformed or schema-invalid document */
    MAGICSQ_ERR_DOMAIN = 3,    /* precondition failure (NotPOVM, BasesCommute, ...) */
    MAGICSQ_ERR_TOO_LARGE = 4, /* n! guard tripped without the override */
    MAGICSQ_ERR_IO = 5,        /* file could not be read or written */
    MAGICSQ_ERR_INTERNAL = 6
} magicsq_status;

typedef enum magicsq_verdict {
    MAGICSQ_FEASIBLE = 0,
    MAGICSQ_LIKELY_INFEASIBLE = 1,
    MAGICSQ_UNDETERMINED = 2
} magicsq_verdict;

MAGICSQ_API const char* magicsq_version(void);

/* Message for the most recent failure on this thread; never NULL. */
MAGICSQ_API const char* magicsq_last_error(void);

MAGICSQ_API void magicsq_doc_free(magicsq_doc* doc);
MAGICSQ_API void magicsq_string_free(char* text);

/*
 * Documents
 */

MAGICSQ_API magicsq_status magicsq_doc_parse(const char* json_text, magicsq_doc** out);
MAGICSQ_API magicsq_status magicsq_doc_read_file(const char* path, magicsq_doc** out);
/* Canonical serialization: sorted keys, 17 significant digits, byte-stable. */
MAGICSQ_API magicsq_status magicsq_doc_serialize(const magicsq_doc* doc, char** out_json);
MAGICSQ_API magicsq_status magicsq_doc_write_file(const magicsq_doc* doc, const char* path);
MAGICSQ_API const char* magicsq_doc_kind(const magicsq_doc* doc);
/* Extract a sub-document: bundle fields "a", "b", "direct_sum", "dilation",
 * "compression". */
MAGICSQ_API magicsq_status magicsq_doc_get(const magicsq_doc* doc, const char* name, magicsq_doc** out);
/* Document sizes: out_n is the exterior/grid size, out_s the interior size
 * (qms, povm, decomposition), the target size (combination), the bundle
 * half-size, or 0 where it does not apply. Either out-pointer may be NULL. */
MAGICSQ_API magicsq_status magicsq_doc_size(const magicsq_doc* doc, int* out_n, int* out_s);

/*
 * Classification
 */

/* Accepts qms or qls documents (qls is converted to its projector grid).
 * The report carries booleans for the M/P/C/R memberships plus residuals. */
MAGICSQ_API magicsq_status magicsq_classify(const magicsq_doc* square, magicsq_doc** out_report);

/*
 * Constructions
 */

MAGICSQ_API magicsq_status magicsq_easy_qls(const magicsq_doc* latin, const magicsq_doc* basis,
                                            magicsq_doc** out_qls);
MAGICSQ_API magicsq_status magicsq_povm_latin(const magicsq_doc* latin, const magicsq_doc* povm,
                                              magicsq_doc** out_qms);
/* basis_v/basis_w may be NULL: defaults are the standard and Fourier bases. */
MAGICSQ_API magicsq_status magicsq_counterexample(int m, const magicsq_doc* basis_v,
                                                  const magicsq_doc* basis_w, magicsq_doc** out_bundle);
MAGICSQ_API magicsq_status magicsq_standard_basis(int n, magicsq_doc** out);
MAGICSQ_API magicsq_status magicsq_random_latin(int n, uint64_t seed, magicsq_doc** out);
MAGICSQ_API magicsq_status magicsq_random_doubly_stochastic(int n, uint64_t seed, magicsq_doc** out);
MAGICSQ_API magicsq_status magicsq_random_basis(int n, uint64_t seed, magicsq_doc** out);
MAGICSQ_API magicsq_status magicsq_random_decomposition(int n, int s, uint64_t seed, magicsq_doc** out);

/*
 * Decompositions and decisions
 */

/* Birkhoff-von Neumann for interior size 1. */
MAGICSQ_API magicsq_status magicsq_bvn(const magicsq_doc* square, magicsq_doc** out_decomposition,
                                       magicsq_doc** out_report);

/* Exact easy-set membership for rank-one squares with s = n. Accepts qms or
 * qls documents. On a positive answer the certificate documents are written
 * (latin square and basis); they are NULL otherwise. */
MAGICSQ_API magicsq_status magicsq_rank_one_test(const magicsq_doc* square, int* out_is_semiclassical,
                                                 magicsq_doc** out_latin, magicsq_doc** out_basis,
                                                 magicsq_doc** out_report);

/* Alternating-projection membership test. max_iter <= 0 and tol_feas <= 0
 * select the defaults (50000, 1e-7). The certificate is present exactly when
 * the verdict is MAGICSQ_FEASIBLE. */
MAGICSQ_API magicsq_status magicsq_membership(const magicsq_doc* square, long max_iter, double tol_feas,
                                              int allow_large, magicsq_verdict* out_verdict,
                                              magicsq_doc** out_certificate, magicsq_doc** out_report);

MAGICSQ_API magicsq_status magicsq_verify_semiclassical(const magicsq_doc* square,
                                                        const magicsq_doc* decomposition, int* out_valid,
                                                        magicsq_doc** out_report);

/* Matrix-convex purification of a semiclassical decomposition into easy
 * quantum Latin square sources. basis may be NULL (standard basis). */
MAGICSQ_API magicsq_status magicsq_purify(const magicsq_doc* decomposition, const magicsq_doc* basis,
                                          magicsq_doc** out_combination, magicsq_doc** out_report);

/*
 * Matrix convex combinations
 */

MAGICSQ_API magicsq_status magicsq_combine(const magicsq_doc* combination, magicsq_doc** out_qms,
                                           magicsq_doc** out_report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MAGICSQ_H */
