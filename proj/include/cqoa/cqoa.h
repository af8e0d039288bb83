#ifndef CQOA_H
#define CQOA_H

#ifdef __cplusplus
extern "C" {
#endif

/* Exact symbolic engine for operator product expansions, normal-ordered
 * products, BRST and BV structure over the bc-ghost / Virasoro algebras.
 *
 * All functions return a status code; 0 is success.  On failure,
 * cqoa_last_error() describes the problem (thread-local storage).
 * Strings returned through char** are heap-allocated; release them with
 * cqoa_string_free. */

typedef struct cqoa_algebra cqoa_algebra;
typedef struct cqoa_expr cqoa_expr;

enum {
  CQOA_OK = 0,
  CQOA_ERR_PARSE = 1,
  CQOA_ERR_ALGEBRA_MISMATCH = 2,
  CQOA_ERR_PRECONDITION = 3,
  CQOA_ERR_VERIFY_FAILED = 4,
  CQOA_ERR_NOT_IN_SPAN = 5,
  CQOA_ERR_INVALID_ARGUMENT = 6,
  CQOA_ERR_INTERNAL = 7
};

const char* cqoa_last_error(void);
void cqoa_string_free(char* s);

/* Selector grammar: "bc:<int>", "vir", "vir:kappa=<rational|sym>",
 * "brst", "brst:kappa=<rational|sym>".  Omitted kappa means the formal
 * parameter. */
int cqoa_algebra_create(const char* selector, cqoa_algebra** out);
void cqoa_algebra_free(cqoa_algebra* a);

int cqoa_parse(cqoa_algebra* a, const char* src, cqoa_expr** out);
void cqoa_expr_free(cqoa_expr* e);
int cqoa_render(const cqoa_expr* e, char** out);
int cqoa_expr_is_zero(const cqoa_expr* e, int* out);
int cqoa_expr_equal(const cqoa_expr* x, const cqoa_expr* y, int* out);

/* Core calculus.  Results are always in canonical normal form. */
int cqoa_wick(cqoa_algebra* a, const cqoa_expr* u, const cqoa_expr* v, cqoa_expr** out);
int cqoa_circle(cqoa_algebra* a, const cqoa_expr* u, long n, const cqoa_expr* v,
                cqoa_expr** out);
int cqoa_normal_form(cqoa_algebra* a, const cqoa_expr* e, cqoa_expr** out);
int cqoa_derivative(cqoa_algebra* a, const cqoa_expr* e, int order, cqoa_expr** out);
int cqoa_is_local(cqoa_algebra* a, const cqoa_expr* u, const cqoa_expr* v, int* out);

/* Documents.  format is "text" or "json". */
int cqoa_ope(cqoa_algebra* a, const cqoa_expr* u, const cqoa_expr* v, const char* format,
             char** out);
int cqoa_basis(cqoa_algebra* a, int ghost, int weight, int dump_states, const char* format,
               char** out);
/* Returns CQOA_OK with *passed = 0 when an axiom fails (details in the
 * document); a nonzero status only signals an operational error. */
int cqoa_check_axioms(cqoa_algebra* a, int max_weight, long n_floor, const char* format,
                      char** out, int* passed);
int cqoa_oracle_compare(cqoa_algebra* a, const cqoa_expr* u, long n, const cqoa_expr* v,
                        int cutoff, const char* format, char** out, int* matches);

/* BRST / BV layer; the algebra must have been created from a "brst"
 * selector. */
int cqoa_brst_current(cqoa_algebra* a, cqoa_expr** out);
int cqoa_brst_d(cqoa_algebra* a, const cqoa_expr* u, cqoa_expr** out);
int cqoa_brst_dsquare(cqoa_algebra* a, const char* format, char** out);
int cqoa_brst_nilpotency(cqoa_algebra* a, const char* format, char** out, int* verified);
int cqoa_brst_kernel(cqoa_algebra* a, int ghost, int weight, const char* format, char** out);
int cqoa_reduce_mod_derivative(cqoa_algebra* a, const cqoa_expr* e, cqoa_expr** out);
int cqoa_bv_delta(cqoa_algebra* a, const cqoa_expr* u, cqoa_expr** out);
int cqoa_bv_bracket(cqoa_algebra* a, const cqoa_expr* u, const cqoa_expr* v, cqoa_expr** out);
int cqoa_bv_second_order(cqoa_algebra* a, const cqoa_expr* A, const cqoa_expr* B,
                         const cqoa_expr* C, int* holds);

#ifdef __cplusplus
}
#endif

#endif /* CQOA_H */
