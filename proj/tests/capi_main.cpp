// Exercises the shared-library C API end to end: handles, error codes,
// document output, and the BRST entry points.
#include <cstdio>
#include <cstring>
#include <string>

#include "cqoa/cqoa.h"

namespace {

int failures = 0;

#define CHECK(cond)                                                    \
  do {                                                                 \
    if (!(cond)) {                                                     \
      std::printf("FAIL %s:%d  %s\n", __FILE__, __LINE__, #cond);      \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

struct Str {
  char* p = nullptr;
  ~Str() { cqoa_string_free(p); }
  bool contains(const char* needle) const { return p && std::strstr(p, needle); }
};

struct Expr {
  cqoa_expr* p = nullptr;
  ~Expr() { cqoa_expr_free(p); }
};

bool equal(const cqoa_expr* a, const cqoa_expr* b) {
  int eq = 0;
  return cqoa_expr_equal(a, b, &eq) == CQOA_OK && eq == 1;
}

void test_lifecycle_and_errors() {
  cqoa_algebra* alg = nullptr;
  CHECK(cqoa_algebra_create("bc:2", &alg) == CQOA_OK);

  cqoa_algebra* bad = nullptr;
  CHECK(cqoa_algebra_create("nope", &bad) == CQOA_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
  CHECK(std::strlen(cqoa_last_error()) > 0);

  Expr e;
  CHECK(cqoa_parse(alg, "b + :b c:", &e.p) == CQOA_OK);
  Expr broken;
  CHECK(cqoa_parse(alg, "b +", &broken.p) == CQOA_ERR_PARSE);
  Expr unknown;
  CHECK(cqoa_parse(alg, "L", &unknown.p) == CQOA_ERR_PARSE);

  Str s;
  CHECK(cqoa_render(e.p, &s.p) == CQOA_OK);
  Expr round;
  CHECK(cqoa_parse(alg, s.p, &round.p) == CQOA_OK);
  CHECK(equal(e.p, round.p));

  int z = -1;
  Expr zero;
  CHECK(cqoa_parse(alg, "b - b", &zero.p) == CQOA_OK);
  CHECK(cqoa_expr_is_zero(zero.p, &z) == CQOA_OK);
  CHECK(z == 1);

  // expressions are bound to their algebra
  cqoa_algebra* other = nullptr;
  CHECK(cqoa_algebra_create("bc:1", &other) == CQOA_OK);
  Expr r;
  CHECK(cqoa_wick(other, e.p, e.p, &r.p) == CQOA_ERR_ALGEBRA_MISMATCH);
  cqoa_algebra_free(other);
  cqoa_algebra_free(alg);
}

void test_core_products() {
  cqoa_algebra* alg = nullptr;
  CHECK(cqoa_algebra_create("bc:2", &alg) == CQOA_OK);
  Expr b, c, one;
  CHECK(cqoa_parse(alg, "b", &b.p) == CQOA_OK);
  CHECK(cqoa_parse(alg, "c", &c.p) == CQOA_OK);
  CHECK(cqoa_parse(alg, "1", &one.p) == CQOA_OK);

  Expr prod;
  CHECK(cqoa_circle(alg, b.p, 0, c.p, &prod.p) == CQOA_OK);
  CHECK(equal(prod.p, one.p));

  Expr w, expect;
  CHECK(cqoa_wick(alg, c.p, b.p, &w.p) == CQOA_OK);
  CHECK(cqoa_parse(alg, "-:b c:", &expect.p) == CQOA_OK);
  CHECK(equal(w.p, expect.p));

  Expr db, shift;
  CHECK(cqoa_derivative(alg, b.p, 1, &db.p) == CQOA_OK);
  CHECK(cqoa_circle(alg, b.p, -2, one.p, &shift.p) == CQOA_OK);
  CHECK(equal(db.p, shift.p));

  Expr nf, cb;
  CHECK(cqoa_parse(alg, ":c b:", &cb.p) == CQOA_OK);
  CHECK(cqoa_normal_form(alg, cb.p, &nf.p) == CQOA_OK);
  Str rendered;
  CHECK(cqoa_render(nf.p, &rendered.p) == CQOA_OK);
  CHECK(rendered.contains(":b c:"));

  int order = -1;
  CHECK(cqoa_is_local(alg, b.p, c.p, &order) == CQOA_OK);
  CHECK(order == 1);
  cqoa_algebra_free(alg);
}

void test_documents() {
  cqoa_algebra* alg = nullptr;
  CHECK(cqoa_algebra_create("vir", &alg) == CQOA_OK);
  Expr L;
  CHECK(cqoa_parse(alg, "L", &L.p) == CQOA_OK);

  Str text;
  CHECK(cqoa_ope(alg, L.p, L.p, "text", &text.p) == CQOA_OK);
  CHECK(text.contains("2*L"));
  Str json;
  CHECK(cqoa_ope(alg, L.p, L.p, "json", &json.p) == CQOA_OK);
  CHECK(json.contains("\"locality_order\": 4"));
  CHECK(json.contains("\"singular\""));
  Str bad;
  CHECK(cqoa_ope(alg, L.p, L.p, "yaml", &bad.p) == CQOA_ERR_INVALID_ARGUMENT);

  Str basis;
  CHECK(cqoa_basis(alg, 0, 4, 1, "json", &basis.p) == CQOA_OK);
  CHECK(basis.contains(":L L:"));

  int passed = 0;
  Str axioms;
  CHECK(cqoa_check_axioms(alg, 4, -2, "text", &axioms.p, &passed) == CQOA_OK);
  CHECK(passed == 1);

  int matches = 0;
  Str oracle;
  CHECK(cqoa_oracle_compare(alg, L.p, 3, L.p, 6, "text", &oracle.p, &matches) == CQOA_OK);
  CHECK(matches == 1);
  cqoa_algebra_free(alg);
}

void test_brst_layer() {
  cqoa_algebra* alg = nullptr;
  CHECK(cqoa_algebra_create("brst", &alg) == CQOA_OK);

  Expr j;
  CHECK(cqoa_brst_current(alg, &j.p) == CQOA_OK);
  Str jr;
  CHECK(cqoa_render(j.p, &jr.p) == CQOA_OK);
  CHECK(jr.contains(":c L:"));

  Expr b, db;
  CHECK(cqoa_parse(alg, "b", &b.p) == CQOA_OK);
  CHECK(cqoa_brst_d(alg, b.p, &db.p) == CQOA_OK);
  Str dbr;
  CHECK(cqoa_render(db.p, &dbr.p) == CQOA_OK);
  CHECK(dbr.contains("L"));

  Str dsq;
  CHECK(cqoa_brst_dsquare(alg, "text", &dsq.p) == CQOA_OK);
  CHECK(dsq.contains("kappa"));

  int verified = 0;
  Str nilp;
  CHECK(cqoa_brst_nilpotency(alg, "json", &nilp.p, &verified) == CQOA_OK);
  CHECK(verified == 1);
  CHECK(nilp.contains("obstruction"));

  Expr delta, bracket;
  Expr c;
  CHECK(cqoa_parse(alg, "c", &c.p) == CQOA_OK);
  CHECK(cqoa_bv_delta(alg, c.p, &delta.p) == CQOA_OK);
  int z = 0;
  CHECK(cqoa_expr_is_zero(delta.p, &z) == CQOA_OK);
  CHECK(z == 1);
  CHECK(cqoa_bv_bracket(alg, b.p, c.p, &bracket.p) == CQOA_OK);

  int holds = 0;
  CHECK(cqoa_bv_second_order(alg, b.p, c.p, c.p, &holds) == CQOA_OK);
  CHECK(holds == 1);

  // kernel requires kappa = 26
  Str kernel;
  CHECK(cqoa_brst_kernel(alg, 0, 2, "text", &kernel.p) == CQOA_ERR_PRECONDITION);
  cqoa_algebra_free(alg);

  cqoa_algebra* crit = nullptr;
  CHECK(cqoa_algebra_create("brst:kappa=26", &crit) == CQOA_OK);
  Str kernel26;
  CHECK(cqoa_brst_kernel(crit, 0, 2, "json", &kernel26.p) == CQOA_OK);
  CHECK(kernel26.contains("kernel"));

  int verified26 = 0;
  Str nilp26;
  CHECK(cqoa_brst_nilpotency(crit, "text", &nilp26.p, &verified26) == CQOA_OK);
  CHECK(verified26 == 1);
  cqoa_algebra_free(crit);

  // off-critical: the dichotomy still verifies, with a nonzero obstruction
  cqoa_algebra* off = nullptr;
  CHECK(cqoa_algebra_create("brst:kappa=25", &off) == CQOA_OK);
  int verified25 = 0;
  Str nilp25;
  CHECK(cqoa_brst_nilpotency(off, "json", &nilp25.p, &verified25) == CQOA_OK);
  CHECK(verified25 == 1);
  CHECK(nilp25.contains("\"square_zero_mod_derivative\": false"));
  cqoa_algebra_free(off);

  // BRST entry points reject non-brst algebras
  cqoa_algebra* bc = nullptr;
  CHECK(cqoa_algebra_create("bc:2", &bc) == CQOA_OK);
  Expr j2;
  CHECK(cqoa_brst_current(bc, &j2.p) == CQOA_ERR_PRECONDITION);
  cqoa_algebra_free(bc);
}

}  // namespace

int main() {
  test_lifecycle_and_errors();
  test_core_products();
  test_documents();
  test_brst_layer();
  if (failures) {
    std::printf("%d C API check(s) failed\n", failures);
    return 1;
  }
  std::printf("all C API checks passed\n");
  return 0;
}
