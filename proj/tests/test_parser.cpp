#include <doctest.h>

#include "cqoa/brst.hpp"
#include "cqoa/engine.hpp"
#include "cqoa/parser.hpp"

using namespace cqoa;

namespace {

struct Fx {
  AlgebraPtr alg = bc_algebra(2);
  Engine eng{alg};
  FieldExpr b = FieldExpr::generator(alg.get(), alg->generator_index("b"));
  FieldExpr c = FieldExpr::generator(alg.get(), alg->generator_index("c"));
};

}  // namespace

TEST_CASE("atoms and scalars") {
  Fx f;
  CHECK(parse_expr("b", f.eng) == f.b);
  CHECK(parse_expr("1", f.eng) == FieldExpr::identity(f.alg.get()));
  CHECK(parse_expr("0", f.eng).is_zero());
  CHECK(parse_expr("2*b", f.eng) == f.b.scaled(Coefficient(2L)));
  CHECK(parse_expr("-b", f.eng) == -f.b);
  CHECK(parse_expr("(1/2)*b", f.eng) == f.b.scaled(Coefficient(1L, 2L)));
  CHECK(parse_expr("1/2*b", f.eng) == f.b.scaled(Coefficient(1L, 2L)));
  CHECK(parse_expr("b + c - b", f.eng) == f.c);
  CHECK(parse_expr("(kappa/2)*1", f.eng) ==
        FieldExpr::identity(f.alg.get()).scaled(Coefficient::kappa() * Coefficient(1L, 2L)));
  CHECK(parse_expr("kappa*b", f.eng) == f.b.scaled(Coefficient::kappa()));
}

TEST_CASE("derivatives") {
  Fx f;
  CHECK(parse_expr("d(b)", f.eng) == f.eng.derivative(f.b));
  CHECK(parse_expr("d3(c)", f.eng) == f.eng.derivative(f.c, 3));
  CHECK(parse_expr("d(d(b))", f.eng) == f.eng.derivative(f.b, 2));
  CHECK(parse_expr("d(:b c:)", f.eng) == f.eng.derivative(f.eng.wick(f.b, f.c)));
}

TEST_CASE("wick groups are right nested through the engine") {
  Fx f;
  CHECK(parse_expr(":b c:", f.eng) == f.eng.wick(f.b, f.c));
  CHECK(parse_expr(":c b:", f.eng) == f.eng.wick(f.c, f.b));
  CHECK(parse_expr(":b c d(c):", f.eng) ==
        f.eng.wick(f.b, f.eng.wick(f.c, f.eng.derivative(f.c))));
}

TEST_CASE("parenthesized subexpressions") {
  Fx f;
  CHECK(parse_expr("2*(b + b)", f.eng) == f.b.scaled(Coefficient(4L)));
  CHECK(parse_expr("-(b - c)", f.eng) == f.c - f.b);
}

TEST_CASE("coefficient parsing") {
  CHECK(parse_coefficient("3/4") == Coefficient(3L, 4L));
  CHECK(parse_coefficient("kappa - 26") == Coefficient::kappa() - Coefficient(26L));
  CHECK(parse_coefficient("(kappa - 26)/12") ==
        (Coefficient::kappa() - Coefficient(26L)) * Coefficient(1L, 12L));
  CHECK(parse_coefficient("2^3") == Coefficient(8L));
}

TEST_CASE("parse errors carry a position") {
  Fx f;
  CHECK_THROWS_AS(parse_expr("", f.eng), ParseError);
  CHECK_THROWS_AS(parse_expr("b +", f.eng), ParseError);
  CHECK_THROWS_AS(parse_expr("q", f.eng), ParseError);
  CHECK_THROWS_AS(parse_expr(":b c", f.eng), ParseError);
  CHECK_THROWS_AS(parse_expr("d(b", f.eng), ParseError);
  CHECK_THROWS_AS(parse_expr("b c", f.eng), ParseError);
  try {
    parse_expr("b + q", f.eng);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position == 4);
  }
}

TEST_CASE("rendering round trips") {
  Fx f;
  CHECK(render(FieldExpr::zero(f.alg.get())) == "0");
  CHECK(render(FieldExpr::identity(f.alg.get())) == "1");
  for (const char* src :
       {"b", "-b", ":b c:", "2*:b c: - d(b)", ":b d(c): + 1/2*c", "d2(b)"}) {
    FieldExpr e = parse_expr(src, f.eng);
    CHECK(parse_expr(render(e), f.eng) == e);
  }
}

TEST_CASE("round trip across the brst algebra") {
  BrstContext ctx = BrstContext::make_formal();
  Engine& eng = ctx.engine();
  CHECK(parse_expr(":c L: + :b c d(c):", eng) == ctx.current());
  auto rep = ctx.nilpotency_report();
  CHECK(parse_expr(render(rep.j_square), eng) == rep.j_square);
  CHECK(parse_expr(render(rep.reduced), eng) == rep.reduced);
  for (const auto& m : eng.monomials_up_to(3)) {
    FieldExpr e = FieldExpr::monomial(&ctx.algebra(), m);
    CHECK(parse_expr(render(e), eng) == e);
  }
}
