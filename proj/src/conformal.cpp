#include "cqoa/algebra.hpp"
#include "cqoa/engine.hpp"

namespace cqoa {

namespace {

void verify_conformal(Engine& eng, const FieldExpr& T, const Coefficient& charge) {
  const AlgebraSpec& a = eng.algebra();
  FieldExpr one = FieldExpr::identity(&a);
  FieldExpr Tn = eng.normal_form(T);
  if (eng.circle(T, 3, T) != one.scaled(charge * Coefficient(1L, 2L)))
    throw std::logic_error("stress tensor: central term mismatch");
  if (!eng.circle(T, 2, T).is_zero())
    throw std::logic_error("stress tensor: third-order pole present");
  if (eng.circle(T, 1, T) != Tn.scaled(Coefficient(2L)))
    throw std::logic_error("stress tensor: weight of T is not 2");
  if (eng.circle(T, 0, T) != eng.derivative(Tn))
    throw std::logic_error("stress tensor: translation term mismatch");
  if (eng.is_local(T, T) > 4)
    throw std::logic_error("stress tensor: pole order exceeds 4");
  for (std::size_t i = 0; i < a.generators.size(); ++i) {
    FieldExpr g = FieldExpr::generator(&a, static_cast<int>(i));
    if (eng.circle(T, 1, g) != g.scaled(Coefficient(static_cast<long>(a.generators[i].weight))))
      throw std::logic_error("stress tensor: circle_1 is not the weight operator on " +
                             a.generators[i].name);
    if (eng.circle(T, 0, g) != eng.derivative(g))
      throw std::logic_error("stress tensor: circle_0 is not d on " + a.generators[i].name);
  }
}

FieldExpr bc_stress_expr(const AlgebraSpec* a, int b, int c, int lambda) {
  // (1-lambda) :d(b) c: - lambda :b d(c):
  FieldExpr T(a);
  T += FieldExpr::monomial(a, WickMonomial{{{b, 1}, {c, 0}}},
                           Coefficient(static_cast<long>(1 - lambda)));
  T += FieldExpr::monomial(a, WickMonomial{{{b, 0}, {c, 1}}},
                           Coefficient(static_cast<long>(-lambda)));
  return T;
}

}  // namespace

ConformalStructure bc_stress_tensor(const AlgebraPtr& bc) {
  if (!bc->has_ghosts) throw PreconditionError("bc_stress_tensor needs a bc algebra");
  int lambda = bc->lambda;
  int b = bc->generator_index("b");
  int c = bc->generator_index("c");
  ConformalStructure cs;
  cs.stress_tensor = bc_stress_expr(bc.get(), b, c, lambda);
  long l = lambda;
  cs.central_charge = Coefficient(Rational(-12 * l * l + 12 * l - 2));
  Engine eng(bc);
  verify_conformal(eng, cs.stress_tensor, cs.central_charge);
  return cs;
}

namespace {

BrstAlgebra make_brst(Coefficient kappa, bool formal) {
  AlgebraPtr bc = bc_algebra(2);
  AlgebraPtr vir = formal ? virasoro_algebra_formal() : virasoro_algebra(std::move(kappa));
  auto spec = std::const_pointer_cast<AlgebraSpec>(tensor_algebra(bc, vir));
  int b = spec->generator_index("b");
  int c = spec->generator_index("c");
  int l = spec->generator_index("L");

  BrstAlgebra out;
  ConformalStructure total;
  total.stress_tensor =
      bc_stress_expr(spec.get(), b, c, 2) + FieldExpr::generator(spec.get(), l);
  total.central_charge = spec->central_kappa() - Coefficient(26L);
  spec->conformal = total;
  out.algebra = spec;
  out.total = std::move(total);
  Engine eng(out.algebra);
  verify_conformal(eng, out.total.stress_tensor, out.total.central_charge);
  return out;
}

}  // namespace

BrstAlgebra brst_algebra(Coefficient kappa) { return make_brst(std::move(kappa), false); }

BrstAlgebra brst_algebra_formal() { return make_brst(Coefficient::zero(), true); }

}  // namespace cqoa
