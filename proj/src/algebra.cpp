#include "cqoa/algebra.hpp"

#include <algorithm>
#include <limits>

namespace cqoa {

int AlgebraSpec::generator_index(const std::string& gname) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i].name == gname) return static_cast<int>(i);
  throw std::invalid_argument("unknown generator: " + gname);
}

FieldExpr AlgebraSpec::table_product(int gi, int gj, int n) const {
  auto it = singular_ope.find({gi, gj, n});
  if (it != singular_ope.end()) return it->second;
  return FieldExpr::zero(this);
}

int AlgebraSpec::table_bound(int gi, int gj) const {
  auto it = locality_bound.find({gi, gj});
  return it != locality_bound.end() ? it->second : 0;
}

std::optional<int> AlgebraSpec::min_weight(int ghost) const {
  if (!has_ghosts) {
    if (ghost != 0) return std::nullopt;
    return 0;  // vacuum (and, with matter, partitions of weight >= 0)
  }
  // Ghost sector needs i >= max(0, -ghost) b-modes and j = i + ghost c-modes;
  // the cheapest choice uses modes 1..i and 1..j.  The lambda-dependence
  // cancels except for the -ghost*lambda shift.
  int i0 = std::max(0, -ghost);
  long best = std::numeric_limits<long>::max();
  int top = std::max(i0, (-ghost) / 2 + 2) + 2;
  for (int i = i0; i <= top; ++i) {
    long j = i + ghost;
    long f = (static_cast<long>(i) * i - i) / 2 + (j * j + j) / 2 -
             static_cast<long>(ghost) * lambda;
    best = std::min(best, f);
  }
  return static_cast<int>(best);
}

int AlgebraSpec::locality_cap(int ghost_u, int weight_u, int ghost_v, int weight_v) const {
  auto mw = min_weight(ghost_u + ghost_v);
  if (!mw) return 0;
  long cap = static_cast<long>(weight_u) + weight_v - *mw;
  return cap > 0 ? static_cast<int>(cap) : 0;
}

Coefficient AlgebraSpec::central_kappa() const {
  return kappa_formal ? Coefficient::kappa() : kappa;
}

AlgebraPtr bc_algebra(int lambda) {
  auto spec = std::make_shared<AlgebraSpec>();
  spec->name = "bc:" + std::to_string(lambda);
  spec->generators = {
      {"b", -1, lambda, Role::GhostB},
      {"c", +1, 1 - lambda, Role::GhostC},
  };
  spec->commutative = true;
  spec->has_ghosts = true;
  spec->lambda = lambda;
  spec->singular_ope.emplace(std::make_tuple(0, 1, 0), FieldExpr::identity(spec.get()));
  spec->singular_ope.emplace(std::make_tuple(1, 0, 0), FieldExpr::identity(spec.get()));
  spec->locality_bound[{0, 1}] = 1;
  spec->locality_bound[{1, 0}] = 1;
  spec->locality_bound[{0, 0}] = 0;
  spec->locality_bound[{1, 1}] = 0;
  return spec;
}

namespace {

AlgebraPtr make_virasoro(Coefficient kappa, bool formal) {
  auto spec = std::make_shared<AlgebraSpec>();
  spec->name = "vir";
  spec->generators = {{"L", 0, 2, Role::Virasoro}};
  spec->commutative = true;
  spec->has_matter = true;
  spec->kappa = std::move(kappa);
  spec->kappa_formal = formal;
  FieldExpr L = FieldExpr::generator(spec.get(), 0);
  spec->singular_ope.emplace(std::make_tuple(0, 0, 0), L.raw_derivative());
  spec->singular_ope.emplace(std::make_tuple(0, 0, 1), Coefficient(2L) * L);
  spec->singular_ope.emplace(
      std::make_tuple(0, 0, 3),
      FieldExpr::monomial(spec.get(), WickMonomial{},
                          spec->central_kappa() * Coefficient(1L, 2L)));
  spec->locality_bound[{0, 0}] = 4;
  return spec;
}

FieldExpr translate(const FieldExpr& e, int offset, const AlgebraSpec* target) {
  FieldExpr out(target);
  for (const auto& [m, c] : e.terms()) {
    WickMonomial t = m;
    for (auto& f : t.factors) f.generator += offset;
    out.add_term(t, c);
  }
  return out;
}

}  // namespace

AlgebraPtr virasoro_algebra(Coefficient kappa) { return make_virasoro(std::move(kappa), false); }

AlgebraPtr virasoro_algebra_formal() { return make_virasoro(Coefficient::zero(), true); }

AlgebraPtr tensor_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  for (const auto& ga : a->generators)
    for (const auto& gb : b->generators)
      if (ga.name == gb.name)
        throw std::invalid_argument("tensor factors share generator name: " + ga.name);

  auto spec = std::make_shared<AlgebraSpec>();
  spec->name = a->name + "*" + b->name;
  spec->generators = a->generators;
  spec->generators.insert(spec->generators.end(), b->generators.begin(), b->generators.end());
  spec->commutative = a->commutative && b->commutative;
  spec->has_ghosts = a->has_ghosts || b->has_ghosts;
  spec->has_matter = a->has_matter || b->has_matter;
  spec->lambda = a->has_ghosts ? a->lambda : b->lambda;
  const AlgebraSpec* matter = a->has_matter ? a.get() : (b->has_matter ? b.get() : nullptr);
  if (matter) {
    spec->kappa = matter->kappa;
    spec->kappa_formal = matter->kappa_formal;
  }
  int off = static_cast<int>(a->generators.size());
  for (const auto& [key, val] : a->singular_ope) {
    auto [gi, gj, n] = key;
    spec->singular_ope.emplace(std::make_tuple(gi, gj, n), translate(val, 0, spec.get()));
  }
  for (const auto& [key, val] : b->singular_ope) {
    auto [gi, gj, n] = key;
    spec->singular_ope.emplace(std::make_tuple(gi + off, gj + off, n),
                               translate(val, off, spec.get()));
  }
  for (const auto& [key, val] : a->locality_bound) spec->locality_bound[key] = val;
  for (const auto& [key, val] : b->locality_bound)
    spec->locality_bound[{key.first + off, key.second + off}] = val;
  // Cross pairs are mutually regular; absent table entries read as zero and
  // table_bound defaults to 0.
  if (a->conformal && b->conformal) {
    ConformalStructure total;
    total.stress_tensor =
        translate(a->conformal->stress_tensor, 0, spec.get()) +
        translate(b->conformal->stress_tensor, off, spec.get());
    total.central_charge = a->conformal->central_charge + b->conformal->central_charge;
    spec->conformal = std::move(total);
  }
  return spec;
}

}  // namespace cqoa
