#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "cqoa/coefficient.hpp"
#include "cqoa/expr.hpp"

namespace cqoa {

struct ConformalStructure {
  FieldExpr stress_tensor;
  Coefficient central_charge;
};

/// Generator roster plus the finite table of singular products
/// g_i (circle_n) g_j for n >= 0.  Negative products are always derived by
/// the engine from the Wick/derivative formula.
struct AlgebraSpec {
  std::string name;
  std::vector<GeneratorSymbol> generators;
  /// (left generator, right generator, n >= 0) -> product.
  std::map<std::tuple<int, int, int>, FieldExpr> singular_ope;
  /// Pole-order bound per generator pair; products vanish for n >= bound.
  std::map<std::pair<int, int>, int> locality_bound;
  bool commutative = false;

  bool has_ghosts = false;   // bc pair present
  bool has_matter = false;   // Virasoro generator present
  int lambda = 0;            // bc weight parameter, meaningful if has_ghosts
  Coefficient kappa;         // meaningful if has_matter and !kappa_formal
  bool kappa_formal = false;

  std::optional<ConformalStructure> conformal;

  int generator_index(const std::string& name) const;
  const GeneratorSymbol& gen(int i) const { return generators.at(i); }
  FieldExpr table_product(int gi, int gj, int n) const;
  int table_bound(int gi, int gj) const;

  /// Minimal conformal weight of any nonzero state at the given ghost
  /// number; nullopt when that ghost sector of the module is empty.
  std::optional<int> min_weight(int ghost) const;
  /// Circle products u (circle_n) v of homogeneous bidegrees vanish for
  /// n >= this bound (module-weight argument via the injective state map).
  int locality_cap(int ghost_u, int weight_u, int ghost_v, int weight_v) const;

  /// The coefficient used for the Virasoro central term: the formal
  /// parameter when kappa_formal, else the fixed value.
  Coefficient central_kappa() const;
};

using AlgebraPtr = std::shared_ptr<const AlgebraSpec>;

AlgebraPtr bc_algebra(int lambda);
AlgebraPtr virasoro_algebra(Coefficient kappa);
AlgebraPtr virasoro_algebra_formal();
AlgebraPtr tensor_algebra(const AlgebraPtr& a, const AlgebraPtr& b);

/// bc-ghost stress tensor (1-lambda):d(b) c: - lambda*:b d(c):, with central
/// charge -12 lambda^2 + 12 lambda - 2.  Construction verifies the Virasoro
/// OPE invariants through the engine.
ConformalStructure bc_stress_tensor(const AlgebraPtr& bc);

struct BrstAlgebra {
  AlgebraPtr algebra;          // tensor(bc(2), virasoro)
  ConformalStructure total;    // L^C = T_bc + L, charge kappa - 26
};
BrstAlgebra brst_algebra(Coefficient kappa);
BrstAlgebra brst_algebra_formal();

struct AlgebraMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cqoa
