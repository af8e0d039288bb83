#pragma once

#include <memory>
#include <vector>

#include "cqoa/algebra.hpp"
#include "cqoa/engine.hpp"

namespace cqoa {

struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Differential/BV layer over the bc (x) Virasoro tensor algebra at
/// lambda = 2.  The current J = :c L: + :b c d(c): is rebuilt in canonical
/// form and its OPE with b is checked on construction: the first-order pole
/// is the total stress tensor L^C, the second-order pole is the ghost number
/// current -:b c:, and there is nothing above.
class BrstContext {
 public:
  static BrstContext make(Coefficient kappa);
  static BrstContext make_formal();

  const AlgebraSpec& algebra() const { return *alg_.algebra; }
  AlgebraPtr algebra_ptr() const { return alg_.algebra; }
  Engine& engine() const { return *engine_; }
  std::shared_ptr<Engine> engine_ptr() const { return engine_; }
  const FieldExpr& current() const { return j_; }
  const FieldExpr& total_stress_tensor() const { return l_total_; }
  /// J circle_1 b = -:b c:, the second-order pole of the current with b.
  const FieldExpr& ghost_current() const { return ghost_current_; }
  const ConformalStructure& conformal() const { return alg_.total; }
  bool kappa_formal() const { return alg_.algebra->kappa_formal; }
  bool kappa_is_26() const;

  FieldExpr b() const;
  FieldExpr c() const;
  FieldExpr matter_l() const;

  /// J circle_0 u: raises ghost by one, preserves weight.
  FieldExpr brst_d(const FieldExpr& u) const;
  /// J circle_0 J.
  FieldExpr j_square() const;
  /// The four products of the two summands of J = A + B, A = :cL:,
  /// B = :b c d(c):, in the order (AA, AB, BA, BB).
  std::vector<FieldExpr> j_square_diagnostics() const;

  /// Canonical representative of e modulo exact derivatives at its bidegree.
  FieldExpr reduce_mod_derivative(const FieldExpr& e) const;

  struct NilpotencyReport {
    FieldExpr j_square;             // J circle_0 J, normal form
    FieldExpr closed_form;          // (3/2) d(:d2(c) c:) + ((kappa-26)/12) :d3(c) c:
    FieldExpr reduced;              // j_square modulo exact derivatives
    FieldExpr obstruction_class;    // :d3(c) c: modulo exact derivatives
    std::vector<FieldExpr> contributions;  // the four summand products
    bool matches_closed_form = false;
    bool reduction_matches = false;  // reduced == ((kappa-26)/12) * class, class != 0
  };
  NilpotencyReport nilpotency_report() const;

  struct ClosedBasis {
    std::vector<FieldExpr> kernel;
    std::size_t kernel_dim = 0;
    std::size_t image_dim = 0;  // image of the differential from ghost-1
  };
  /// Kernel of the differential on the canonical-monomial space at the
  /// bidegree; requires kappa fixed to 26.
  ClosedBasis q_closed_basis(int weight, int ghost) const;

  /// Cobounding element h = b circle_0 A for the graded-symmetry defect of
  /// the Wick product of two closed operators; verifies both contract
  /// identities before returning.
  FieldExpr commutativity_homotopy(const FieldExpr& u, const FieldExpr& v) const;
  /// b circle_1 u with verified contract d(b circle_1 u) = ||u|| u.
  FieldExpr weight_homotopy(const FieldExpr& u) const;

  FieldExpr bv_delta(const FieldExpr& u) const;
  FieldExpr bv_bracket(const FieldExpr& u, const FieldExpr& v) const;
  bool second_order_identity_check(const FieldExpr& A, const FieldExpr& B,
                                   const FieldExpr& C) const;

 private:
  explicit BrstContext(BrstAlgebra alg);
  void require_critical(const char* what) const;

  BrstAlgebra alg_;
  std::shared_ptr<Engine> engine_;
  FieldExpr j_;
  FieldExpr l_total_;
  FieldExpr ghost_current_;
};

}  // namespace cqoa
