#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cqoa/coefficient.hpp"

namespace cqoa {

struct AlgebraSpec;

/// Role drives canonical monomial ordering and Fock-space mode actions.
enum class Role { GhostB, GhostC, Virasoro };

struct GeneratorSymbol {
  std::string name;
  int ghost = 0;
  int weight = 0;
  Role role = Role::Virasoro;
};

/// d^k applied to the generator with the given index in the owning algebra.
struct FieldTerm {
  int generator = 0;
  int derivative_order = 0;
  auto operator<=>(const FieldTerm&) const = default;
};

/// Ordered factor list denoting the right-nested iterated Wick product
/// :f1 (:f2 (... fk):):.  The empty list is the identity operator.
struct WickMonomial {
  std::vector<FieldTerm> factors;

  bool is_identity() const { return factors.empty(); }
  std::size_t size() const { return factors.size(); }
  auto operator<=>(const WickMonomial&) const = default;

  int ghost(const AlgebraSpec&) const;
  int weight(const AlgebraSpec&) const;
  /// True when factors are sorted by generator segment with strictly
  /// decreasing derivative orders on fermionic repeats and weakly
  /// decreasing on bosonic repeats.
  bool is_canonical(const AlgebraSpec&) const;
};

int term_ghost(const FieldTerm&, const AlgebraSpec&);
int term_weight(const FieldTerm&, const AlgebraSpec&);

/// Finite linear combination of Wick monomials over Q(kappa).
class FieldExpr {
 public:
  FieldExpr() = default;
  explicit FieldExpr(const AlgebraSpec* algebra) : algebra_(algebra) {}

  static FieldExpr zero(const AlgebraSpec* a) { return FieldExpr(a); }
  static FieldExpr identity(const AlgebraSpec* a);
  static FieldExpr monomial(const AlgebraSpec* a, WickMonomial m,
                            Coefficient c = Coefficient::one());
  static FieldExpr generator(const AlgebraSpec* a, int index, int derivative_order = 0);

  const AlgebraSpec* algebra() const { return algebra_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<WickMonomial, Coefficient>& terms() const { return terms_; }

  void add_term(const WickMonomial& m, const Coefficient& c);
  FieldExpr operator+(const FieldExpr&) const;
  FieldExpr operator-(const FieldExpr&) const;
  FieldExpr operator-() const;
  FieldExpr& operator+=(const FieldExpr&);
  FieldExpr scaled(const Coefficient&) const;
  bool operator==(const FieldExpr&) const = default;

  /// Splits into bigraded homogeneous components, deterministic order.
  std::vector<std::tuple<int, int, FieldExpr>> grading() const;
  bool is_homogeneous() const;
  /// Valid on nonzero homogeneous expressions.
  int ghost() const;
  int weight() const;

  /// Leibniz derivative over the factor list.  The result may contain
  /// non-canonical monomials; callers needing the canonical span apply the
  /// engine normal form on top.
  FieldExpr raw_derivative() const;
  FieldExpr raw_derivative(int k) const;

 private:
  void check_same_algebra(const FieldExpr&) const;
  const AlgebraSpec* algebra_ = nullptr;
  std::map<WickMonomial, Coefficient> terms_;
};

FieldExpr operator*(const Coefficient& c, const FieldExpr& e);

}  // namespace cqoa
