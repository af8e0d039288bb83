#pragma once

#include <boost/container/flat_map.hpp>
#include <boost/container/small_vector.hpp>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "cqoa/algebra.hpp"
#include "cqoa/expr.hpp"

namespace cqoa {

/// Basis vector of the ghost Fock space tensored with the Verma quotient:
/// b(-n1)...b(-ni) c(-m1)...c(-mj) vac  (x)  L_{-k1}...L_{-kr} v0,
/// with the b/c mode lists strictly decreasing (entries >= 1) and the
/// matter partition weakly decreasing with parts >= 2.
using ModeList = boost::container::small_vector<int, 4>;

struct BasisState {
  ModeList bmodes;
  ModeList cmodes;
  ModeList matter;

  bool is_vacuum() const { return bmodes.empty() && cmodes.empty() && matter.empty(); }
  int ghost() const {
    return static_cast<int>(cmodes.size()) - static_cast<int>(bmodes.size());
  }
  int weight(const AlgebraSpec& a) const;
  bool operator==(const BasisState&) const = default;
  std::strong_ordering operator<=>(const BasisState& o) const {
    auto c = std::lexicographical_compare_three_way(bmodes.begin(), bmodes.end(),
                                                    o.bmodes.begin(), o.bmodes.end());
    if (c != 0) return c;
    c = std::lexicographical_compare_three_way(cmodes.begin(), cmodes.end(),
                                               o.cmodes.begin(), o.cmodes.end());
    if (c != 0) return c;
    return std::lexicographical_compare_three_way(matter.begin(), matter.end(),
                                                  o.matter.begin(), o.matter.end());
  }
};

using StateVector = boost::container::flat_map<BasisState, Coefficient>;

void sv_accumulate(StateVector& target, const StateVector& sv, const Coefficient& c);
StateVector sv_scaled(const StateVector& sv, const Coefficient& c);

struct NotInSpanError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact module realization: mode actions, the state map and its inverse,
/// basis enumeration, and the definition-level circle-product oracle.
/// All computations are exact; weight cutoffs only bound which basis states
/// a caller asks about, never the internal arithmetic.
class StateSpace {
 public:
  explicit StateSpace(AlgebraPtr algebra);

  const AlgebraSpec& algebra() const { return *algebra_; }
  AlgebraPtr algebra_ptr() const { return algebra_; }

  StateVector apply_term(const FieldTerm&, long mode, const BasisState&);
  StateVector apply_monomial(const WickMonomial&, long mode, const BasisState&);
  StateVector apply_expr(const FieldExpr&, long mode, const BasisState&);
  StateVector apply_expr(const FieldExpr&, long mode, const StateVector&);

  /// u(-1) applied to the vacuum; u need not be homogeneous.
  StateVector state_of(const FieldExpr&);

  /// Complete deterministic basis list of the bidegree.
  std::vector<BasisState> enumerate_basis(int weight, int ghost);
  /// Canonical monomial basis of the operator algebra at the bidegree,
  /// in bijection with enumerate_basis(weight, ghost).
  std::vector<WickMonomial> canonical_monomials(int ghost, int weight);
  /// Ghost numbers whose minimal module weight is <= the cutoff.
  std::vector<int> ghost_sectors(int cutoff) const;

  /// Inverse of the state map at a fixed bidegree (exact linear solve).
  FieldExpr reconstruct(const StateVector& s, int ghost, int weight);

  /// Mode of u circle_n v per the definition, applied to a basis state:
  /// sum_i (-1)^i C(n,i) [ u(n-i)v(m+i) - (-1)^{n+|u||v|} v(n+m-i)u(i) ].
  StateVector oracle_apply(const FieldExpr& u, long n, const FieldExpr& v, long m,
                           const BasisState&);
  /// True when the oracle modes of u circle_n v agree with the modes of
  /// engine_result on every matrix element between states within cutoff.
  bool oracle_matches(const FieldExpr& u, long n, const FieldExpr& v,
                      const FieldExpr& engine_result, int cutoff);
  /// 1 + max n >= 0 with a nonzero oracle product on the truncation.
  int pole_order_check(const FieldExpr& u, const FieldExpr& v, int cutoff);

  std::optional<int> min_weight(int ghost) const { return algebra_->min_weight(ghost); }

 private:
  /// Cached composite-monomial action; the pointer stays valid until the next
  /// public entry point flushes a pending cache trim.  `scratch` backs the
  /// uncached short paths.
  const StateVector* apply_monomial_ptr(const WickMonomial&, long mode, const BasisState&,
                                        StateVector& scratch);
  void flush_trim() {
    if (trim_pending_) {
      apply_stale_ = std::move(apply_cache_);
      apply_cache_.clear();
      trim_pending_ = false;
    }
  }
  StateVector apply_ghost_b(long mode, const BasisState&);
  StateVector apply_ghost_c(long mode, const BasisState&);
  StateVector apply_virasoro(long index, const BasisState&);
  std::map<ModeList, Coefficient> apply_L(long idx, const ModeList& parts);

  int intern_mono(const WickMonomial&);
  int intern_state(const BasisState&);

  AlgebraPtr algebra_;
  int b_gen_ = -1, c_gen_ = -1, l_gen_ = -1;

  struct MonoHash {
    std::size_t operator()(const WickMonomial& m) const {
      std::uint64_t h = 0x9e3779b97f4a7c15ull;
      for (const auto& f : m.factors) {
        h ^= (static_cast<std::uint64_t>(f.generator) * 0xff51afd7ed558ccdull) +
             (static_cast<std::uint64_t>(f.derivative_order) * 0xc4ceb9fe1a85ec53ull);
        h *= 0x2545f4914f6cdd1dull;
      }
      return static_cast<std::size_t>(h ^ (h >> 31));
    }
  };
  struct StateHash {
    std::size_t operator()(const BasisState& s) const {
      std::uint64_t h = 0x9e3779b97f4a7c15ull;
      auto mix = [&h](const ModeList& v, std::uint64_t salt) {
        h ^= salt;
        for (int x : v) {
          h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
      };
      mix(s.bmodes, 0xff51afd7ed558ccdull);
      mix(s.cmodes, 0xc4ceb9fe1a85ec53ull);
      mix(s.matter, 0x2545f4914f6cdd1dull);
      return static_cast<std::size_t>(h ^ (h >> 31));
    }
  };
  std::unordered_map<WickMonomial, int, MonoHash> mono_ids_;
  std::vector<WickMonomial> monos_;
  std::unordered_map<BasisState, int, StateHash> state_ids_;
  std::vector<BasisState> states_;

  struct Key {
    int mono;
    long mode;
    int state;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = static_cast<std::uint64_t>(k.mono) * 0x9e3779b97f4a7c15ull;
      h ^= (static_cast<std::uint64_t>(k.mode + (1 << 20)) + 0x7f4a7c15u) * 0xc2b2ae3d27d4eb4full;
      h ^= (static_cast<std::uint64_t>(k.state) + 0x165667b1u) * 0x2545f4914f6cdd1dull;
      h ^= h >> 29;
      return static_cast<std::size_t>(h);
    }
  };
  // Two generations bound memory on long sweeps: overflow marks a trim, and
  // the next public entry point demotes the live map and drops the old stale
  // one, so entries hit since the previous trim survive.  Demotion is deferred
  // to the flush points because apply_monomial_ptr hands out pointers into
  // both maps for the duration of one public call.
  std::unordered_map<Key, StateVector, KeyHash> apply_cache_;
  std::unordered_map<Key, StateVector, KeyHash> apply_stale_;
  bool trim_pending_ = false;
  std::map<int, StateVector> state_of_cache_;  // by monomial id

  struct Solver {
    std::vector<WickMonomial> monos;
    std::vector<BasisState> states;
    std::map<BasisState, int> state_index;
    // PLU factorization of the state-map matrix, stored in place.
    std::vector<std::vector<Coefficient>> lu;
    std::vector<int> perm;
  };
  std::map<std::pair<int, int>, std::shared_ptr<Solver>> solvers_;  // (ghost, weight)
  const Solver& solver_for(int ghost, int weight);
};

}  // namespace cqoa
