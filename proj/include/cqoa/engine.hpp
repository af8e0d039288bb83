#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cqoa/algebra.hpp"
#include "cqoa/expr.hpp"
#include "cqoa/statespace.hpp"

namespace cqoa {

struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// All nonzero singular products u circle_n v (n >= 0) plus the pole bound.
struct OPEResult {
  std::map<int, FieldExpr> singular;
  int locality_order = 0;
};

/// The core calculus.  Every public result is in canonical normal form
/// (image of the state-map solve).  Pure up to internal memo caches.
class Engine {
 public:
  explicit Engine(AlgebraPtr algebra);

  const AlgebraSpec& algebra() const { return *algebra_; }
  AlgebraPtr algebra_ptr() const { return algebra_; }
  StateSpace& space() { return space_; }

  /// Normal-ordered product; equals circle(u, -1, v).
  FieldExpr wick(const FieldExpr& u, const FieldExpr& v);
  FieldExpr circle(const FieldExpr& u, long n, const FieldExpr& v);
  OPEResult ope(const FieldExpr& u, const FieldExpr& v);
  FieldExpr normal_form(const FieldExpr& e);
  FieldExpr derivative(const FieldExpr& e);
  FieldExpr derivative(const FieldExpr& e, int k);
  int is_local(const FieldExpr& u, const FieldExpr& v);

  /// Pairs (C(m,n) * u circle_n v, m - n) over n >= 0 with nonzero entry:
  /// the w-expansion of the graded commutator [u(m), v(w)].
  std::vector<std::pair<FieldExpr, long>> mode_commutator(const FieldExpr& u, long m,
                                                          const FieldExpr& v);

  /// Skew-symmetry-with-corrections axiom for all n_floor <= n < pole bound;
  /// u, v must be homogeneous.
  bool verify_commutativity(const FieldExpr& u, const FieldExpr& v, long n_floor);

  struct AxiomReport {
    bool passed = true;
    std::string first_failure;
    long pairs_checked = 0;
  };
  AxiomReport check_semi_infinite_axioms(int max_weight, long n_floor);

  /// All canonical monomials with weight <= max_weight, deterministic order.
  std::vector<WickMonomial> monomials_up_to(int max_weight);

  int locality_cap(const WickMonomial& u, const WickMonomial& v) const;

 private:
  FieldExpr circle_mono(const WickMonomial& u, long n, const WickMonomial& v);
  FieldExpr wick_mono(const WickMonomial& u, const WickMonomial& v);
  FieldExpr nf_mono(const WickMonomial& m);
  int intern(const WickMonomial& m);
  void require_commutative() const;

  AlgebraPtr algebra_;
  StateSpace space_;

  std::map<WickMonomial, int> mono_ids_;
  struct Key {
    int left;
    long n;
    int right;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = static_cast<std::uint64_t>(k.left) * 0x9e3779b97f4a7c15ull;
      h ^= (static_cast<std::uint64_t>(k.n + (1 << 20)) + 0x7f4a7c15u) * 0xc2b2ae3d27d4eb4full;
      h ^= (static_cast<std::uint64_t>(k.right) + 0x165667b1u) * 0x2545f4914f6cdd1dull;
      h ^= h >> 29;
      return static_cast<std::size_t>(h);
    }
  };
  // Products are memoized per monomial pair.  To bound memory on long sweeps
  // the memo keeps two generations: when the live one fills up it is demoted
  // and the stale one dropped, so recently used entries survive eviction.
  struct ProductCache {
    std::unordered_map<Key, FieldExpr, KeyHash> live, stale;
    const FieldExpr* find(const Key& k) {
      if (auto it = live.find(k); it != live.end()) return &it->second;
      if (auto it = stale.find(k); it != stale.end()) {
        // promote on hit so hot entries outlive the next eviction
        const FieldExpr* p = &live.emplace(k, std::move(it->second)).first->second;
        stale.erase(it);
        return p;
      }
      return nullptr;
    }
    void insert(const Key& k, FieldExpr v) {
      live.emplace(k, std::move(v));
      if (live.size() > 400000) {
        stale = std::move(live);
        live.clear();
      }
    }
  };
  ProductCache circle_cache_;
  ProductCache wick_cache_;
  std::map<int, FieldExpr> nf_cache_;
};

}  // namespace cqoa
