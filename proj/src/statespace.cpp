#include "cqoa/statespace.hpp"

#include <algorithm>
#include <cassert>

namespace cqoa {

int BasisState::weight(const AlgebraSpec& a) const {
  int w = 0;
  for (int n : bmodes) w += a.lambda + n - 1;
  for (int m : cmodes) w += m - a.lambda;
  for (int k : matter) w += k;
  return w;
}

void sv_accumulate(StateVector& target, const StateVector& sv, const Coefficient& c) {
  if (c.is_zero()) return;
  for (const auto& [s, coef] : sv) {
    auto [it, inserted] = target.emplace(s, coef * c);
    if (!inserted) {
      it->second += coef * c;
      if (it->second.is_zero()) target.erase(it);
    }
  }
}

StateVector sv_scaled(const StateVector& sv, const Coefficient& c) {
  StateVector out;
  sv_accumulate(out, sv, c);
  return out;
}

StateSpace::StateSpace(AlgebraPtr algebra) : algebra_(std::move(algebra)) {
  for (std::size_t i = 0; i < algebra_->generators.size(); ++i) {
    switch (algebra_->generators[i].role) {
      case Role::GhostB: b_gen_ = static_cast<int>(i); break;
      case Role::GhostC: c_gen_ = static_cast<int>(i); break;
      case Role::Virasoro: l_gen_ = static_cast<int>(i); break;
    }
  }
}

int StateSpace::intern_mono(const WickMonomial& m) {
  auto [it, inserted] = mono_ids_.emplace(m, static_cast<int>(monos_.size()));
  if (inserted) monos_.push_back(m);
  return it->second;
}

int StateSpace::intern_state(const BasisState& s) {
  auto [it, inserted] = state_ids_.emplace(s, static_cast<int>(states_.size()));
  if (inserted) states_.push_back(s);
  return it->second;
}

StateVector StateSpace::apply_ghost_b(long mode, const BasisState& s) {
  StateVector out;
  if (mode < 0) {
    int n = static_cast<int>(-mode);
    std::size_t p = 0;
    while (p < s.bmodes.size() && s.bmodes[p] > n) ++p;
    if (p < s.bmodes.size() && s.bmodes[p] == n) return out;  // repeated mode
    BasisState t = s;
    t.bmodes.insert(t.bmodes.begin() + p, n);
    out.emplace(std::move(t), Coefficient(p % 2 == 0 ? 1L : -1L));
  } else {
    // passes every b (sign flips), then contracts with c(-(mode+1))
    int target = static_cast<int>(mode) + 1;
    int sign = s.bmodes.size() % 2 == 0 ? 1 : -1;
    for (std::size_t t = 0; t < s.cmodes.size(); ++t) {
      if (s.cmodes[t] == target) {
        BasisState r = s;
        r.cmodes.erase(r.cmodes.begin() + t);
        out.emplace(std::move(r), Coefficient(t % 2 == 0 ? sign : -sign));
        break;
      }
    }
  }
  return out;
}

StateVector StateSpace::apply_ghost_c(long mode, const BasisState& s) {
  StateVector out;
  if (mode < 0) {
    int m = static_cast<int>(-mode);
    int sign = s.bmodes.size() % 2 == 0 ? 1 : -1;
    std::size_t q = 0;
    while (q < s.cmodes.size() && s.cmodes[q] > m) ++q;
    if (q < s.cmodes.size() && s.cmodes[q] == m) return out;
    BasisState t = s;
    t.cmodes.insert(t.cmodes.begin() + q, m);
    out.emplace(std::move(t), Coefficient(q % 2 == 0 ? sign : -sign));
  } else {
    // contracts with b(-(mode+1)); annihilates the vacuum otherwise
    int target = static_cast<int>(mode) + 1;
    for (std::size_t t = 0; t < s.bmodes.size(); ++t) {
      if (s.bmodes[t] == target) {
        BasisState r = s;
        r.bmodes.erase(r.bmodes.begin() + t);
        out.emplace(std::move(r), Coefficient(t % 2 == 0 ? 1L : -1L));
        break;
      }
    }
  }
  return out;
}

std::map<ModeList, Coefficient> StateSpace::apply_L(long idx,
                                                           const ModeList& parts) {
  std::map<ModeList, Coefficient> out;
  auto add = [&out](ModeList p, const Coefficient& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = out.emplace(std::move(p), c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) out.erase(it);
    }
  };
  if (parts.empty()) {
    if (idx <= -2) add({static_cast<int>(-idx)}, Coefficient::one());
    return out;  // L_idx v0 = 0 for idx >= -1 (highest weight / quotient)
  }
  if (idx <= -2 && -idx >= parts.front()) {
    ModeList p;
    p.reserve(parts.size() + 1);
    p.push_back(static_cast<int>(-idx));
    p.insert(p.end(), parts.begin(), parts.end());
    add(std::move(p), Coefficient::one());
    return out;
  }
  int k1 = parts.front();
  ModeList rest(parts.begin() + 1, parts.end());
  // L_idx L_{-k1} = L_{-k1} L_idx + (idx + k1) L_{idx-k1}
  //                 + delta_{idx,k1} (kappa/12)(idx^3 - idx)
  for (const auto& [p, c] : apply_L(idx, rest))
    for (const auto& [q, c2] : apply_L(-static_cast<long>(k1), p)) add(q, c * c2);
  if (idx + k1 != 0) {
    Coefficient f{Rational(idx + k1)};
    for (const auto& [p, c] : apply_L(idx - k1, rest)) add(p, c * f);
  }
  if (idx == k1) {
    long long cube = static_cast<long long>(idx) * idx * idx - idx;
    Coefficient central = algebra_->central_kappa() * Coefficient(Rational(cube, 12));
    add(rest, central);
  }
  return out;
}

StateVector StateSpace::apply_virasoro(long idx, const BasisState& s) {
  StateVector out;
  for (auto& [p, c] : apply_L(idx, s.matter)) {
    BasisState t;
    t.bmodes = s.bmodes;
    t.cmodes = s.cmodes;
    t.matter = p;
    out.emplace(std::move(t), c);
  }
  return out;
}

StateVector StateSpace::apply_term(const FieldTerm& f, long mode, const BasisState& s) {
  // (d^k g)(m) = (-1)^k m(m-1)...(m-k+1) g(m-k)
  Rational factor(1);
  for (int t = 0; t < f.derivative_order; ++t) factor *= -(mode - t);
  if (factor == 0) return {};
  long gmode = mode - f.derivative_order;
  StateVector base;
  switch (algebra_->gen(f.generator).role) {
    case Role::GhostB: base = apply_ghost_b(gmode, s); break;
    case Role::GhostC: base = apply_ghost_c(gmode, s); break;
    case Role::Virasoro: base = apply_virasoro(gmode - 1, s); break;
  }
  if (factor == 1) return base;
  return sv_scaled(base, Coefficient(factor));
}

StateVector StateSpace::apply_monomial(const WickMonomial& mono, long mode,
                                       const BasisState& s) {
  StateVector scratch;
  return *apply_monomial_ptr(mono, mode, s, scratch);
}

const StateVector* StateSpace::apply_monomial_ptr(const WickMonomial& mono, long mode,
                                                  const BasisState& s, StateVector& scratch) {
  if (mono.is_identity()) {
    scratch.clear();
    if (mode == -1) scratch.emplace(s, Coefficient::one());
    return &scratch;
  }
  Key key{intern_mono(mono), mode, intern_state(s)};
  if (auto it = apply_cache_.find(key); it != apply_cache_.end()) return &it->second;
  if (auto it = apply_stale_.find(key); it != apply_stale_.end()) {
    // re-promote by copy: pointers into the stale map stay valid until the
    // next flush even if this entry is demoted again
    return &apply_cache_.emplace(key, it->second).first->second;
  }

  if (mono.size() == 1) {
    if (apply_cache_.size() > 800000) trim_pending_ = true;
    auto [slot1, ins1] = apply_cache_.emplace(key, apply_term(mono.factors.front(), mode, s));
    (void)ins1;
    return &slot1->second;
  }

  const FieldTerm& u = mono.factors.front();
  WickMonomial rest{std::vector<FieldTerm>(mono.factors.begin() + 1, mono.factors.end())};
  const AlgebraSpec& a = *algebra_;
  int gu = term_ghost(u, a), wu = term_weight(u, a);
  int grest = rest.ghost(a), wrest = rest.weight(a);
  bool odd = (gu % 2 != 0) && (grest % 2 != 0);
  int ws = s.weight(a), gs = s.ghost();

  StateVector out;
  // (:u rest:)(m) = sum_{k<0} u(k) rest(m-k-1) + eps sum_{k>=0} rest(m-k-1) u(k)
  StateVector tmp;
  if (auto mw1 = min_weight(gs + grest)) {
    long kmin = *mw1 - ws - wrest + mode;
    for (long k = -1; k >= kmin; --k) {
      const StateVector* inner = apply_monomial_ptr(rest, mode - k - 1, s, tmp);
      for (const auto& [s2, c2] : *inner)
        sv_accumulate(out, apply_term(u, k, s2), c2);
    }
  }
  if (auto mw2 = min_weight(gs + gu)) {
    long kmax = static_cast<long>(ws) + wu - 1 - *mw2;
    Coefficient eps(odd ? -1L : 1L);
    StateVector tmp2;
    for (long k = 0; k <= kmax; ++k) {
      StateVector inner = apply_term(u, k, s);
      for (const auto& [s2, c2] : inner) {
        const StateVector* outer = apply_monomial_ptr(rest, mode - k - 1, s2, tmp2);
        sv_accumulate(out, *outer, c2 * eps);
      }
    }
  }
  if (apply_cache_.size() > 800000) trim_pending_ = true;
  auto [slot, inserted] = apply_cache_.emplace(key, std::move(out));
  (void)inserted;
  return &slot->second;
}

StateVector StateSpace::apply_expr(const FieldExpr& e, long mode, const BasisState& s) {
  flush_trim();
  StateVector out, scratch;
  for (const auto& [m, c] : e.terms())
    sv_accumulate(out, *apply_monomial_ptr(m, mode, s, scratch), c);
  return out;
}

StateVector StateSpace::apply_expr(const FieldExpr& e, long mode, const StateVector& sv) {
  StateVector out;
  for (const auto& [s, c] : sv) sv_accumulate(out, apply_expr(e, mode, s), c);
  return out;
}

StateVector StateSpace::state_of(const FieldExpr& e) {
  StateVector out;
  for (const auto& [m, c] : e.terms()) {
    int id = intern_mono(m);
    auto it = state_of_cache_.find(id);
    if (it == state_of_cache_.end())
      it = state_of_cache_.emplace(id, apply_monomial(m, -1, BasisState{})).first;
    sv_accumulate(out, it->second, c);
  }
  return out;
}

namespace {

// Strictly decreasing lists of `count` positive integers with the given sum.
void distinct_sets(int count, int sum, int max_first, std::vector<int>& cur,
                   std::vector<std::vector<int>>& out) {
  if (count == 0) {
    if (sum == 0) out.push_back(cur);
    return;
  }
  // remaining entries are < first and pairwise distinct
  for (int first = std::min(max_first, sum - (count - 1) * count / 2); first >= count;
       --first) {
    if (sum - first < (count - 1) * count / 2) continue;
    cur.push_back(first);
    distinct_sets(count - 1, sum - first, first - 1, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> distinct_sets(int count, int sum) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  distinct_sets(count, sum, sum, cur, out);
  return out;
}

void partitions_min2(int sum, int max_part, std::vector<int>& cur,
                     std::vector<std::vector<int>>& out) {
  if (sum == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(max_part, sum); p >= 2; --p) {
    cur.push_back(p);
    partitions_min2(sum - p, p, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> partitions_min2(int sum) {
  std::vector<std::vector<int>> out;
  if (sum < 0) return out;
  std::vector<int> cur;
  partitions_min2(sum, sum, cur, out);
  return out;
}

BasisState make_state(const std::vector<int>& b, const std::vector<int>& c,
                      const std::vector<int>& m) {
  BasisState s;
  s.bmodes.assign(b.begin(), b.end());
  s.cmodes.assign(c.begin(), c.end());
  s.matter.assign(m.begin(), m.end());
  return s;
}

}  // namespace

std::vector<BasisState> StateSpace::enumerate_basis(int weight, int ghost) {
  const AlgebraSpec& a = *algebra_;
  std::vector<BasisState> out;
  if (!a.has_ghosts) {
    if (ghost == 0 && a.has_matter)
      for (auto& p : partitions_min2(weight)) out.push_back(make_state({}, {}, p));
    std::sort(out.begin(), out.end());
    return out;
  }
  int i0 = std::max(0, -ghost);
  for (int i = i0;; ++i) {
    long j = static_cast<long>(i) + ghost;
    long mbc = -static_cast<long>(ghost) * a.lambda + static_cast<long>(i) * (i - 1) / 2 +
               j * (j + 1) / 2;
    if (mbc > weight && i > std::max(i0, -ghost / 2 + 1)) break;
    if (mbc > weight) continue;
    int rmax = a.has_matter ? static_cast<int>(weight - mbc) : 0;
    for (int r = 0; r <= rmax; ++r) {
      auto matter_parts = partitions_min2(r);
      if (matter_parts.empty()) continue;
      long wbc = weight - r;
      // bc weight = i*lambda - i + Sb + Sc - j*lambda
      long stotal = wbc - static_cast<long>(i) * a.lambda + i + j * a.lambda;
      for (long sb = static_cast<long>(i) * (i + 1) / 2; sb <= stotal - j * (j + 1) / 2;
           ++sb) {
        long sc = stotal - sb;
        auto bs = distinct_sets(i, static_cast<int>(sb));
        if (bs.empty()) continue;
        auto cs = distinct_sets(static_cast<int>(j), static_cast<int>(sc));
        for (auto& B : bs)
          for (auto& C : cs)
            for (auto& P : matter_parts) out.push_back(make_state(B, C, P));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<WickMonomial> StateSpace::canonical_monomials(int ghost, int weight) {
  std::vector<WickMonomial> out;
  for (const auto& s : enumerate_basis(weight, ghost)) {
    WickMonomial m;
    for (int n : s.bmodes) m.factors.push_back({b_gen_, n - 1});
    for (int c : s.cmodes) m.factors.push_back({c_gen_, c - 1});
    for (int k : s.matter) m.factors.push_back({l_gen_, k - 2});
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<int> StateSpace::ghost_sectors(int cutoff) const {
  std::vector<int> out;
  if (!algebra_->has_ghosts) {
    out.push_back(0);
    return out;
  }
  int span = 2 * (std::abs(cutoff) + std::abs(algebra_->lambda) + 4) + 4;
  for (int g = -span; g <= span; ++g) {
    auto mw = min_weight(g);
    if (mw && *mw <= cutoff) out.push_back(g);
  }
  return out;
}

const StateSpace::Solver& StateSpace::solver_for(int ghost, int weight) {
  auto key = std::make_pair(ghost, weight);
  if (auto it = solvers_.find(key); it != solvers_.end()) return *it->second;

  auto sol = std::make_shared<Solver>();
  sol->monos = canonical_monomials(ghost, weight);
  sol->states = enumerate_basis(weight, ghost);
  if (sol->monos.size() != sol->states.size())
    throw std::logic_error("monomial/state basis size mismatch");
  std::size_t n = sol->states.size();
  for (std::size_t r = 0; r < n; ++r) sol->state_index.emplace(sol->states[r], r);

  sol->lu.assign(n, std::vector<Coefficient>(n, Coefficient::zero()));
  for (std::size_t col = 0; col < n; ++col) {
    StateVector sv = state_of(FieldExpr::monomial(algebra_.get(), sol->monos[col]));
    for (const auto& [st, c] : sv) {
      auto it = sol->state_index.find(st);
      if (it == sol->state_index.end())
        throw std::logic_error("state map left the expected bidegree");
      sol->lu[it->second][col] = c;
    }
  }
  // PLU factorization, first-nonzero pivoting (exact arithmetic).
  sol->perm.resize(n);
  for (std::size_t r = 0; r < n; ++r) sol->perm[r] = static_cast<int>(r);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && sol->lu[piv][k].is_zero()) ++piv;
    if (piv == n) throw std::logic_error("state-map matrix is singular");
    if (piv != k) {
      std::swap(sol->lu[piv], sol->lu[k]);
      std::swap(sol->perm[piv], sol->perm[k]);
    }
    Coefficient inv = sol->lu[k][k].inverse();
    for (std::size_t r = k + 1; r < n; ++r) {
      if (sol->lu[r][k].is_zero()) continue;
      Coefficient f = sol->lu[r][k] * inv;
      sol->lu[r][k] = f;  // store the multiplier in place of the zero
      for (std::size_t c = k + 1; c < n; ++c)
        sol->lu[r][c] -= f * sol->lu[k][c];
    }
  }
  auto [it, _] = solvers_.emplace(key, std::move(sol));
  return *it->second;
}

FieldExpr StateSpace::reconstruct(const StateVector& s, int ghost, int weight) {
  FieldExpr result(algebra_.get());
  if (s.empty()) return result;
  const Solver& sol = solver_for(ghost, weight);
  std::size_t n = sol.states.size();
  std::vector<Coefficient> rhs(n, Coefficient::zero());
  for (const auto& [st, c] : s) {
    auto it = sol.state_index.find(st);
    if (it == sol.state_index.end())
      throw NotInSpanError("state outside the requested bidegree");
    rhs[it->second] = c;
  }
  // permute, forward substitute (unit L), back substitute
  std::vector<Coefficient> y(n, Coefficient::zero());
  for (std::size_t r = 0; r < n; ++r) y[r] = rhs[sol.perm[r]];
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < r; ++c) y[r] -= sol.lu[r][c] * y[c];
  for (std::size_t r = n; r-- > 0;) {
    for (std::size_t c = r + 1; c < n; ++c) y[r] -= sol.lu[r][c] * y[c];
    y[r] = y[r] * sol.lu[r][r].inverse();
  }
  for (std::size_t c = 0; c < n; ++c)
    if (!y[c].is_zero()) result.add_term(sol.monos[c], y[c]);
  return result;
}

StateVector StateSpace::oracle_apply(const FieldExpr& u, long n, const FieldExpr& v, long m,
                                     const BasisState& y) {
  const AlgebraSpec& a = *algebra_;
  int wy = y.weight(a), gy = y.ghost();
  flush_trim();
  StateVector out, scr1, scr2;
  for (const auto& [mu, cu] : u.terms()) {
    int gu = mu.ghost(a), wu = mu.weight(a);
    for (const auto& [mv, cv] : v.terms()) {
      int gv = mv.ghost(a), wv = mv.weight(a);
      Coefficient cuv = cu * cv;
      bool flip = ((n % 2 != 0) != ((gu % 2 != 0) && (gv % 2 != 0)));
      long imax = -1;
      long imax1 = -1, imax2 = -1;
      if (auto mw = min_weight(gy + gv)) imax1 = static_cast<long>(wy) + wv - m - 1 - *mw;
      if (auto mw = min_weight(gy + gu)) imax2 = static_cast<long>(wy) + wu - 1 - *mw;
      imax = std::max(imax1, imax2);
      if (n >= 0) imax = std::min(imax, n);
      for (long i = 0; i <= imax; ++i) {
        Rational binom = binomial(n, i);
        if (binom == 0) continue;
        if (i % 2 != 0) binom = -binom;
        Coefficient f = cuv * Coefficient(binom);
        if (i <= imax1) {
          const StateVector* inner = apply_monomial_ptr(mv, m + i, y, scr1);
          for (const auto& [s2, c2] : *inner)
            sv_accumulate(out, *apply_monomial_ptr(mu, n - i, s2, scr2), c2 * f);
        }
        if (i <= imax2) {
          const StateVector* inner = apply_monomial_ptr(mu, i, y, scr1);
          Coefficient f2 = flip ? f : -f;
          for (const auto& [s2, c2] : *inner)
            sv_accumulate(out, *apply_monomial_ptr(mv, n + m - i, s2, scr2), c2 * f2);
        }
      }
    }
  }
  return out;
}

bool StateSpace::oracle_matches(const FieldExpr& u, long n, const FieldExpr& v,
                                const FieldExpr& engine_result, int cutoff) {
  if (u.is_zero() || v.is_zero()) return engine_result.is_zero();
  int gu = u.ghost(), wu = u.weight();
  int gv = v.ghost(), wv = v.weight();
  long wprod = static_cast<long>(wu) + wv - n - 1;
  for (int gy : ghost_sectors(cutoff)) {
    auto mwy = min_weight(gy);
    auto mwres = min_weight(gy + gu + gv);
    if (!mwres) continue;
    for (int wy = *mwy; wy <= cutoff; ++wy) {
      for (const auto& y : enumerate_basis(wy, gy)) {
        // result weight wy + wprod - m - 1 must land in [min, cutoff]
        long mlo = wy + wprod - 1 - cutoff;
        long mhi = wy + wprod - 1 - *mwres;
        for (long m = mlo; m <= mhi; ++m) {
          StateVector oracle = oracle_apply(u, n, v, m, y);
          StateVector engine = apply_expr(engine_result, m, y);
          if (oracle != engine) return false;
        }
      }
    }
  }
  return true;
}

int StateSpace::pole_order_check(const FieldExpr& u, const FieldExpr& v, int cutoff) {
  if (u.is_zero() || v.is_zero()) return 0;
  int gu = u.ghost(), wu = u.weight();
  int gv = v.ghost(), wv = v.weight();
  int cap = algebra_->locality_cap(gu, wu, gv, wv);
  for (int n = cap - 1; n >= 0; --n) {
    long wprod = static_cast<long>(wu) + wv - n - 1;
    for (int gy : ghost_sectors(cutoff)) {
      auto mwy = min_weight(gy);
      auto mwres = min_weight(gy + gu + gv);
      if (!mwres) continue;
      for (int wy = *mwy; wy <= cutoff; ++wy) {
        for (const auto& y : enumerate_basis(wy, gy)) {
          long mlo = wy + wprod - 1 - cutoff;
          long mhi = wy + wprod - 1 - *mwres;
          for (long m = mlo; m <= mhi; ++m)
            if (!oracle_apply(u, n, v, m, y).empty()) return n + 1;
        }
      }
    }
  }
  return 0;
}

}  // namespace cqoa
