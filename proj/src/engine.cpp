#include "cqoa/engine.hpp"

#include <algorithm>
#include <sstream>

namespace cqoa {

namespace {

Coefficient parity_sign(int g1, int g2) {
  return Coefficient((g1 % 2 != 0) && (g2 % 2 != 0) ? -1L : 1L);
}

WickMonomial suffix(const WickMonomial& m) {
  return WickMonomial{std::vector<FieldTerm>(m.factors.begin() + 1, m.factors.end())};
}

std::string describe(const WickMonomial& m, const AlgebraSpec& a) {
  if (m.is_identity()) return "1";
  std::ostringstream os;
  os << ":";
  for (std::size_t i = 0; i < m.factors.size(); ++i) {
    if (i) os << " ";
    const auto& f = m.factors[i];
    if (f.derivative_order > 0) os << "d" << f.derivative_order << "(" << a.gen(f.generator).name << ")";
    else os << a.gen(f.generator).name;
  }
  os << ":";
  return os.str();
}

}  // namespace

Engine::Engine(AlgebraPtr algebra) : algebra_(std::move(algebra)), space_(algebra_) {}

void Engine::require_commutative() const {
  if (!algebra_->commutative)
    throw PreconditionError("engine products require a commutative algebra");
}

int Engine::intern(const WickMonomial& m) {
  auto [it, inserted] = mono_ids_.emplace(m, static_cast<int>(mono_ids_.size()));
  return it->second;
}

int Engine::locality_cap(const WickMonomial& u, const WickMonomial& v) const {
  const AlgebraSpec& a = *algebra_;
  return a.locality_cap(u.ghost(a), u.weight(a), v.ghost(a), v.weight(a));
}

FieldExpr Engine::nf_mono(const WickMonomial& m) {
  if (m.is_canonical(*algebra_)) return FieldExpr::monomial(algebra_.get(), m);
  int id = intern(m);
  if (auto it = nf_cache_.find(id); it != nf_cache_.end()) return it->second;
  StateVector sv = space_.state_of(FieldExpr::monomial(algebra_.get(), m));
  FieldExpr result(algebra_.get());
  if (!sv.empty())
    result = space_.reconstruct(sv, m.ghost(*algebra_), m.weight(*algebra_));
  nf_cache_.emplace(id, result);
  return result;
}

FieldExpr Engine::normal_form(const FieldExpr& e) {
  FieldExpr out(algebra_.get());
  for (const auto& [m, c] : e.terms()) out += nf_mono(m).scaled(c);
  return out;
}

FieldExpr Engine::derivative(const FieldExpr& e) { return normal_form(e.raw_derivative()); }

FieldExpr Engine::derivative(const FieldExpr& e, int k) {
  return normal_form(e.raw_derivative(k));
}

FieldExpr Engine::wick(const FieldExpr& u, const FieldExpr& v) {
  require_commutative();
  FieldExpr out(algebra_.get());
  for (const auto& [mu, cu] : u.terms())
    for (const auto& [mv, cv] : v.terms()) out += wick_mono(mu, mv).scaled(cu * cv);
  return out;
}

FieldExpr Engine::wick_mono(const WickMonomial& mu, const WickMonomial& mv) {
  if (mu.is_identity()) return nf_mono(mv);
  if (mv.is_identity()) return nf_mono(mu);
  if (mu.size() == 1) {
    WickMonomial concat = mu;
    concat.factors.insert(concat.factors.end(), mv.factors.begin(), mv.factors.end());
    return nf_mono(concat);
  }
  Key key{intern(mu), -1, intern(mv)};
  if (const FieldExpr* hit = wick_cache_.find(key)) return *hit;

  const AlgebraSpec& a = *algebra_;
  WickMonomial t{{mu.factors.front()}};
  WickMonomial rest = suffix(mu);
  FieldExpr t_e = FieldExpr::monomial(algebra_.get(), t);
  FieldExpr rest_e = FieldExpr::monomial(algebra_.get(), rest);
  Coefficient eps = parity_sign(t.ghost(a), rest.ghost(a));

  // :(:t rest:) v: = :t (:rest v:): + Taylor corrections from the mutual
  // singular parts (quasi-associativity).
  FieldExpr out = wick(t_e, wick_mono(rest, mv));
  int cap = std::max(locality_cap(rest, mv), locality_cap(t, mv));
  for (int n = 0; n < cap; ++n) {
    Coefficient inv{Rational(1) / factorial(n + 1)};
    FieldExpr pa = circle_mono(rest, n, mv);
    if (!pa.is_zero()) out += wick(t_e.raw_derivative(n + 1), pa).scaled(inv);
    FieldExpr pb = circle_mono(t, n, mv);
    if (!pb.is_zero()) out += wick(rest_e.raw_derivative(n + 1), pb).scaled(inv * eps);
  }
  out = normal_form(out);
  wick_cache_.insert(key, out);
  return out;
}

FieldExpr Engine::circle(const FieldExpr& u, long n, const FieldExpr& v) {
  require_commutative();
  FieldExpr out(algebra_.get());
  for (const auto& [mu, cu] : u.terms())
    for (const auto& [mv, cv] : v.terms()) out += circle_mono(mu, n, mv).scaled(cu * cv);
  return out;
}

FieldExpr Engine::circle_mono(const WickMonomial& mu, long n, const WickMonomial& mv) {
  const AlgebraSpec& a = *algebra_;
  FieldExpr zero(algebra_.get());
  if (n <= -1) {
    if (n == -1) return wick_mono(mu, mv);
    long k = -n - 1;
    FieldExpr du = FieldExpr::monomial(algebra_.get(), mu).raw_derivative(static_cast<int>(k));
    return wick(du, FieldExpr::monomial(algebra_.get(), mv))
        .scaled(Coefficient(Rational(1) / factorial(k)));
  }
  // n >= 0
  if (mu.is_identity() || mv.is_identity()) return zero;
  if (n >= locality_cap(mu, mv)) return zero;

  Key key{intern(mu), n, intern(mv)};
  if (const FieldExpr* hit = circle_cache_.find(key)) return *hit;

  FieldExpr out(algebra_.get());
  if (mu.size() == 1 && mv.size() == 1) {
    FieldTerm fu = mu.factors.front();
    FieldTerm fv = mv.factors.front();
    if (fu.derivative_order > 0) {
      // (d u) circle_n v = -n * (u circle_{n-1} v)
      if (n > 0) {
        FieldTerm fu2 = fu;
        fu2.derivative_order -= 1;
        out = circle_mono(WickMonomial{{fu2}}, n - 1, mv).scaled(Coefficient(-n));
      }
    } else if (fv.derivative_order > 0) {
      // u circle_n (d v) = d(u circle_n v) + n * (u circle_{n-1} v)
      FieldTerm fv2 = fv;
      fv2.derivative_order -= 1;
      WickMonomial mv2{{fv2}};
      out = derivative(circle_mono(mu, n, mv2));
      if (n > 0) out += circle_mono(mu, n - 1, mv2).scaled(Coefficient(n));
    } else {
      out = normal_form(a.table_product(fu.generator, fv.generator, static_cast<int>(n)));
    }
  } else if (mu.size() >= 2) {
    // (:t rest:) circle_k v
    WickMonomial t{{mu.factors.front()}};
    WickMonomial rest = suffix(mu);
    FieldExpr t_e = FieldExpr::monomial(algebra_.get(), t);
    FieldExpr rest_e = FieldExpr::monomial(algebra_.get(), rest);
    Coefficient eps = parity_sign(t.ghost(a), rest.ghost(a));
    int cap = std::max(locality_cap(rest, mv), locality_cap(t, mv));
    for (long i = 0; n + i < cap; ++i) {
      Coefficient inv{Rational(1) / factorial(i)};
      FieldExpr pa = circle_mono(rest, n + i, mv);
      if (!pa.is_zero()) out += wick(t_e.raw_derivative(static_cast<int>(i)), pa).scaled(inv);
      FieldExpr pb = circle_mono(t, n + i, mv);
      if (!pb.is_zero())
        out += wick(rest_e.raw_derivative(static_cast<int>(i)), pb).scaled(inv * eps);
    }
    for (long p = 0; p < n; ++p) {
      FieldExpr inner = circle_mono(t, n - 1 - p, mv);
      if (!inner.is_zero()) out += circle(rest_e, p, inner).scaled(eps);
    }
  } else {
    // t circle_k (:u1 rest:), t a single term
    WickMonomial u1{{mv.factors.front()}};
    WickMonomial rest = suffix(mv);
    FieldExpr u1_e = FieldExpr::monomial(algebra_.get(), u1);
    FieldExpr rest_e = FieldExpr::monomial(algebra_.get(), rest);
    Coefficient eps = parity_sign(mu.ghost(a), u1.ghost(a));
    FieldExpr acc = wick(u1_e, circle_mono(mu, n, rest));
    for (long p = 0; p < n; ++p) {
      FieldExpr inner = circle_mono(u1, p, mu);
      if (inner.is_zero()) continue;
      Coefficient sgn(p % 2 == 0 ? -1L : 1L);  // (-1)^{p+1}
      acc += circle(inner, n - 1 - p, rest_e).scaled(sgn);
    }
    int cap = locality_cap(u1, mu);
    for (long p = n; p < cap; ++p) {
      FieldExpr inner = circle_mono(u1, p, mu);
      if (inner.is_zero()) continue;
      Coefficient f{Rational(p % 2 == 0 ? -1 : 1) / factorial(p - n)};
      acc += wick(inner.raw_derivative(static_cast<int>(p - n)), rest_e).scaled(f);
    }
    out = acc.scaled(eps);
  }
  out = normal_form(out);
  circle_cache_.insert(key, out);
  return out;
}

OPEResult Engine::ope(const FieldExpr& u, const FieldExpr& v) {
  require_commutative();
  OPEResult r;
  int cap = 0;
  for (const auto& [mu, cu] : u.terms())
    for (const auto& [mv, cv] : v.terms()) cap = std::max(cap, locality_cap(mu, mv));
  for (int n = 0; n < cap; ++n) {
    FieldExpr p = circle(u, n, v);
    if (!p.is_zero()) {
      r.singular.emplace(n, std::move(p));
      r.locality_order = n + 1;
    }
  }
  return r;
}

int Engine::is_local(const FieldExpr& u, const FieldExpr& v) {
  return ope(u, v).locality_order;
}

std::vector<std::pair<FieldExpr, long>> Engine::mode_commutator(const FieldExpr& u, long m,
                                                                const FieldExpr& v) {
  require_commutative();
  std::vector<std::pair<FieldExpr, long>> out;
  for (const auto& [n, p] : ope(u, v).singular) {
    Rational c = binomial(m, n);
    if (c == 0) continue;
    out.emplace_back(p.scaled(Coefficient(c)), m - n);
  }
  return out;
}

bool Engine::verify_commutativity(const FieldExpr& u, const FieldExpr& v, long n_floor) {
  require_commutative();
  if (u.is_zero() || v.is_zero()) return true;
  Coefficient eps = parity_sign(u.ghost(), v.ghost());
  int cap = 0;
  for (const auto& [mu, cu] : u.terms())
    for (const auto& [mv, cv] : v.terms()) cap = std::max(cap, locality_cap(mv, mu));
  for (long n = n_floor; n < cap; ++n) {
    FieldExpr lhs = circle(u, n, v);
    FieldExpr rhs(algebra_.get());
    for (long p = n; p < cap; ++p) {
      FieldExpr x = circle(v, p, u);
      if (x.is_zero()) continue;
      Rational f = Rational(p % 2 == 0 ? -1 : 1) / factorial(p - n);
      rhs += normal_form(x.raw_derivative(static_cast<int>(p - n))).scaled(Coefficient(f));
    }
    if (lhs != rhs.scaled(eps)) return false;
  }
  return true;
}

std::vector<WickMonomial> Engine::monomials_up_to(int max_weight) {
  std::vector<WickMonomial> out;
  for (int g : space_.ghost_sectors(max_weight)) {
    int lo = *algebra_->min_weight(g);
    for (int w = lo; w <= max_weight; ++w)
      for (auto& m : space_.canonical_monomials(g, w)) out.push_back(std::move(m));
  }
  return out;
}

Engine::AxiomReport Engine::check_semi_infinite_axioms(int max_weight, long n_floor) {
  AxiomReport rep;
  FieldExpr one = FieldExpr::identity(algebra_.get());
  auto monos = monomials_up_to(max_weight);
  for (const auto& m : monos) {
    FieldExpr u = FieldExpr::monomial(algebra_.get(), m);
    // axiom (i): u circle_n 1 = delta_{n,-1} u for n >= -1
    bool ok = circle(u, -1, one) == u && circle(u, 0, one).is_zero() &&
              circle(u, 1, one).is_zero() && circle(one, -1, u) == u &&
              circle(one, 0, u).is_zero();
    if (!ok) {
      rep.passed = false;
      rep.first_failure = "unit axiom failed for " + describe(m, *algebra_);
      return rep;
    }
  }
  for (const auto& mu : monos) {
    FieldExpr u = FieldExpr::monomial(algebra_.get(), mu);
    for (const auto& mv : monos) {
      FieldExpr v = FieldExpr::monomial(algebra_.get(), mv);
      ++rep.pairs_checked;
      if (!verify_commutativity(u, v, n_floor)) {
        rep.passed = false;
        rep.first_failure = "skew-symmetry axiom failed for (" + describe(mu, *algebra_) +
                            ", " + describe(mv, *algebra_) + ")";
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace cqoa
