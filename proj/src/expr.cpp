#include "cqoa/expr.hpp"

#include <stdexcept>

#include "cqoa/algebra.hpp"

namespace cqoa {

int term_ghost(const FieldTerm& t, const AlgebraSpec& a) { return a.gen(t.generator).ghost; }

int term_weight(const FieldTerm& t, const AlgebraSpec& a) {
  return a.gen(t.generator).weight + t.derivative_order;
}

int WickMonomial::ghost(const AlgebraSpec& a) const {
  int g = 0;
  for (const auto& f : factors) g += term_ghost(f, a);
  return g;
}

int WickMonomial::weight(const AlgebraSpec& a) const {
  int w = 0;
  for (const auto& f : factors) w += term_weight(f, a);
  return w;
}

bool WickMonomial::is_canonical(const AlgebraSpec& a) const {
  for (std::size_t i = 1; i < factors.size(); ++i) {
    const auto& p = factors[i - 1];
    const auto& q = factors[i];
    if (p.generator > q.generator) return false;
    if (p.generator == q.generator) {
      bool fermionic = a.gen(p.generator).ghost % 2 != 0;
      if (fermionic ? p.derivative_order <= q.derivative_order
                    : p.derivative_order < q.derivative_order)
        return false;
    }
  }
  return true;
}

FieldExpr FieldExpr::identity(const AlgebraSpec* a) {
  FieldExpr e(a);
  e.add_term(WickMonomial{}, Coefficient::one());
  return e;
}

FieldExpr FieldExpr::monomial(const AlgebraSpec* a, WickMonomial m, Coefficient c) {
  FieldExpr e(a);
  e.add_term(m, c);
  return e;
}

FieldExpr FieldExpr::generator(const AlgebraSpec* a, int index, int derivative_order) {
  return monomial(a, WickMonomial{{FieldTerm{index, derivative_order}}});
}

void FieldExpr::add_term(const WickMonomial& m, const Coefficient& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void FieldExpr::check_same_algebra(const FieldExpr& o) const {
  if (algebra_ && o.algebra_ && algebra_ != o.algebra_)
    throw AlgebraMismatchError("operands belong to different algebras");
}

FieldExpr FieldExpr::operator+(const FieldExpr& o) const {
  check_same_algebra(o);
  FieldExpr r = *this;
  if (!r.algebra_) r.algebra_ = o.algebra_;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

FieldExpr& FieldExpr::operator+=(const FieldExpr& o) {
  check_same_algebra(o);
  if (!algebra_) algebra_ = o.algebra_;
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

FieldExpr FieldExpr::operator-(const FieldExpr& o) const { return *this + (-o); }

FieldExpr FieldExpr::operator-() const { return scaled(Coefficient(-1L)); }

FieldExpr FieldExpr::scaled(const Coefficient& c) const {
  FieldExpr r(algebra_);
  if (c.is_zero()) return r;
  for (const auto& [m, coef] : terms_) r.terms_.emplace(m, coef * c);
  return r;
}

FieldExpr operator*(const Coefficient& c, const FieldExpr& e) { return e.scaled(c); }

std::vector<std::tuple<int, int, FieldExpr>> FieldExpr::grading() const {
  std::map<std::pair<int, int>, FieldExpr> parts;
  for (const auto& [m, c] : terms_) {
    auto key = std::make_pair(m.ghost(*algebra_), m.weight(*algebra_));
    auto [it, inserted] = parts.emplace(key, FieldExpr(algebra_));
    it->second.add_term(m, c);
  }
  std::vector<std::tuple<int, int, FieldExpr>> out;
  for (auto& [k, e] : parts) out.emplace_back(k.first, k.second, std::move(e));
  return out;
}

bool FieldExpr::is_homogeneous() const { return grading().size() <= 1; }

int FieldExpr::ghost() const {
  if (is_zero()) throw std::logic_error("grading of the zero expression");
  auto g = grading();
  if (g.size() != 1) throw std::logic_error("expression is not homogeneous");
  return std::get<0>(g.front());
}

int FieldExpr::weight() const {
  if (is_zero()) throw std::logic_error("grading of the zero expression");
  auto g = grading();
  if (g.size() != 1) throw std::logic_error("expression is not homogeneous");
  return std::get<1>(g.front());
}

FieldExpr FieldExpr::raw_derivative() const {
  FieldExpr r(algebra_);
  for (const auto& [m, c] : terms_) {
    for (std::size_t i = 0; i < m.factors.size(); ++i) {
      WickMonomial d = m;
      d.factors[i].derivative_order += 1;
      r.add_term(d, c);
    }
  }
  return r;
}

FieldExpr FieldExpr::raw_derivative(int k) const {
  FieldExpr r = *this;
  for (int i = 0; i < k; ++i) r = r.raw_derivative();
  return r;
}

}  // namespace cqoa
