#include "cqoa/brst.hpp"

#include <algorithm>

namespace cqoa {

namespace {

using Vec = std::vector<Coefficient>;
using Mat = std::vector<Vec>;

Vec to_vec(const FieldExpr& e, const std::map<WickMonomial, int>& index, std::size_t n) {
  Vec v(n, Coefficient::zero());
  for (const auto& [m, c] : e.terms()) {
    auto it = index.find(m);
    if (it == index.end()) throw std::logic_error("expression leaves the expected bidegree");
    v[it->second] = c;
  }
  return v;
}

/// In-place reduced row echelon form; returns pivot column per row.
std::vector<int> rref(Mat& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  std::size_t cols = m.front().size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][col].is_zero()) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[sel], m[row]);
    Coefficient inv = m[row][col].inverse();
    for (std::size_t c = col; c < cols; ++c) m[row][c] *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col].is_zero()) continue;
      Coefficient f = m[r][col];
      for (std::size_t c = col; c < cols; ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(static_cast<int>(col));
    ++row;
  }
  m.resize(row, Vec{});
  return pivots;
}

}  // namespace

BrstContext::BrstContext(BrstAlgebra alg)
    : alg_(std::move(alg)), engine_(std::make_shared<Engine>(alg_.algebra)) {
  const AlgebraSpec* a = alg_.algebra.get();
  int bg = a->generator_index("b");
  int cg = a->generator_index("c");
  int lg = a->generator_index("L");
  FieldExpr cl = FieldExpr::monomial(a, WickMonomial{{{cg, 0}, {lg, 0}}});
  FieldExpr bcdc = FieldExpr::monomial(a, WickMonomial{{{bg, 0}, {cg, 0}, {cg, 1}}});
  j_ = engine_->normal_form(cl) + engine_->normal_form(bcdc);
  l_total_ = engine_->normal_form(alg_.total.stress_tensor);

  FieldExpr bc = FieldExpr::monomial(a, WickMonomial{{{bg, 0}, {cg, 0}}});
  ghost_current_ = -engine_->normal_form(bc);

  // J(z)b(w): the first-order pole is L^C, the second-order pole is the
  // ghost number current, and the OPE terminates there.
  OPEResult cartan = engine_->ope(j_, b());
  bool ok = cartan.locality_order == 2 && cartan.singular.size() == 2 &&
            cartan.singular.count(0) == 1 && cartan.singular.at(0) == l_total_ &&
            cartan.singular.count(1) == 1 && cartan.singular.at(1) == ghost_current_;
  if (!ok) throw std::logic_error("defining poles of the current with b failed");
}

BrstContext BrstContext::make(Coefficient kappa) {
  return BrstContext(brst_algebra(std::move(kappa)));
}

BrstContext BrstContext::make_formal() { return BrstContext(brst_algebra_formal()); }

bool BrstContext::kappa_is_26() const {
  return !kappa_formal() && alg_.algebra->kappa == Coefficient(26L);
}

void BrstContext::require_critical(const char* what) const {
  if (!kappa_is_26())
    throw PreconditionError(std::string(what) + " requires kappa fixed to 26");
}

FieldExpr BrstContext::b() const {
  return FieldExpr::generator(alg_.algebra.get(), alg_.algebra->generator_index("b"));
}
FieldExpr BrstContext::c() const {
  return FieldExpr::generator(alg_.algebra.get(), alg_.algebra->generator_index("c"));
}
FieldExpr BrstContext::matter_l() const {
  return FieldExpr::generator(alg_.algebra.get(), alg_.algebra->generator_index("L"));
}

FieldExpr BrstContext::brst_d(const FieldExpr& u) const { return engine_->circle(j_, 0, u); }

FieldExpr BrstContext::j_square() const { return engine_->circle(j_, 0, j_); }

std::vector<FieldExpr> BrstContext::j_square_diagnostics() const {
  const AlgebraSpec* a = alg_.algebra.get();
  int bg = a->generator_index("b");
  int cg = a->generator_index("c");
  int lg = a->generator_index("L");
  FieldExpr A = engine_->normal_form(FieldExpr::monomial(a, WickMonomial{{{cg, 0}, {lg, 0}}}));
  FieldExpr B = engine_->normal_form(
      FieldExpr::monomial(a, WickMonomial{{{bg, 0}, {cg, 0}, {cg, 1}}}));
  return {engine_->circle(A, 0, A), engine_->circle(A, 0, B), engine_->circle(B, 0, A),
          engine_->circle(B, 0, B)};
}

FieldExpr BrstContext::reduce_mod_derivative(const FieldExpr& e) const {
  FieldExpr en = engine_->normal_form(e);
  if (en.is_zero()) return en;
  if (!en.is_homogeneous())
    throw PreconditionError("reduce_mod_derivative needs a homogeneous input");
  int g = en.ghost(), w = en.weight();
  StateSpace& sp = engine_->space();
  auto basis = sp.canonical_monomials(g, w);
  std::map<WickMonomial, int> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], static_cast<int>(i));

  Mat image;
  for (const auto& m : sp.canonical_monomials(g, w - 1)) {
    FieldExpr d = engine_->derivative(FieldExpr::monomial(alg_.algebra.get(), m));
    if (!d.is_zero()) image.push_back(to_vec(d, index, basis.size()));
  }
  std::vector<int> pivots = rref(image);
  Vec v = to_vec(en, index, basis.size());
  for (std::size_t r = 0; r < image.size(); ++r) {
    const Coefficient& f = v[pivots[r]];
    if (f.is_zero()) continue;
    Coefficient fc = f;
    for (std::size_t c = 0; c < v.size(); ++c) v[c] -= fc * image[r][c];
  }
  FieldExpr out(alg_.algebra.get());
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) out.add_term(basis[i], v[i]);
  return out;
}

BrstContext::NilpotencyReport BrstContext::nilpotency_report() const {
  NilpotencyReport rep;
  Engine& e = *engine_;
  const AlgebraSpec* a = alg_.algebra.get();
  int cg = a->generator_index("c");
  FieldExpr c0 = FieldExpr::generator(a, cg);
  FieldExpr d2c = FieldExpr::generator(a, cg, 2);
  FieldExpr d3c = FieldExpr::generator(a, cg, 3);
  Coefficient coeff = (a->central_kappa() - Coefficient(26L)) * Coefficient(1L, 12L);

  rep.j_square = j_square();
  rep.closed_form = e.derivative(e.wick(d2c, c0)).scaled(Coefficient(3L, 2L)) +
                    e.wick(d3c, c0).scaled(coeff);
  rep.closed_form = e.normal_form(rep.closed_form);
  rep.contributions = j_square_diagnostics();
  rep.matches_closed_form = rep.j_square == rep.closed_form;
  rep.reduced = reduce_mod_derivative(rep.j_square);
  rep.obstruction_class = reduce_mod_derivative(e.wick(d3c, c0));
  rep.reduction_matches = !rep.obstruction_class.is_zero() &&
                          rep.reduced == rep.obstruction_class.scaled(coeff);
  return rep;
}

BrstContext::ClosedBasis BrstContext::q_closed_basis(int weight, int ghost) const {
  require_critical("q_closed_basis");
  StateSpace& sp = engine_->space();
  const AlgebraSpec* a = alg_.algebra.get();

  auto matrix_of_d = [&](int g) -> std::pair<Mat, std::size_t> {
    auto domain = sp.canonical_monomials(g, weight);
    auto target = sp.canonical_monomials(g + 1, weight);
    std::map<WickMonomial, int> index;
    for (std::size_t i = 0; i < target.size(); ++i) index.emplace(target[i], static_cast<int>(i));
    // rows = domain elements as vectors in the target space
    Mat m;
    for (const auto& mono : domain)
      m.push_back(to_vec(brst_d(FieldExpr::monomial(a, mono)), index, target.size()));
    return {std::move(m), domain.size()};
  };

  ClosedBasis out;
  auto domain = sp.canonical_monomials(ghost, weight);
  auto [m, ncols_domain] = matrix_of_d(ghost);
  // Transpose so columns index the domain, then read the kernel off the RREF.
  std::size_t rows = m.empty() ? 0 : m.front().size();
  Mat mt(rows, Vec(domain.size(), Coefficient::zero()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) mt[j][i] = m[i][j];
  std::vector<int> pivots = rref(mt);
  std::vector<bool> is_pivot(domain.size(), false);
  for (int p : pivots) is_pivot[p] = true;
  for (std::size_t j = 0; j < domain.size(); ++j) {
    if (is_pivot[j]) continue;
    FieldExpr k(a);
    k.add_term(domain[j], Coefficient::one());
    for (std::size_t r = 0; r < pivots.size(); ++r)
      if (!mt[r][j].is_zero()) k.add_term(domain[pivots[r]], -mt[r][j]);
    out.kernel.push_back(std::move(k));
  }
  out.kernel_dim = out.kernel.size();

  auto [m_prev, nprev] = matrix_of_d(ghost - 1);
  Mat prev = std::move(m_prev);
  out.image_dim = rref(prev).size();
  (void)nprev;
  (void)ncols_domain;
  return out;
}

FieldExpr BrstContext::commutativity_homotopy(const FieldExpr& u, const FieldExpr& v) const {
  require_critical("commutativity_homotopy");
  if (!brst_d(u).is_zero() || !brst_d(v).is_zero())
    throw PreconditionError("commutativity_homotopy needs closed inputs");
  Engine& e = *engine_;
  FieldExpr A(alg_.algebra.get());
  int cap = 0;
  for (const auto& [mv, cv] : v.terms())
    for (const auto& [mu, cu] : u.terms()) cap = std::max(cap, e.locality_cap(mv, mu));
  for (int m = 0; m < cap; ++m) {
    FieldExpr p = e.circle(v, m, u);
    if (p.is_zero()) continue;
    A += e.derivative(p, m).scaled(Coefficient(Rational(m % 2 == 0 ? 1 : -1) / factorial(m + 1)));
  }
  FieldExpr h = e.circle(b(), 0, A);
  if (!brst_d(A).is_zero())
    throw VerificationError("homotopy contract: the correction sum is not closed");
  Coefficient eps(1L);
  if (!u.is_zero() && !v.is_zero()) eps = Coefficient((u.ghost() % 2 != 0) && (v.ghost() % 2 != 0) ? -1L : 1L);
  FieldExpr defect = e.wick(v, u) - e.wick(u, v).scaled(eps);
  if (defect != brst_d(h))
    throw VerificationError("homotopy contract: defect is not the boundary of h");
  return h;
}

FieldExpr BrstContext::weight_homotopy(const FieldExpr& u) const {
  require_critical("weight_homotopy");
  if (!brst_d(u).is_zero()) throw PreconditionError("weight_homotopy needs a closed input");
  FieldExpr h = engine_->circle(b(), 1, u);
  FieldExpr expect(alg_.algebra.get());
  if (!u.is_zero()) {
    if (!u.is_homogeneous())
      throw PreconditionError("weight_homotopy needs a homogeneous input");
    expect = u.scaled(Coefficient(static_cast<long>(u.weight())));
  }
  if (brst_d(h) != expect)
    throw VerificationError("weight homotopy contract failed");
  return h;
}

FieldExpr BrstContext::bv_delta(const FieldExpr& u) const {
  return engine_->circle(b(), 1, u);
}

FieldExpr BrstContext::bv_bracket(const FieldExpr& u, const FieldExpr& v) const {
  Engine& e = *engine_;
  FieldExpr out(alg_.algebra.get());
  for (const auto& [g, w, ui] : u.grading()) {
    (void)w;
    Coefficient sgn(g % 2 == 0 ? 1L : -1L);  // (-1)^{|u|}
    FieldExpr inner = bv_delta(e.wick(ui, v)) - e.wick(bv_delta(ui), v) -
                      e.wick(ui, bv_delta(v)).scaled(sgn);
    out += inner.scaled(sgn);
  }
  return out;
}

bool BrstContext::second_order_identity_check(const FieldExpr& A, const FieldExpr& B,
                                              const FieldExpr& C) const {
  Engine& e = *engine_;
  FieldExpr lhs(alg_.algebra.get());
  FieldExpr rhs(alg_.algebra.get());
  for (const auto& [ga, wa, Ai] : A.grading()) {
    (void)wa;
    for (const auto& [gb, wb, Bj] : B.grading()) {
      (void)wb;
      Coefficient eps((ga % 2 != 0) && (gb % 2 != 0) ? -1L : 1L);
      lhs += e.circle(Ai, 1, e.wick(Bj, C)) - e.wick(e.circle(Ai, 1, Bj), C) -
             e.wick(Bj, e.circle(Ai, 1, C)).scaled(eps);
      rhs += e.circle(e.circle(Ai, 0, Bj), 0, C);
    }
  }
  return lhs == rhs;
}

}  // namespace cqoa
