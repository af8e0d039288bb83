#include "cqoa/coefficient.hpp"

#include <sstream>
#include <stdexcept>

namespace cqoa {

namespace {

Int to_cpp_int(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  Int r = static_cast<std::uint64_t>(u >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(u);
  return neg ? Int(-r) : r;
}

}  // namespace

BigRational Rational::big_value() const {
  if (big_) return *big_;
  return BigRational(num_, den_);
}

Rational Rational::from_big(BigRational b) {
  Rational r;
  const Int& n = boost::multiprecision::numerator(b);
  const Int& d = boost::multiprecision::denominator(b);
  if (n >= INT64_MIN && n <= INT64_MAX && d <= INT64_MAX) {
    r.num_ = n.convert_to<std::int64_t>();
    r.den_ = d.convert_to<std::int64_t>();
    return r;
  }
  r.num_ = 0;
  r.den_ = 0;
  r.big_ = std::make_shared<const BigRational>(std::move(b));
  return r;
}

Rational Rational::from_parts_big(i128 n, i128 d) {
  return from_big(BigRational(to_cpp_int(n), to_cpp_int(d)));
}

Rational::Rational(const Int& n) {
  if (n >= INT64_MIN && n <= INT64_MAX) {
    num_ = n.convert_to<std::int64_t>();
  } else {
    den_ = 0;
    big_ = std::make_shared<const BigRational>(n);
  }
}

Rational::Rational(const Int& n, const Int& d) { *this = from_big(BigRational(n, d)); }

Rational Rational::operator/(const Rational& o) const {
  if (is_small() && o.is_small()) {
    if (o.num_ == 0) throw std::domain_error("rational division by zero");
    return from_parts(i128(num_) * o.den_, i128(den_) * o.num_);
  }
  return from_big(big_value() / o.big_value());
}

Rational Rational::add_slow(const Rational& o) const { return from_big(big_value() + o.big_value()); }
Rational Rational::sub_slow(const Rational& o) const { return from_big(big_value() - o.big_value()); }
Rational Rational::mul_slow(const Rational& o) const { return from_big(big_value() * o.big_value()); }
Rational Rational::neg_slow() const { return from_big(-big_value()); }
bool Rational::eq_slow(const Rational& o) const { return big_value() == o.big_value(); }
bool Rational::lt_slow(const Rational& o) const { return big_value() < o.big_value(); }

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  if (!r.is_small()) return os << *r.big_;
  if (r.den_ == 1) return os << r.num_;
  return os << r.num_ << "/" << r.den_;
}

Poly::Poly(Rational constant) {
  if (constant != 0) coeffs_.push_back(std::move(constant));
}

Poly Poly::kappa() {
  Poly p;
  p.coeffs_ = {Rational(0), Rational(1)};
  return p;
}

const Rational& Poly::coeff(std::size_t i) const {
  static const Rational zero(0);
  return i < coeffs_.size() ? coeffs_[i] : zero;
}

void Poly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Poly Poly::operator+(const Poly& o) const {
  Poly r;
  r.coeffs_.resize(std::max(coeffs_.size(), o.coeffs_.size()));
  for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] = coeff(i) + o.coeff(i);
  r.trim();
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  if (is_zero() || o.is_zero()) return r;
  r.coeffs_.assign(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
      r.coeffs_[i + j] += coeffs_[i] * o.coeffs_[j];
  r.trim();
  return r;
}

Poly Poly::scaled(const Rational& s) const {
  if (s == 0) return Poly();
  Poly r = *this;
  for (auto& c : r.coeffs_) c *= s;
  return r;
}

Rational Poly::evaluate(const Rational& kappa_value) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * kappa_value + *it;
  return acc;
}

Rational Poly::leading() const {
  if (is_zero()) throw std::logic_error("leading coefficient of zero polynomial");
  return coeffs_.back();
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scaled(Rational(1) / leading());
}

void Poly::divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
  if (b.is_zero()) throw std::logic_error("polynomial division by zero");
  q = Poly();
  r = a;
  while (!r.is_zero() && r.degree() >= b.degree()) {
    int shift = r.degree() - b.degree();
    Rational factor = r.leading() / b.leading();
    Poly t;
    t.coeffs_.assign(shift + 1, Rational(0));
    t.coeffs_[shift] = factor;
    q = q + t;
    r = r - t * b;
  }
}

Poly Poly::gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a.monic();
}

Coefficient::Coefficient(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::logic_error("coefficient with zero denominator");
  normalize();
}

Coefficient Coefficient::kappa() {
  Coefficient c;
  c.num_ = Poly::kappa();
  c.den_ = Poly(Rational(1));
  return c;
}

void Coefficient::normalize() {
  if (num_.is_zero()) {
    den_ = Poly(Rational(1));
    return;
  }
  if (den_.is_constant()) {
    Rational lead = den_.coeff(0);
    if (lead != 1) {
      num_ = num_.scaled(Rational(1) / lead);
      den_ = Poly(Rational(1));
    }
    return;
  }
  Poly g = Poly::gcd(num_, den_);
  if (g.degree() > 0) {
    Poly q, r;
    Poly::divmod(num_, g, q, r);
    num_ = q;
    Poly::divmod(den_, g, q, r);
    den_ = q;
  }
  // make the denominator monic
  Rational lead = den_.leading();
  if (lead != 1) {
    den_ = den_.scaled(Rational(1) / lead);
    num_ = num_.scaled(Rational(1) / lead);
  }
}

Rational Coefficient::rational_value() const {
  if (!is_rational()) throw std::logic_error("coefficient is not a plain rational");
  if (num_.is_zero()) return Rational(0);
  return num_.coeff(0) / den_.coeff(0);
}

Coefficient Coefficient::operator+(const Coefficient& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  if (is_polynomial() && o.is_polynomial()) {
    // both denominators are exactly 1 after normalization
    Coefficient r;
    r.num_ = num_ + o.num_;
    return r;
  }
  return Coefficient(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Coefficient Coefficient::operator-(const Coefficient& o) const {
  if (o.is_zero()) return *this;
  if (is_polynomial() && o.is_polynomial()) {
    Coefficient r;
    r.num_ = num_ - o.num_;
    return r;
  }
  return *this + (-o);
}

Coefficient Coefficient::operator-() const {
  Coefficient r = *this;
  r.num_ = -r.num_;
  return r;
}

Coefficient Coefficient::operator*(const Coefficient& o) const {
  if (is_zero() || o.is_zero()) return Coefficient();
  if (is_polynomial() && o.is_polynomial()) {
    Coefficient r;
    r.num_ = num_ * o.num_;
    return r;
  }
  return Coefficient(num_ * o.num_, den_ * o.den_);
}

Coefficient Coefficient::operator/(const Coefficient& o) const { return *this * o.inverse(); }

Coefficient Coefficient::inverse() const {
  if (is_zero()) throw std::logic_error("division by zero coefficient");
  return Coefficient(den_, num_);
}

Rational Coefficient::evaluate(const Rational& kappa_value) const {
  Rational d = den_.evaluate(kappa_value);
  if (d == 0) throw std::logic_error("coefficient denominator vanishes at this kappa");
  return num_.evaluate(kappa_value) / d;
}

namespace {

std::string rational_str(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

std::string poly_str(const Poly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = p.degree(); i >= 0; --i) {
    Rational c = p.coeff(i);
    if (c == 0) continue;
    if (!first) {
      os << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    } else if (c < 0 && i > 0) {
      os << "-";
      c = -c;
    }
    first = false;
    if (i == 0) {
      os << rational_str(c);
    } else {
      if (c != 1) os << rational_str(c) << "*";
      os << "kappa";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

}  // namespace

std::string Coefficient::to_string() const {
  if (is_zero()) return "0";
  if (is_rational()) return rational_str(rational_value());
  if (is_polynomial()) {
    Rational d = den_.coeff(0);
    Poly scaled = num_.scaled(Rational(1) / d);
    return "(" + poly_str(scaled) + ")";
  }
  return "((" + poly_str(num_) + ")/(" + poly_str(den_) + "))";
}

Coefficient operator*(const Rational& r, const Coefficient& c) {
  return Coefficient(r) * c;
}

Rational binomial(long n, long k) {
  if (k < 0) return Rational(0);
  Rational acc(1);
  for (long i = 0; i < k; ++i) acc *= Rational(n - i, i + 1);
  return acc;
}

Rational factorial(long n) {
  Rational acc(1);
  for (long i = 2; i <= n; ++i) acc *= i;
  return acc;
}

}  // namespace cqoa
