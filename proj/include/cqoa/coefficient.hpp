#pragma once

#include <boost/container/small_vector.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <concepts>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cqoa {

using Int = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Exact rational number.  Values that fit in 64 bits are kept inline with
/// 128-bit intermediates; anything larger transparently promotes to an
/// arbitrary-precision representation, so arithmetic is always exact.
class Rational {
 public:
  Rational() = default;
  template <std::integral T>
  Rational(T n) : num_(static_cast<std::int64_t>(n)) {}  // NOLINT: implicit by design
  template <std::integral T, std::integral U>
  Rational(T n, U d) {
    *this = from_parts(static_cast<i128>(n), static_cast<i128>(d));
  }
  Rational(const Int& n);
  Rational(const Int& n, const Int& d);

  Rational operator+(const Rational& o) const {
    if (is_small() && o.is_small())
      return from_parts(i128(num_) * o.den_ + i128(o.num_) * den_, i128(den_) * o.den_);
    return add_slow(o);
  }
  Rational operator-(const Rational& o) const {
    if (is_small() && o.is_small())
      return from_parts(i128(num_) * o.den_ - i128(o.num_) * den_, i128(den_) * o.den_);
    return sub_slow(o);
  }
  Rational operator*(const Rational& o) const {
    if (is_small() && o.is_small())
      return from_parts(i128(num_) * o.num_, i128(den_) * o.den_);
    return mul_slow(o);
  }
  Rational operator/(const Rational& o) const;
  Rational operator-() const {
    if (is_small()) {
      Rational r;
      r.num_ = -num_;
      r.den_ = den_;
      return r;
    }
    return neg_slow();
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  bool operator==(const Rational& o) const {
    if (is_small() && o.is_small()) return num_ == o.num_ && den_ == o.den_;
    return eq_slow(o);
  }
  bool operator<(const Rational& o) const {
    if (is_small() && o.is_small()) return i128(num_) * o.den_ < i128(o.num_) * den_;
    return lt_slow(o);
  }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator<=(const Rational& o) const { return !(o < *this); }
  bool operator>=(const Rational& o) const { return !(*this < o); }

  bool is_small() const { return big_ == nullptr; }
  BigRational big_value() const;

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  using i128 = __int128;
  static Rational from_parts(i128 n, i128 d);
  static Rational from_parts_big(i128 n, i128 d);
  static Rational from_big(BigRational b);
  Rational add_slow(const Rational& o) const;
  Rational sub_slow(const Rational& o) const;
  Rational mul_slow(const Rational& o) const;
  Rational neg_slow() const;
  bool eq_slow(const Rational& o) const;
  bool lt_slow(const Rational& o) const;

  // invariant when big_ is null: den_ > 0 and gcd(|num_|, den_) = 1;
  // big_ is only set when the value does not fit the inline form.
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const BigRational> big_;
};

inline Rational Rational::from_parts(i128 n, i128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  Rational r;
  if (n == 0) return r;
  if (d == 1) {
    if (n >= INT64_MIN && n <= INT64_MAX) {
      r.num_ = static_cast<std::int64_t>(n);
      return r;
    }
    return from_parts_big(n, d);
  }
  using u128 = unsigned __int128;
  u128 a = n < 0 ? -static_cast<u128>(n) : static_cast<u128>(n);
  u128 b = static_cast<u128>(d);
  // knock the operands down to 64 bits, then run the cheap hardware gcd
  while ((b >> 64) != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  u128 g;
  if (b == 0) {
    g = a;
  } else {
    std::uint64_t x = static_cast<std::uint64_t>(a % b);
    std::uint64_t y = static_cast<std::uint64_t>(b);
    while (x != 0) {
      std::uint64_t t = y % x;
      y = x;
      x = t;
    }
    g = y;
  }
  if (g > 1) {
    n /= static_cast<i128>(g);
    d /= static_cast<i128>(g);
  }
  if (n >= INT64_MIN && n <= INT64_MAX && d <= INT64_MAX) {
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }
  return from_parts_big(n, d);
}

/// Univariate polynomial in the formal parameter kappa, dense coefficient
/// list c[i]*kappa^i with no trailing zero entries.
class Poly {
 public:
  using Storage = boost::container::small_vector<Rational, 2>;

  Poly() = default;
  explicit Poly(Rational constant);
  static Poly kappa();

  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Rational& coeff(std::size_t i) const;
  const Storage& coeffs() const { return coeffs_; }

  Poly operator+(const Poly&) const;
  Poly operator-(const Poly&) const;
  Poly operator*(const Poly&) const;
  Poly operator-() const;
  bool operator==(const Poly&) const = default;

  Poly scaled(const Rational&) const;
  Rational evaluate(const Rational& kappa_value) const;

  /// Euclidean division; denominator must be nonzero.
  static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);
  static Poly gcd(Poly a, Poly b);  // monic gcd
  Poly monic() const;
  Rational leading() const;

 private:
  void trim();
  Storage coeffs_;
};

/// Element of Q(kappa): num/den with den monic and gcd(num, den) = 1.
/// Engine outputs are expected to stay polynomial (den = 1); the full
/// fraction field is needed transiently in linear solves.
class Coefficient {
 public:
  Coefficient() : num_(), den_(Rational(1)) {}
  explicit Coefficient(Rational r) : num_(std::move(r)), den_(Rational(1)) { normalize(); }
  Coefficient(long n) : Coefficient(Rational(n)) {}
  Coefficient(long n, long d) : Coefficient(Rational(n, d)) {}
  Coefficient(Poly num, Poly den);

  static Coefficient zero() { return Coefficient(); }
  static Coefficient one() { return Coefficient(Rational(1)); }
  static Coefficient kappa();

  bool is_zero() const { return num_.is_zero(); }
  bool is_rational() const { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const { return den_.is_constant(); }
  /// Valid only when is_rational().
  Rational rational_value() const;

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  Coefficient operator+(const Coefficient&) const;
  Coefficient operator-(const Coefficient&) const;
  Coefficient operator*(const Coefficient&) const;
  Coefficient operator/(const Coefficient&) const;
  Coefficient operator-() const;
  Coefficient& operator+=(const Coefficient& o) { return *this = *this + o; }
  Coefficient& operator-=(const Coefficient& o) { return *this = *this - o; }
  Coefficient& operator*=(const Coefficient& o) { return *this = *this * o; }
  bool operator==(const Coefficient&) const = default;

  Coefficient inverse() const;
  /// Substitute a rational value for kappa.
  Rational evaluate(const Rational& kappa_value) const;

  std::string to_string() const;

 private:
  void normalize();
  Poly num_, den_;
};

Coefficient operator*(const Rational& r, const Coefficient& c);

/// Generalized binomial coefficient C(n, k) for any integer n, k >= 0.
Rational binomial(long n, long k);
Rational factorial(long n);

}  // namespace cqoa
