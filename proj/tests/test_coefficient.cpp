#include <doctest.h>

#include "cqoa/coefficient.hpp"

using namespace cqoa;

TEST_CASE("polynomial arithmetic in kappa") {
  Poly k = Poly::kappa();
  Poly two(Rational(2));
  Poly p = k * k - two;  // kappa^2 - 2
  CHECK(p.degree() == 2);
  CHECK(p.coeff(0) == Rational(-2));
  CHECK(p.coeff(1) == Rational(0));
  CHECK(p.coeff(2) == Rational(1));
  CHECK(p.evaluate(Rational(3)) == Rational(7));
  CHECK((p - p).is_zero());
  CHECK(-p + p == Poly());
  CHECK(p.scaled(Rational(1, 2)).evaluate(Rational(3)) == Rational(7, 2));
}

TEST_CASE("polynomial division and gcd") {
  Poly k = Poly::kappa();
  Poly a = (k - Poly(Rational(1))) * (k + Poly(Rational(2)));
  Poly b = (k - Poly(Rational(1))) * Poly(Rational(3));
  Poly q, r;
  Poly::divmod(a, b, q, r);
  CHECK(r.is_zero());
  CHECK(q * b == a);
  Poly g = Poly::gcd(a, b);
  CHECK(g == (k - Poly(Rational(1))));  // monic
  CHECK(Poly::gcd(k, Poly(Rational(5))) == Poly(Rational(1)));
}

TEST_CASE("coefficient field operations stay reduced") {
  Coefficient k = Coefficient::kappa();
  Coefficient half(1L, 2L);
  Coefficient x = (k - Coefficient(26L)) * half;
  CHECK(x.is_polynomial());
  CHECK(x.evaluate(Rational(26)) == Rational(0));
  CHECK(x.evaluate(Rational(28)) == Rational(1));

  Coefficient y = x / (k - Coefficient(26L));
  CHECK(y == half);  // common factor cancelled
  CHECK(y.is_rational());
  CHECK(y.rational_value() == Rational(1, 2));

  Coefficient z = Coefficient::one() / (k + Coefficient(1L));
  CHECK(!z.is_polynomial());
  CHECK(z * (k + Coefficient(1L)) == Coefficient::one());
  CHECK(z.inverse() == k + Coefficient(1L));
}

TEST_CASE("coefficient equality and zero handling") {
  CHECK(Coefficient::zero().is_zero());
  CHECK(Coefficient(3L, 6L) == Coefficient(1L, 2L));
  CHECK(Coefficient(-2L) + Coefficient(2L) == Coefficient::zero());
  CHECK((Coefficient::kappa() - Coefficient::kappa()).is_zero());
  CHECK_THROWS(Coefficient::zero().inverse());
}

TEST_CASE("rendering") {
  CHECK(Coefficient(3L).to_string() == "3");
  CHECK(Coefficient(-1L, 2L).to_string() == "-1/2");
  Coefficient p = Coefficient::kappa() * Coefficient(1L, 2L) - Coefficient(13L);
  CHECK(p.to_string() == "(1/2*kappa - 13)");
}

TEST_CASE("binomial and factorial helpers") {
  CHECK(binomial(4, 2) == Rational(6));
  CHECK(binomial(4, 0) == Rational(1));
  CHECK(binomial(3, 5) == Rational(0));
  // generalized upper index
  CHECK(binomial(-1, 2) == Rational(1));
  CHECK(binomial(-2, 3) == Rational(-4));
  CHECK(factorial(0) == Rational(1));
  CHECK(factorial(5) == Rational(120));
}
