#include <doctest.h>

#include "complp/rational.hpp"

using complp::Rational;
using complp::RationalError;

TEST_CASE("construction reduces and normalizes the sign") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, 4) == Rational(-1, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(2, -4).den() == 2);
  CHECK(Rational(0, 7) == Rational(0));
  CHECK_THROWS_AS(Rational(1, 0), RationalError);
}

TEST_CASE("arithmetic is exact") {
  const Rational a(1, 3), b(1, 6);
  CHECK(a + b == Rational(1, 2));
  CHECK(a - b == Rational(1, 6));
  CHECK(a * b == Rational(1, 18));
  CHECK(a / b == Rational(2));
  CHECK_THROWS_AS(a / Rational(0), RationalError);
  CHECK_THROWS_AS(Rational(0).inverse(), RationalError);
  CHECK((-a) + a == Rational(0));
}

TEST_CASE("string round trip") {
  CHECK(Rational::from_string("5") == Rational(5));
  CHECK(Rational::from_string("-7/14") == Rational(-1, 2));
  CHECK(Rational::from_string("1/3").str() == "1/3");
  CHECK(Rational(4).str() == "4");
  CHECK(Rational(-3, 7).str() == "-3/7");
  CHECK_THROWS_AS(Rational::from_string("1/0"), RationalError);
  CHECK_THROWS_AS(Rational::from_string("abc"), RationalError);
  CHECK_THROWS_AS(Rational::from_string(""), RationalError);
}

TEST_CASE("big values stay exact") {
  Rational big(1);
  for (int i = 0; i < 64; ++i) big *= Rational(10);
  Rational sum;
  for (int i = 0; i < 1000; ++i) sum += Rational(1) / big;
  CHECK(sum == Rational(1000) / big);
  CHECK(sum * big == Rational(1000));
}

TEST_CASE("ordering") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(-1, 3));
  CHECK(Rational(2, 6).sign() == 1);
  CHECK(Rational(-5).sign() == -1);
  CHECK(Rational(0).sign() == 0);
  CHECK(Rational(-3, 4).abs() == Rational(3, 4));
}
