#include <catch2/catch_amalgamated.hpp>

#include "plq/rational.hpp"

using namespace plq;

TEST_CASE("rationals normalize to lowest terms") {
  Rational q = rat(6, 4);
  CHECK(num(q) == 3);
  CHECK(den(q) == 2);
  CHECK(to_string(q) == "3/2");
  CHECK(to_string(rat(-6, 4)) == "-3/2");
  CHECK(to_string(rat(8, 2)) == "4");
  CHECK(to_string(Rational(0)) == "0");
}

TEST_CASE("zero denominators are rejected") {
  CHECK_THROWS_AS(rat(1, 0), Error);
  try {
    rat(1, 0);
  } catch (const Error& e) {
    CHECK(e.kind() == Errc::DivisionByZero);
  }
}

TEST_CASE("parsing accepts integers and fractions only") {
  CHECK(*try_parse_rational("22/7") == rat(22, 7));
  CHECK(*try_parse_rational("-3/6") == rat(-1, 2));
  CHECK(*try_parse_rational("17") == Rational(17));
  CHECK(*try_parse_rational("-4") == Rational(-4));
  CHECK(*try_parse_rational("007") == Rational(7));
  CHECK_FALSE(try_parse_rational(""));
  CHECK_FALSE(try_parse_rational("1.5"));
  CHECK_FALSE(try_parse_rational("+2"));
  CHECK_FALSE(try_parse_rational("1/0"));
  CHECK_FALSE(try_parse_rational("1/-2"));
  CHECK_FALSE(try_parse_rational("1/2/3"));
  CHECK_FALSE(try_parse_rational("a/2"));
  CHECK_FALSE(try_parse_rational("2/"));
  CHECK_FALSE(try_parse_rational(" 2"));
}

TEST_CASE("integer powers of rationals stay exact") {
  CHECK(rational_pow(rat(3, 2), 4) == rat(81, 16));
  CHECK(rational_pow(rat(3, 2), 0) == 1);
  CHECK(rational_pow(rat(3, 2), -2) == rat(4, 9));
  CHECK(rational_pow(Rational(2), 40) == Rational(Integer(1) << 40));
  CHECK_THROWS_AS(rational_pow(Rational(0), -1), Error);
}

TEST_CASE("floor respects negatives") {
  CHECK(rfloor(rat(7, 2)) == 3);
  CHECK(rfloor(rat(-7, 2)) == -4);
  CHECK(rfloor(Rational(5)) == 5);
  CHECK(rfloor(Rational(-5)) == -5);
}

TEST_CASE("decimal rendering rounds half away from zero") {
  CHECK(to_decimal(rat(1, 3), 6) == "0.333333");
  CHECK(to_decimal(rat(5, 6), 4) == "0.8333");
  CHECK(to_decimal(rat(1, 2), 0) == "1");
  CHECK(to_decimal(rat(-1, 2), 0) == "-1");
  CHECK(to_decimal(rat(25, 1000), 2) == "0.03");
  CHECK(to_decimal(Rational(2), 3) == "2.000");
  CHECK(to_decimal(rat(-1, 3), 2) == "-0.33");
  CHECK(to_decimal(rat(1, 200000000), 6) == "0.000000");
}

TEST_CASE("absolute value") {
  CHECK(rabs(rat(-5, 3)) == rat(5, 3));
  CHECK(rabs(rat(5, 3)) == rat(5, 3));
  CHECK(rabs(Rational(0)) == 0);
}
