#include <catch2/catch_amalgamated.hpp>

#include "embcalc/ext_int.hpp"

using embcalc::ExtInt;
using embcalc::invalid_argument;

TEST_CASE("ExtInt ordering is total", "[ext_int]") {
  ExtInt ni = ExtInt::neg_inf(), pi = ExtInt::pos_inf();
  CHECK(ni < ExtInt(-1000000));
  CHECK(ExtInt(1000000) < pi);
  CHECK(ni < pi);
  CHECK(ExtInt(-2) < ExtInt(3));
  CHECK(ni == ExtInt::neg_inf());
  CHECK(pi == ExtInt::pos_inf());
  CHECK_FALSE(pi < pi);
  CHECK(min(ExtInt(4), pi) == ExtInt(4));
  CHECK(max(ni, ExtInt(-7)) == ExtInt(-7));
}

TEST_CASE("ExtInt addition absorbs into infinities", "[ext_int]") {
  ExtInt ni = ExtInt::neg_inf(), pi = ExtInt::pos_inf();
  CHECK(ExtInt(2) + ExtInt(3) == ExtInt(5));
  CHECK(pi + ExtInt(-10) == pi);
  CHECK(ni + ExtInt(10) == ni);
  CHECK(pi + pi == pi);
  CHECK(ni + ni == ni);
  CHECK_THROWS_AS(pi + ni, invalid_argument);
  CHECK_THROWS_AS(ni + pi, invalid_argument);
}

TEST_CASE("ExtInt negation and scaling", "[ext_int]") {
  CHECK(-ExtInt::pos_inf() == ExtInt::neg_inf());
  CHECK(-ExtInt(4) == ExtInt(-4));
  CHECK(ExtInt(7) - ExtInt(9) == ExtInt(-2));
  CHECK(3 * ExtInt(5) == ExtInt(15));
  CHECK(2 * ExtInt::neg_inf() == ExtInt::neg_inf());
  CHECK(5 * ExtInt::pos_inf() == ExtInt::pos_inf());
}

TEST_CASE("ExtInt value access and rendering", "[ext_int]") {
  CHECK(ExtInt(41).value() == 41);
  CHECK_THROWS_AS(ExtInt::pos_inf().value(), invalid_argument);
  CHECK_THROWS_AS(ExtInt::neg_inf().value(), invalid_argument);
  CHECK(ExtInt(-3).str() == "-3");
  CHECK(ExtInt::pos_inf().str() == "inf");
  CHECK(ExtInt::neg_inf().str() == "-inf");
  CHECK(ExtInt(0).is_finite());
  CHECK(ExtInt::pos_inf().is_pos_inf());
  CHECK(ExtInt::neg_inf().is_neg_inf());
}
