#include "doctest.h"

#include "lagsurf/errors.hpp"
#include "lagsurf/util.hpp"

using namespace lagsurf;

TEST_CASE("decimal strings parse to exact rationals") {
    CHECK(parse_decimal("0.1") == Rational(1, 10));
    CHECK(parse_decimal("-12.0625") == Rational(-193, 16));
    CHECK(parse_decimal("7") == Rational(7));
    CHECK(parse_decimal("3e-2") == Rational(3, 100));
    CHECK(parse_decimal("2.5E3") == Rational(2500));
    CHECK(parse_decimal("+.5") == Rational(1, 2));
    CHECK_THROWS_AS(parse_decimal("abc"), Error);
    CHECK_THROWS_AS(parse_decimal(""), Error);
    CHECK_THROWS_AS(parse_decimal("1.2.3"), Error);
}

TEST_CASE("doubles convert to exact dyadic rationals") {
    CHECK(rational_of_double(0.5) == Rational(1, 2));
    CHECK(rational_of_double(-3.0) == Rational(-3));
    CHECK(rational_of_double(0.0) == Rational(0));
    // 0.1 is not exactly 1/10 as a double; the conversion must reproduce the
    // binary value, not the decimal intent.
    CHECK(rational_of_double(0.1) != Rational(1, 10));
    CHECK(to_double(rational_of_double(0.1)) == 0.1);
}

TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex(std::string("")) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex(std::string("abc")) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex(std::string(
              "abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq")) ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("gcd helper") {
    CHECK(gcd_ll(0, 0) == 0);
    CHECK(gcd_ll(-4, 6) == 2);
    CHECK(gcd_ll(5, 0) == 5);
}
