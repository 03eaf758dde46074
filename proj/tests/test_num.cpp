#include "doctest.h"

#include <sstream>

#include "otp/errors.hpp"
#include "otp/num.hpp"

using otp::Num;

TEST_CASE("parse accepts integers, decimals, exponents and fractions") {
    CHECK(Num::parse("123") == Num(123));
    CHECK(Num::parse("-7") == Num(-7));
    CHECK(Num::parse("+7") == Num(7));
    CHECK(Num::parse("0") == Num(0));

    // -4.25 = -17/4
    CHECK(Num::parse("-4.25") == Num::ratio(-17, 4));
    CHECK(Num::parse("0.1") == Num::ratio(1, 10));
    CHECK(Num::parse("2.50") == Num::ratio(5, 2));

    // 6.1e-3 = 61/10 * 10^-3
    CHECK(Num::parse("6.1e-3") == Num::ratio(61, 10000));
    CHECK(Num::parse("1.5e2") == Num(150));
    CHECK(Num::parse("2E3") == Num(2000));
    CHECK(Num::parse("5e+1") == Num(50));

    CHECK(Num::parse("3/4") == Num::ratio(3, 4));
    CHECK(Num::parse("-3/4") == Num::ratio(-3, 4));
    CHECK(Num::parse("+3/4") == Num::ratio(3, 4));
    // canonicalized on the way in
    CHECK(Num::parse("2/6").str() == "1/3");
    CHECK(Num::parse("4/-6").str() == "-2/3");

    CHECK(Num::parse("123").is_exact());
    CHECK(Num::parse("1/3").is_exact());
}

TEST_CASE("parse rejects malformed literals") {
    const char* bad[] = {
        "",     "abc",  "1..2", "1.",    ".5",   "1e",   "1e+",
        "--1",  "+-1",  "1 ",   " 1",    "1/",   "/2",   "1/0",
        "1.5/2", "1e9999999",  // exponent capped at six digits
        "0x10", "1,5",
    };
    for (const char* text : bad) {
        CAPTURE(text);
        CHECK_THROWS_AS(Num::parse(text), otp::ParseError);
    }
}

TEST_CASE("str prints minimal decimals for 2^a*5^b denominators") {
    CHECK(Num(0).str() == "0");
    CHECK(Num(-12).str() == "-12");
    CHECK(Num::ratio(1, 2).str() == "0.5");
    CHECK(Num::ratio(-17, 4).str() == "-4.25");
    CHECK(Num::ratio(1, 8).str() == "0.125");
    CHECK(Num::ratio(7, 50).str() == "0.14");
    CHECK(Num::ratio(61, 10000).str() == "0.0061");
    CHECK(Num::ratio(10, 4).str() == "2.5");   // trailing zeros dropped
    CHECK(Num::ratio(8, 2).str() == "4");      // integer after reduction

    CHECK(Num::ratio(1, 3).str() == "1/3");
    CHECK(Num::ratio(-5, 7).str() == "-5/7");
    CHECK(Num::ratio(19, 9).str() == "19/9");
}

TEST_CASE("str of exact values round-trips through parse") {
    const Num values[] = {
        Num(0), Num(42), Num(-42), Num::ratio(1, 3), Num::ratio(-22, 7),
        Num::ratio(1, 1024), Num::ratio(123456789, 1000),
        otp::pow(Num::ratio(3, 2), 40),
    };
    for (const Num& v : values) {
        CAPTURE(v.str());
        CHECK(Num::parse(v.str()) == v);
    }
}

TEST_CASE("inexact values print as shortest round-tripping doubles") {
    CHECK(Num::inexact(0.5).str() == "0.5");
    CHECK(Num::inexact(0.1).str() == "0.1");
    Num v = otp::sqrt_inexact(Num(2));
    CHECK(std::stod(v.str()) == v.to_double());
}

TEST_CASE("arithmetic stays exact until an inexact operand shows up") {
    Num a = Num::ratio(1, 3);
    Num b = Num::ratio(1, 6);
    CHECK((a + b).str() == "0.5");
    CHECK((a - b) == Num::ratio(1, 6));
    CHECK((a * b) == Num::ratio(1, 18));
    CHECK((a / b) == Num(2));
    CHECK((a + b).is_exact());

    Num x = Num::inexact(0.25);
    CHECK_FALSE((a + x).is_exact());
    CHECK_FALSE((x * Num(2)).is_exact());
    CHECK((x + x).to_double() == 0.5);
    CHECK((-x).to_double() == -0.25);
    CHECK_FALSE((-x).is_exact());

    CHECK_THROWS_AS(a / Num(0), otp::DomainError);
    CHECK_THROWS_AS(x.exact_value(), otp::InternalError);
}

TEST_CASE("comparisons, sign, abs, min, max") {
    CHECK(Num::ratio(1, 3) < Num::ratio(1, 2));
    CHECK(Num(-1) < Num(0));
    CHECK(Num::ratio(2, 4) == Num::ratio(1, 2));
    CHECK(Num(3).sign() == 1);
    CHECK(Num(-3).sign() == -1);
    CHECK(Num(0).is_zero());
    CHECK(Num(-3).abs() == Num(3));
    CHECK(Num::inexact(-0.5).abs().to_double() == 0.5);
    CHECK(otp::min(Num(2), Num(5)) == Num(2));
    CHECK(otp::max(Num(2), Num(5)) == Num(5));
    // mixed exact/inexact falls back to double comparison
    CHECK(Num::inexact(0.5) == Num::ratio(1, 2));
}

TEST_CASE("pow") {
    CHECK(otp::pow(Num(2), 10) == Num(1024));
    CHECK(otp::pow(Num(7), 0) == Num(1));
    CHECK(otp::pow(Num::ratio(3, 2), 5) == Num::ratio(243, 32));
    CHECK(otp::pow(Num::ratio(3, 2), 5).str() == "7.59375");
    CHECK(otp::pow(Num(-2), 3) == Num(-8));
    CHECK_FALSE(otp::pow(Num::inexact(2.0), 3).is_exact());
}

TEST_CASE("sqrt_inexact") {
    CHECK(otp::sqrt_inexact(Num(9)).to_double() == 3.0);
    CHECK_FALSE(otp::sqrt_inexact(Num(9)).is_exact());
    CHECK_THROWS_AS(otp::sqrt_inexact(Num(-1)), otp::DomainError);
}

TEST_CASE("approx comparisons are exact when both sides are exact") {
    Num third = Num::ratio(1, 3);
    CHECK(otp::approx_eq(third, Num::ratio(1, 3)));
    // an exact mismatch of 1e-30 would vanish in doubles; exactness keeps it
    Num tiny = otp::pow(Num::ratio(1, 10), 30);
    CHECK_FALSE(otp::approx_eq(third, third + tiny));
    CHECK(otp::approx_le(third, third + tiny));
    CHECK_FALSE(otp::approx_le(third + tiny, third));
}

TEST_CASE("approx comparisons tolerate rounding once a side is inexact") {
    Num root = otp::sqrt_inexact(Num(2));  // ~1.41421356
    Num square = root * root;
    CHECK(otp::approx_eq(square, Num(2)));
    CHECK(otp::approx_le(square, Num(2)));
    CHECK(otp::approx_le(Num(2), square));
    CHECK_FALSE(otp::approx_eq(root, Num(2)));
    // tolerance scales with magnitude
    Num big = Num::inexact(1e12);
    CHECK(otp::approx_eq(big, big + Num::inexact(1.0)));
    CHECK_FALSE(otp::approx_eq(Num::inexact(1.0), Num::inexact(1.001)));
}

TEST_CASE("stream output matches str") {
    std::ostringstream os;
    os << Num::ratio(5, 3) << " " << Num::ratio(1, 4);
    CHECK(os.str() == "5/3 0.25");
}

TEST_CASE("inexact rejects non-finite input") {
    CHECK_THROWS_AS(Num::inexact(1.0 / 0.0), otp::DomainError);
    CHECK_THROWS_AS(Num::inexact(0.0 / 0.0), otp::DomainError);
    CHECK_THROWS_AS(Num::ratio(1, 0), otp::DomainError);
}
