#include <cmath>
#include <doctest.h>

#include "pslqe/numerics.hpp"

using namespace pslqe;

// pi to 60 digits, from published tables.
static const char* kPi60 = "3.14159265358979323846264338327950288419716939937510582097494";

TEST_CASE("precision floor and bits") {
  CHECK_THROWS_AS(PrecisionContext(9), ConfigError);
  const PrecisionContext ctx(50);
  CHECK(ctx.bits() >= static_cast<mpfr_prec_t>(std::ceil(50 * std::log2(10.0))));
}

TEST_CASE("parse and print round trip") {
  const PrecisionContext ctx(40);
  const Real x = Real::parse("-1.25e-7", ctx);
  CHECK(x.to_string(3) == "-1.25e-7");
  CHECK(Real::deserialize(x.serialize()) == x);
  CHECK(x.serialize() == Real::parse("-1.25e-7", ctx).serialize());
  CHECK_THROWS_AS(Real::parse("1.2.3", ctx), InputError);
  CHECK_THROWS_AS(Real::parse("", ctx), InputError);
}

TEST_CASE("constants agree with tables") {
  const PrecisionContext ctx(55);
  const Real pi = eval_constant("pi", ctx);
  CHECK(abs(pi - Real::parse(kPi60, ctx)) < pow10(-54, ctx));
  const Real r = eval_constant("nthroot(3,5)", ctx);
  CHECK(abs(pow(r, 5L) - Real(3L, ctx)) < pow10(-53, ctx));
  CHECK(abs(eval_constant("sqrt(2)", ctx) * eval_constant("sqrt(2)", ctx) - Real(2L, ctx)) < pow10(-53, ctx));
  CHECK_THROWS_AS(eval_constant("zeta(3)", ctx), UnsupportedConstant);
}

TEST_CASE("nearest integer ties go up") {
  const PrecisionContext ctx(30);
  CHECK(nearest_int(Real::parse("2.5", ctx)) == 3);
  CHECK(nearest_int(Real::parse("-2.5", ctx)) == -2);
  CHECK(nearest_int(Real::parse("-2.5000001", ctx)) == -3);
  CHECK(nearest_int(Real::parse("1e25", ctx)) == BigInt("10000000000000000000000000"));
}

TEST_CASE("half-bound test is exact at the boundary") {
  const PrecisionContext ctx(30);
  CHECK_FALSE(abs_below_half(Real::parse("0.5", ctx), Real(1L, ctx)));
  CHECK(abs_below_half(Real::parse("0.4999999999", ctx), Real(-1L, ctx)));
}

TEST_CASE("mixed precision widens") {
  const PrecisionContext lo(20), hi(60);
  Real a(1L, lo);
  a /= Real(3L, hi);
  CHECK(a.digits() == 60);
  CHECK(convert(a, lo).digits() == 20);
}

TEST_CASE("ceil and decimal exponent") {
  const PrecisionContext ctx(30);
  CHECK(ceil_int(Real::parse("-0.5", ctx)) == 0);
  CHECK(ceil_int(Real::parse("7.000001", ctx)) == 8);
  CHECK(Real::parse("2.6e-11", ctx).decimal_exponent() == -11);
  CHECK(pow10(-3, ctx) == Real::parse("0.001", ctx));
}
