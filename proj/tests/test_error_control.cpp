#include <doctest.h>

#include "oracles.hpp"
#include "pslqe/error_control.hpp"

using namespace pslqe;

TEST_CASE("C closed form") {
  const PrecisionContext ctx(40);
  for (int n : {2, 5, 21, 50}) {
    for (const char* a : {"0.3", "0.7", "1"}) {
      const Real an = Real::parse(a, ctx);
      CHECK(std::fabs(constant_C(n, an).to_double() - static_cast<double>(oracle::constant_c(n, std::stold(a)))) <
            1e-12 * constant_C(n, an).to_double());
    }
  }
  CHECK_THROWS_AS(constant_C(5, Real(0L, ctx)), InputError);
}

TEST_CASE("plan sits just inside the open limits") {
  const PrecisionContext ctx(40);
  const ErrorPlan p = plan(pow10(-6, ctx), Real(16L, ctx), 5, Real::parse("0.99132", ctx));
  CHECK(p.eps1 < p.eps1_limit);
  CHECK(p.eps2 < p.eps2_limit);
  CHECK(abs(p.eps1 / p.eps1_limit - Real(1L, ctx)) < pow10(-5, ctx));
  CHECK(abs(p.eps3 - p.eps1 * 8L * Real(5L, ctx) * sqrt(Real(5L, ctx))) < pow10(-35, ctx) * p.eps3);
  CHECK(p.working_digits >= neg_log10_ceil(p.eps1));
}

TEST_CASE("omega trades eps1 against eps2") {
  const PrecisionContext ctx(40);
  Real last1(ctx), last2(1L, ctx);
  for (double w : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const ErrorPlan p = plan(pow10(-8, ctx), Real(100L, ctx), 6, Real::parse("0.8", ctx), PlanOptions{w});
    CHECK(p.eps1 > last1);
    CHECK(p.eps2 < last2);
    last1 = p.eps1;
    last2 = p.eps2;
  }
}

TEST_CASE("infeasible plans name the constraint") {
  const PrecisionContext ctx(40);
  try {
    plan(Real(1000L, ctx), Real(16L, ctx), 5, Real::parse("0.99", ctx));
    FAIL("expected InfeasiblePlan");
  } catch (const InfeasiblePlan& e) {
    CHECK(e.constraint() == "eps1 < 1/(8n)");
  }
  CHECK_THROWS_AS(plan(Real(-1L, ctx), Real(16L, ctx), 5, Real::parse("0.99", ctx)), InputError);
}

TEST_CASE("forward bound hypothesis") {
  const PrecisionContext ctx(40);
  const Real an = Real::parse("0.9", ctx);
  const Real limit = forward_bound_eps3_limit(4, an);
  CHECK_NOTHROW(forward_bound(Real(3L, ctx), pow10(-10, ctx), limit / 2L, 4, an));
  CHECK_THROWS_AS(forward_bound(Real(3L, ctx), pow10(-10, ctx), limit * 2L, 4, an), HypothesisViolated);
  const Real fb = forward_bound(Real(3L, ctx), pow10(-10, ctx), pow10(-12, ctx), 4, an);
  const long double want = oracle::constant_c(4, 0.9L) * (3e-12L + 0.9L * 1e-10L);
  CHECK(std::fabs(fb.to_double() / static_cast<double>(want) - 1) < 1e-12);
}

TEST_CASE("decay rate and iteration bound") {
  const PrecisionContext ctx(40);
  CHECK(abs(decay_rate(Real(2L, ctx)) - sqrt(Real(2L, ctx))) < pow10(-38, ctx));
  const Real g(2L, ctx);
  const auto loose = iteration_bound(6, g, pow10(-10, ctx));
  const auto tight = iteration_bound(6, g, pow10(-20, ctx));
  CHECK(tight > loose);
  CHECK(iteration_bound(6, g, pow10(-10, ctx), true) < loose);
  // n(n+1)((n-1) ln 2 + 10 ln 10) / (2 ln sqrt 2) for n = 6.
  const double expect = 42.0 * (5 * std::log(2.0) + 10 * std::log(10.0)) / std::log(2.0);
  CHECK(loose == static_cast<std::uint64_t>(std::ceil(expect)));
  CHECK_THROWS_AS(iteration_bound(6, Real(1L, ctx), pow10(-10, ctx)), InputError);
}

TEST_CASE("perturbation bounds") {
  const PrecisionContext ctx(40);
  CHECK(abs(h_perturbation_bound(4, pow10(-3, ctx)) - Real(64L, ctx) * pow10(-3, ctx)) < pow10(-35, ctx));
  CHECK_THROWS_AS(h_perturbation_bound(4, Real::parse("0.04", ctx)), HypothesisViolated);
  CHECK(neg_log10_ceil(Real::parse("2.6e-11", ctx)) == 11);
  CHECK(neg_log10_ceil(Real::parse("1e-11", ctx)) == 11);
}
