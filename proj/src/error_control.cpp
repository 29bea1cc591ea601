#include "pslqe/error_control.hpp"

#include <cmath>
#include <limits>

namespace pslqe {

namespace {

void require_alpha_n(const Real& alpha_n) {
  if (!(alpha_n > 0L) || alpha_n > 1L) throw InputError("alpha_n must lie in (0, 1], got " + alpha_n.to_string(6));
}

void require_n(int n) {
  if (n < 2) throw InputError("dimension must be at least 2");
}

Real root_term(int n, const Real& alpha_n) {
  // sqrt((n-2) a_n^2 + 1)
  const PrecisionContext ctx = alpha_n.context();
  return sqrt(Real(static_cast<long>(n) - 2, ctx) * alpha_n * alpha_n + Real(1L, ctx));
}

Real n_three_halves(int n, const PrecisionContext& ctx) {
  const Real nn(static_cast<long>(n), ctx);
  return nn * sqrt(nn);
}

}  // namespace

Real constant_C(int n, const Real& alpha_n) {
  require_n(n);
  require_alpha_n(alpha_n);
  return (root_term(n, alpha_n) + alpha_n) * 2L / alpha_n;
}

ErrorPlan plan(const Real& eps, const Real& G, int n, const Real& alpha_n, const PlanOptions& options) {
  require_n(n);
  require_alpha_n(alpha_n);
  if (!(eps > 0L)) throw InputError("eps must be positive");
  if (G < 1L) throw InputError("G must be at least 1");
  if (!(options.omega > 0.0 && options.omega < 1.0)) throw InputError("omega must lie in (0, 1)");
  if (options.guard_digits < 0) throw InputError("guard digits must be non-negative");

  const PrecisionContext ctx = eps.context();
  const Real one(1L, ctx);
  Real omega(ctx);
  mpfr_set_d(omega.raw(), options.omega, MPFR_RNDN);

  ErrorPlan p{eps, eps, eps, eps, eps, eps, eps, eps, G, omega, n, alpha_n, 0};
  p.C = constant_C(n, alpha_n);
  p.M = sqrt(Real(static_cast<long>(n), ctx)) * G;
  p.eps1_limit = omega * eps / (p.M * p.C * n_three_halves(n, ctx) * 8L);
  p.eps2_limit = (one - omega) * eps / (p.C * alpha_n);

  // Strictly inside the open bounds.
  const Real shrink = one - pow10(-6, ctx);
  p.eps1 = p.eps1_limit * shrink;
  p.eps2 = p.eps2_limit * shrink;

  const Real perturbation_limit = one / (Real(static_cast<long>(n), ctx) * 8L);
  if (!(p.eps1 < perturbation_limit)) {
    throw InfeasiblePlan("eps1 < 1/(8n)", "eps1 = " + p.eps1.to_string(6) + ", limit " + perturbation_limit.to_string(6));
  }
  p.eps3 = h_perturbation_bound(n, p.eps1);
  const Real eps3_limit = forward_bound_eps3_limit(n, alpha_n);
  if (!(p.eps3 < eps3_limit)) {
    throw InfeasiblePlan("eps3 < a_n/(2 sqrt((n-2) a_n^2 + 1))",
                         "eps3 = " + p.eps3.to_string(6) + ", limit " + eps3_limit.to_string(6));
  }
  p.working_digits = static_cast<int>(neg_log10_ceil(p.eps1)) + options.guard_digits;
  p.working_digits = std::max(p.working_digits, PrecisionContext::kMinDigits);
  return p;
}

Real forward_bound_eps3_limit(int n, const Real& alpha_n) {
  require_n(n);
  require_alpha_n(alpha_n);
  return alpha_n / (root_term(n, alpha_n) * 2L);
}

Real forward_bound(const Real& norm_m, const Real& eps2, const Real& eps3, int n, const Real& alpha_n) {
  const Real limit = forward_bound_eps3_limit(n, alpha_n);
  if (!(eps3 < limit)) {
    throw HypothesisViolated("forward bound needs eps3 < " + limit.to_string(6) + ", got " + eps3.to_string(6));
  }
  if (norm_m < 0L || eps2 < 0L || eps3 < 0L) throw InputError("forward bound arguments must be non-negative");
  return constant_C(n, alpha_n) * (norm_m * eps3 + alpha_n * eps2);
}

Real h_perturbation_bound(int n, const Real& eps1) {
  require_n(n);
  const PrecisionContext ctx = eps1.context();
  const Real limit = Real(1L, ctx) / (Real(static_cast<long>(n), ctx) * 8L);
  if (!(eps1 < limit)) {
    throw HypothesisViolated("perturbation bound needs eps1 < 1/(8n) = " + limit.to_string(6));
  }
  return n_three_halves(n, ctx) * eps1 * 8L;
}

Real perturbed_inverse_bound(int n, const Real& alpha_n, const Real& eps3) {
  require_n(n);
  require_alpha_n(alpha_n);
  const PrecisionContext ctx = alpha_n.context();
  const Real inv_norm =
      sqrt(Real(static_cast<long>(n) - 2, ctx) + Real(1L, ctx) / (alpha_n * alpha_n));
  const Real product = eps3 * inv_norm;
  if (!(product < 1L)) {
    throw HypothesisViolated("perturbed inverse bound needs eps3 < 1/||Hinv||_F = " +
                             (Real(1L, ctx) / inv_norm).to_string(6));
  }
  return inv_norm / (Real(1L, ctx) - product);
}

Real decay_rate(const Real& gamma) {
  const PrecisionContext ctx = gamma.context();
  const Real one(1L, ctx);
  return one / sqrt(one / 4L + one / (gamma * gamma));
}

std::uint64_t iteration_bound(int n, const Real& gamma, const Real& eps2, bool use_proof_exponent) {
  require_n(n);
  const PrecisionContext ctx = gamma.context();
  if (!(gamma * gamma * 3L > 4L)) throw InputError("gamma must exceed 2/sqrt(3)");
  if (!(eps2 > 0L)) throw InputError("eps2 must be positive");
  const long nn = n;
  const long lead = use_proof_exponent ? nn * (nn - 1) : nn * (nn + 1);
  const Real numerator =
      Real(lead, ctx) * (Real(nn - 1, ctx) * log(gamma) + log(Real(1L, ctx) / eps2));
  const Real bound = numerator / (log(decay_rate(gamma)) * 2L);
  if (!(bound > 0L)) return 0;
  const BigInt c = ceil_int(bound);
  if (!c.fits_ulong_p()) return std::numeric_limits<std::uint64_t>::max();
  return c.get_ui();
}

Real unit_last_component_bound(int n, const Real& alpha_n) {
  require_n(n);
  require_alpha_n(alpha_n);
  const PrecisionContext ctx = alpha_n.context();
  const Real one(1L, ctx);
  return alpha_n / (sqrt(one - alpha_n * alpha_n) * root_term(n, alpha_n) * 2L + alpha_n * 2L);
}

long neg_log10_ceil(const Real& x) {
  if (!(x > 0L)) throw InputError("neg_log10_ceil needs a positive argument");
  const BigInt c = ceil_int(-log10(x));
  return c.get_si();
}

}  // namespace pslqe
