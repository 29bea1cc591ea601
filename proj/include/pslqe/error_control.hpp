#pragma once

#include <cstdint>
#include <string>

#include "pslqe/numerics.hpp"

namespace pslqe {

/// Error budget for one relation search.
///
/// Given a target accuracy `eps` on |<alpha, m>| for the (unknown) exact
/// vector alpha, the plan fixes how accurately the input must be known
/// (`eps1`) and where the reduction stops (`eps2`, compared against
/// |h_{n,n-1}|). `eps1_limit` / `eps2_limit` are the supremum values of the
/// strict inequalities; `eps1` / `eps2` sit a relative 1e-6 below them.
struct ErrorPlan {
  Real eps;
  Real eps1;
  Real eps2;
  Real eps1_limit;
  Real eps2_limit;
  Real eps3;  ///< certified ||H_alpha - H_alphabar||_F = 8 n^{3/2} eps1
  Real C;
  Real M;  ///< 2-norm bound on the relation, sqrt(n) * G
  Real G;  ///< infinity-norm bound on the relation
  Real omega;
  int n = 0;
  Real alpha_n;
  int working_digits = 0;
};

/// C = 2 (sqrt((n-2) a_n^2 + 1) + a_n) / a_n.
Real constant_C(int n, const Real& alpha_n);

struct PlanOptions {
  double omega = 0.5;
  int guard_digits = 20;
};

/// Builds the budget. omega = 1/2 gives eps1 < eps / (16 M C n^{3/2}) and
/// eps2 < eps / (2 C a_n). Throws InfeasiblePlan naming the violated
/// constraint when eps is too large for (n, a_n).
ErrorPlan plan(const Real& eps, const Real& G, int n, const Real& alpha_n, const PlanOptions& options = {});

/// C (||m|| eps3 + a_n eps2). Throws HypothesisViolated unless
/// eps3 < a_n / (2 sqrt((n-2) a_n^2 + 1)).
Real forward_bound(const Real& norm_m, const Real& eps2, const Real& eps3, int n, const Real& alpha_n);

/// Upper limit on eps3 under which forward_bound is valid.
Real forward_bound_eps3_limit(int n, const Real& alpha_n);

/// 8 n^{3/2} eps1. Throws HypothesisViolated when eps1 >= 1/(8n).
Real h_perturbation_bound(int n, const Real& eps1);

/// ||Hinv|| / (1 - eps3 ||Hinv||) with ||Hinv||_F = sqrt((n-2) + 1/a_n^2).
/// Throws HypothesisViolated when eps3 >= 1/||Hinv||_F.
Real perturbed_inverse_bound(int n, const Real& alpha_n, const Real& eps3);

/// tau = 1 / sqrt(1/rho^2 + 1/gamma^2) with rho = 2.
Real decay_rate(const Real& gamma);

/// Ceiling of n(n+1)((n-1) log gamma + log(1/eps2)) / (2 log tau); with
/// `use_proof_exponent` the leading n(n+1) becomes n(n-1).
std::uint64_t iteration_bound(int n, const Real& gamma, const Real& eps2, bool use_proof_exponent = false);

/// a_n / (2 sqrt(1 - a_n^2) sqrt((n-2) a_n^2 + 1) + 2 a_n): lower bound on
/// the last entry of a unit left-kernel vector of the perturbed matrix.
Real unit_last_component_bound(int n, const Real& alpha_n);

/// ceil(-log10 x) for x > 0.
long neg_log10_ceil(const Real& x);

}  // namespace pslqe
