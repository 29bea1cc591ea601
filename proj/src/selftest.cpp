#include <chrono>
#include <functional>
#include <random>
#include <sstream>
#include <variant>

#include "pslqe/hyperplane.hpp"
#include "pslqe/report.hpp"

namespace pslqe {

namespace {

using Rng = std::mt19937_64;

/// Uniform in (-1, 1) with 62 random bits.
Real random_entry(Rng& rng, const PrecisionContext& ctx) {
  const long raw = static_cast<long>(rng() >> 2);
  Real x = Real(raw, ctx) / pow(Real(2L, ctx), 61L) - Real(1L, ctx);
  return x.is_zero() ? Real(1L, ctx) / 3L : x;
}

UnitVector random_unit(Rng& rng, std::size_t n, const PrecisionContext& ctx) {
  for (;;) {
    std::vector<Real> v;
    for (std::size_t k = 0; k < n; ++k) v.push_back(random_entry(rng, ctx));
    Normalized normalized = normalize_and_permute(v);
    if (auto* unit = std::get_if<UnitVector>(&normalized)) return *unit;
  }
}

struct Check {
  bool ok = true;
  std::ostringstream why;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) why << what;
    ok = ok && cond;
  }
};

Real max_abs_diff(const RealMatrix& a, const RealMatrix& b) {
  Real worst(a(0, 0).context());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) worst = max(worst, abs(a(i, j) - b(i, j)));
  }
  return worst;
}

Real fro_squared(const RealMatrix& m) {
  Real acc(m(0, 0).context());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * m(i, j);
  }
  return acc;
}

void hyperplane_suite(Check& c, Rng& rng, const PrecisionContext& ctx) {
  const Real tol = pow10(-(ctx.digits() - 5), ctx);
  for (int trial = 0; trial < 60 && c.ok; ++trial) {
    const std::size_t n = 2 + trial % 11;
    const UnitVector u = random_unit(rng, n, ctx);
    const HyperplaneMatrix H = build_h(u);
    for (std::size_t j = 0; j + 1 < n; ++j) {
      Real dot(ctx);
      for (std::size_t i = 0; i < n; ++i) dot += u.entries[i] * H(i, j);
      c.expect(abs(dot) < tol, "alpha H != 0 at n=" + std::to_string(n));
      for (std::size_t k = 0; k + 1 < n; ++k) {
        Real g(ctx);
        for (std::size_t i = 0; i < n; ++i) g += H(i, j) * H(i, k);
        c.expect(abs(g - Real(j == k ? 1L : 0L, ctx)) < tol, "H^T H != I at n=" + std::to_string(n));
      }
    }
    c.expect(H.is_lower_trapezoidal(), "H not lower trapezoidal");
  }
}

void norms_suite(Check& c, Rng& rng, const PrecisionContext& ctx) {
  const Real tol = pow10(-(ctx.digits() - 5), ctx);
  for (int trial = 0; trial < 40 && c.ok; ++trial) {
    const std::size_t n = 3 + trial % 8;
    const UnitVector u = random_unit(rng, n, ctx);
    const HyperplaneMatrix H = build_h(u);
    const RealMatrix P = H.principal_block();
    const RealMatrix Pinv = principal_inverse(u);
    const auto [fro, fro_inv] = fro_norms(u);
    c.expect(abs(fro * fro - fro_squared(P)) < tol, "||H||_F closed form");
    c.expect(abs(fro_inv * fro_inv - fro_squared(Pinv)) / (fro_inv * fro_inv) < tol, "||H^-1||_F closed form");
    const Real scale = max(Real(1L, ctx), fro_inv * fro_inv);
    c.expect(max_abs_diff(Pinv, invert(P)) < tol * scale, "closed-form inverse differs from elimination");
  }
}

void corner_suite(Check& c, Rng& rng, const PrecisionContext& ctx) {
  const Real tol = pow10(-(ctx.digits() - 5), ctx);
  for (int trial = 0; trial < 40 && c.ok; ++trial) {
    const std::size_t n = 4 + trial % 6;
    HyperplaneMatrix H = build_h(random_unit(rng, n, ctx));
    const std::size_t r = static_cast<std::size_t>(rng() % (n - 2));
    H.matrix().swap_rows(r, r + 1);
    const CornerStep step = corner(H, r);
    const RealMatrix QtQ = multiply(transpose(step.Q), step.Q);
    c.expect(max_abs_diff(QtQ, identity_real(n - 1, ctx)) < tol, "Q^T Q != I");
    // The rotation must be the one that zeroes h_{r,r+1}: H Q equals the
    // returned matrix, including the cleared entry.
    c.expect(max_abs_diff(multiply(H.matrix(), step.Q), step.H.matrix()) < tol, "H Q differs from the corner result");
    c.expect(step.H.is_lower_trapezoidal(), "corner result not lower trapezoidal");
  }
  for (int trial = 0; trial < 6 && c.ok; ++trial) {
    const UnitVector u = random_unit(rng, 4 + trial % 3, ctx);
    const HyperplaneMatrix H0 = build_h(u);
    PslqOptions o;
    o.track_q = true;
    o.max_iterations = 200;
    o.adaptive_precision = false;
    const PslqRun run = run_pslq_epsilon_full(H0, pow10(-(ctx.digits() / 2), ctx), default_gamma(ctx), o);
    const PslqState& s = run.final_state;
    const RealMatrix AH0Q = multiply(multiply(s.A, H0.matrix()), *s.q_cumulative);
    Real scale(1L, ctx);
    for (std::size_t i = 0; i < s.A.rows(); ++i) {
      for (std::size_t j = 0; j < s.A.cols(); ++j) scale = max(scale, abs(Real(s.A(i, j), ctx)));
    }
    c.expect(max_abs_diff(AH0Q, s.H.matrix()) < tol * scale, "H != A H0 Q");
  }
}

void decay_suite(Check& c, Rng& rng, const PrecisionContext& ctx) {
  const Real gamma = default_gamma(ctx);
  const Real tau = decay_rate(gamma);
  const Real slack = pow10(-10, ctx);
  for (int trial = 0; trial < 12 && c.ok; ++trial) {
    const std::size_t n = 3 + trial % 5;
    const UnitVector u = random_unit(rng, n, ctx);
    PslqOptions o;
    o.trace = true;
    o.alpha = u.entries;
    o.adaptive_precision = false;
    o.max_iterations = 5000;
    const PslqRun run = run_pslq_epsilon_full(build_h(u), pow10(-(ctx.digits() / 3), ctx), gamma, o);
    c.expect(run.result.status == RelationStatus::Found, "iteration cap reached");
    const auto& t = run.result.trace;
    for (std::size_t k = 0; k < t.size(); ++k) {
      c.expect(t[k].gauge_lhs <= t[k].gauge_rhs * (Real(1L, ctx) + slack), "gauge violated");
      if (k == 0) continue;
      c.expect(t[k].h_max <= t[k - 1].h_max * (Real(1L, ctx) + slack), "h_max increased");
      c.expect(t[k - 1].pi_value > tau * t[k].pi_value * (Real(1L, ctx) - slack), "Pi decayed by less than tau");
    }
    const PslqState& s = run.final_state;
    const IntMatrix AB = multiply(s.A, s.B);
    bool identity = true;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) identity = identity && AB(i, j) == (i == j ? 1 : 0);
    }
    c.expect(identity, "A B != I");
    c.expect(abs(determinant(s.A)) == 1, "|det A| != 1");
  }
}

void oracle_suite(Check& c, Rng& rng, const PrecisionContext& ctx) {
  const Real tol = pow10(-(ctx.digits() - 10), ctx);
  for (int trial = 0; trial < 10 && c.ok; ++trial) {
    const std::size_t n = 3 + trial % 2;
    std::vector<Real> alpha;
    std::vector<long> planted;
    Real partial(ctx);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      alpha.push_back(random_entry(rng, ctx));
      planted.push_back(static_cast<long>(rng() % 7) - 3);
      partial += alpha.back() * planted.back();
    }
    planted.push_back(1 + static_cast<long>(rng() % 3));
    alpha.push_back(-partial / planted.back());
    const auto oracle = brute_force_relation(alpha, 6, tol);
    Normalized normalized = normalize_and_permute(alpha);
    if (!std::holds_alternative<UnitVector>(normalized)) continue;
    const UnitVector& u = std::get<UnitVector>(normalized);
    PslqOptions o;
    o.permutation = u.permutation;
    o.alpha = u.entries;
    o.max_iterations = 5000;
    o.adaptive_precision = false;
    const RelationResult found = run_pslq_epsilon(build_h(u), pow10(-(ctx.digits() - 10), ctx), default_gamma(ctx), o);
    c.expect(oracle.has_value(), "oracle missed the planted relation");
    c.expect(found.status == RelationStatus::Found, "no relation returned");
    if (!c.ok) break;
    c.expect(verify_relation(u.to_user_order(u.entries), found.m) < tol, "residual above the precision floor");
  }
}

}  // namespace

std::vector<SuiteResult> cmd_selftest(const SelftestOptions& options) {
  const PrecisionContext ctx(options.digits);
  const std::vector<std::pair<std::string, std::function<void(Check&, Rng&, const PrecisionContext&)>>> suites = {
      {"hyperplane identities", hyperplane_suite},
      {"norm closed forms", norms_suite},
      {"corner orthonormality", corner_suite},
      {"pi decay and gauge", decay_suite},
      {"oracle agreement", oracle_suite},
  };
  fault::set_corner_sign_flip(options.inject_corner_fault);
  std::vector<SuiteResult> out;
  for (const auto& [name, body] : suites) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(options.seed);
    Check c;
    try {
      body(c, rng, ctx);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    out.push_back({name, c.ok, c.ok ? "ok" : c.why.str(),
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
  }
  fault::set_corner_sign_flip(false);
  return out;
}

}  // namespace pslqe
