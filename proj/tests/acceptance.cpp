// Acceptance gate: one line per criterion. Criterion 3 runs only with
// --extended. --expect-fail N[,M] names criteria known to fail; the exit
// status is zero only when the failing set matches that list exactly.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <variant>

#include "oracles.hpp"
#include "pslqe/error_control.hpp"
#include "pslqe/hyperplane.hpp"
#include "pslqe/ingest.hpp"
#include "pslqe/pslq.hpp"
#include "pslqe/report.hpp"

using namespace pslqe;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;
  void require(bool cond, const std::string& what) {
    const std::string line = "failed: " + what;
    if (!cond && std::find(notes.begin(), notes.end(), line) == notes.end()) notes.push_back(line);
    pass = pass && cond;
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string sig3(const Real& x) { return x.to_string(3); }

bool matches3(const Real& x, const char* want) { return sig3(x) == want; }

std::vector<BigInt> positive_first(std::vector<BigInt> m) {
  for (const BigInt& v : m) {
    if (v == 0) continue;
    if (v < 0)
      for (auto& w : m) w = -w;
    break;
  }
  return m;
}

std::string join(const std::vector<BigInt>& m) {
  std::string s = "(";
  for (std::size_t k = 0; k < m.size(); ++k) s += (k ? ", " : "") + m[k].get_str();
  return s + ")";
}

struct Run {
  ErrorPlan plan;
  RelationResult result;
  UnitVector unit;
  std::uint64_t proof_bound = 0;
  double seconds = 0;
};

/// Plans from `raw`, builds H from the same data, runs to eps2.
Run plan_and_run(const std::vector<Real>& raw, const char* eps, const char* G) {
  const auto t0 = Clock::now();
  const PrecisionContext ctx = raw[0].context();
  UnitVector u = std::get<UnitVector>(normalize_and_permute(raw));
  const int n = static_cast<int>(u.size());
  ErrorPlan p = plan(Real::parse(eps, ctx), Real::parse(G, ctx), n, u.last());
  PslqOptions o;
  o.alpha = u.entries;
  o.permutation = u.permutation;
  const Real gamma = default_gamma(ctx);
  RelationResult r = run_pslq_epsilon(build_h(u), p.eps2, gamma, o);
  const std::uint64_t bound = iteration_bound(n, gamma, p.eps2, true);
  return Run{std::move(p), std::move(r), std::move(u), bound, since(t0)};
}

// 1 -----------------------------------------------------------------------
Verdict criterion1() {
  Verdict v;
  const PrecisionContext ctx(200);
  const Run run = plan_and_run(oracle::example1(ctx), "1e-6", "16");
  v.require(matches3(run.plan.eps1, "2.60e-11"), "eps1 = " + sig3(run.plan.eps1));
  v.require(matches3(run.plan.eps2, "8.39e-8"), "eps2 = " + sig3(run.plan.eps2));
  v.require(run.result.status == RelationStatus::Found, "status");
  const auto m = positive_first(run.result.m);
  v.require(m == std::vector<BigInt>{1, -5, 4, -16, 1}, "m = " + join(m));
  v.require(run.result.iterations <= run.proof_bound, "iterations within bound");
  v.require(run.seconds < 10, "runtime < 10 s");
  v.note("m = " + join(m) + ", " + std::to_string(run.result.iterations) + " iterations (reference 30), bound " +
         std::to_string(run.proof_bound) + ", eps1 " + sig3(run.plan.eps1) + ", eps2 " + sig3(run.plan.eps2) + ", " +
         std::to_string(run.seconds) + " s");
  return v;
}

// 2 -----------------------------------------------------------------------
Verdict criterion2() {
  Verdict v;
  const PrecisionContext ctx(200);
  const Real x = Real(1L, ctx) / (nth_root(Real(3L, ctx), 5) + nth_root(Real(2L, ctx), 4));
  std::vector<Real> powers;
  for (long d = 20; d >= 0; --d) powers.push_back(pow(x, d));
  const Run run = plan_and_run(powers, "1e-89", "7440");
  const std::vector<BigInt> want{49, -1080, 3960, -3360, 80, -108, -6120, -7440, -80, 0, 54,
                                 -1560, 40, 0, 0, -12, -10, 0, 0, 0, 1};
  const auto m = positive_first(run.result.m);
  v.require(run.result.status == RelationStatus::Found, "status");
  v.require(m == want, "m = " + join(m));
  v.require(matches3(run.plan.eps1, "1.73e-98"), "eps1 = " + sig3(run.plan.eps1));
  v.require(matches3(run.plan.eps2, "4.99e-91"), "eps2 = " + sig3(run.plan.eps2));
  v.require(run.result.iterations <= run.proof_bound, "iterations within bound");
  v.require(run.seconds < 900, "runtime < 15 min");
  v.note(std::to_string(run.result.iterations) + " iterations (reference 3525), bound " +
         std::to_string(run.proof_bound) + ", " + std::to_string(run.seconds) + " s");
  return v;
}

// 3 -----------------------------------------------------------------------
std::vector<Real> example3_powers(const PrecisionContext& ctx) {
  const Real x = Real(1L, ctx) / (nth_root(Real(3L, ctx), 7) + nth_root(Real(2L, ctx), 7));
  std::vector<Real> powers;
  for (long d = 49; d >= 0; --d) powers.push_back(pow(x, d));
  return powers;
}

Verdict criterion3() {
  Verdict v;
  GlobalOptions g;
  g.digits = 600;
  MinpolyRequest req;
  req.constant = "1/(nthroot(3,7)+nthroot(2,7))";
  req.degree = 49;
  req.eps = "1e-487";
  req.G = "966420105";
  const RunReport rep = cmd_minpoly(req, g);
  const ErrorPlan& p = *rep.plan;
  v.require(matches3(p.eps1, "1.61e-502"), "eps1 = " + sig3(p.eps1));
  v.require(matches3(p.eps2, "3.47e-489"), "eps2 = " + sig3(p.eps2));
  v.require(rep.result.status == RelationStatus::Found, "status");
  const auto m = positive_first(rep.result.m);
  // Independent check: an integer polynomial of degree 49 with x as a
  // root to 1000 digits, coefficients within G, content 1.
  const PrecisionContext wide(1000);
  const Real r = oracle::residual(example3_powers(wide), m);
  BigInt worst = 0, content = 0;
  for (const BigInt& c : m) {
    worst = std::max(worst, BigInt(abs(c)));
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
  }
  v.require(m.size() == 50 && m[0] != 0, "degree 49");
  v.require(r < pow10(-900, wide), "x is a root to 900 digits (residual " + sig3(r) + ")");
  v.require(worst <= 966420105 && content == 1, "coefficient bound and content");
  const std::uint64_t bound = iteration_bound(50, default_gamma(wide), convert(p.eps2, wide), true);
  v.require(rep.result.iterations <= bound, "iterations within bound");
  v.require(rep.exit_code() == kExitFound, "exit code 0");
  v.note(std::to_string(rep.result.iterations) + " iterations (reference 45385), bound " + std::to_string(bound) +
         ", precision 600 -> " + std::to_string(rep.result.working_digits) + ", " +
         std::to_string(rep.wall_seconds) + " s");

  // Negative control: the same run on data known to 450 digits only,
  // far short of the planned eps1.
  const auto t0 = Clock::now();
  const PrecisionContext ctx(600);
  const UnitVector u = std::get<UnitVector>(normalize_and_permute(example3_powers(ctx)));
  std::vector<Real> rounded;
  for (const Real& a : u.entries) rounded.push_back(Real::parse(a.to_string(450), ctx));
  Real err(ctx);
  for (std::size_t k = 0; k < rounded.size(); ++k) err += (rounded[k] - u.entries[k]) * (rounded[k] - u.entries[k]);
  PslqOptions o;
  o.alpha = rounded;
  const RelationResult neg = run_pslq_epsilon(build_h(rounded), convert(p.eps2, ctx), default_gamma(ctx), o);
  const auto mneg = positive_first(u.to_user_order(neg.m));
  v.require(mneg != m, "negative control returned the correct relation");
  v.note("negative control (data error " + sig3(sqrt(err)) + ", " + std::to_string(neg.iterations) + " iterations): " +
         (mneg != m ? "incorrect, as expected" : "correct") + ", " + std::to_string(since(t0)) + " s");
  return v;
}

// 4 -----------------------------------------------------------------------
Verdict criterion4() {
  Verdict v;
  GlobalOptions g;
  g.digits = 200;
  SweepRequest s;
  s.input = example_spec(1);
  s.first = 1;
  s.last = 10;
  s.G = "16";
  s.reference = std::vector<BigInt>{1, -5, 4, -16, 1};
  const SweepResult res = cmd_sweep(s, g);
  std::string pattern;
  bool low_incorrect = true, high_correct = true;
  std::set<std::string> high_hashes;
  std::set<long> gaps;
  for (const SweepPoint& p : res.points) {
    pattern += p.outcome == Outcome::Correct ? 'C' : p.outcome == Outcome::Incorrect ? 'I' : 'X';
    if (p.i <= 4) low_incorrect = low_incorrect && p.outcome == Outcome::Incorrect;
    if (p.i >= 5) {
      high_correct = high_correct && p.outcome == Outcome::Correct;
      high_hashes.insert(p.m_hash);
    }
    if (p.eps1_digits && p.eps2_digits) gaps.insert(*p.eps1_digits - *p.eps2_digits);
  }
  v.require(high_correct && high_hashes.size() == 1, "identical correct m for i >= 5");
  v.require(gaps.size() == 1, "constant digit gap");
  v.require(low_incorrect, "incorrect for i <= 4");
  v.note("outcomes i=1..10: " + pattern + " (reference IIIICCCCCC), gap " +
         (gaps.size() == 1 ? std::to_string(*gaps.begin()) : std::string("varies")));
  return v;
}

// 5 -----------------------------------------------------------------------
using Rng = std::mt19937_64;

std::vector<Real> random_vector(Rng& rng, std::size_t n, const PrecisionContext& ctx) {
  std::vector<Real> v;
  for (std::size_t k = 0; k < n; ++k) v.push_back(oracle::uniform(rng, ctx));
  return v;
}

UnitVector random_unit(Rng& rng, std::size_t n, const PrecisionContext& ctx) {
  for (;;) {
    Normalized nz = normalize_and_permute(random_vector(rng, n, ctx));
    if (auto* u = std::get_if<UnitVector>(&nz)) return *u;
  }
}

bool part_a(const PrecisionContext& ctx, std::string& why) {
  Rng rng(101);
  const Real tol = pow10(-(ctx.digits() - 5), ctx);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + t % 11;
    const UnitVector u = random_unit(rng, n, ctx);
    const HyperplaneMatrix H = build_h(u);
    for (std::size_t j = 0; j + 1 < n; ++j) {
      Real dot(ctx);
      for (std::size_t i = 0; i < n; ++i) dot += u.entries[i] * H(i, j);
      if (!(abs(dot) < tol)) return why = "alpha H at n=" + std::to_string(n), false;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        Real g(ctx);
        for (std::size_t i = 0; i < n; ++i) g += H(i, j) * H(i, k);
        if (!(abs(g - Real(j == k ? 1L : 0L, ctx)) < tol)) return why = "H^T H at n=" + std::to_string(n), false;
      }
    }
  }
  return true;
}

bool part_b(const PrecisionContext& ctx, std::string& why) {
  Rng rng(202);
  const Real tol = pow10(-(ctx.digits() - 5), ctx);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 3 + t % 10;
    const UnitVector u = random_unit(rng, n, ctx);
    const auto h = oracle::hyperplane(u.entries);
    const std::vector<std::vector<Real>> block(h.begin(), h.end() - 1);
    const auto inv = oracle::inverse(block);
    const auto [f, finv] = fro_norms(u);
    if (!(abs(f * f - oracle::frobenius_sq(block, n - 1, n - 1)) < tol)) return why = "||H||_F", false;
    const Real finv_sq = oracle::frobenius_sq(inv, n - 1, n - 1);
    if (!(abs(finv * finv - finv_sq) < tol * finv_sq)) return why = "||H^-1||_F", false;
    const RealMatrix closed = principal_inverse(u);
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = 0; j + 1 < n; ++j)
        if (!(abs(closed(i, j) - inv[i][j]) < tol * finv_sq)) return why = "inverse entry", false;
  }
  return true;
}

bool part_c(const PrecisionContext& ctx, std::string& why) {
  Rng rng(303);
  const Real gamma = default_gamma(ctx);
  const Real tau = decay_rate(gamma);
  const Real one(1L, ctx);
  const Real slack = pow10(-(ctx.digits() - 10), ctx);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 3 + t % 6;
    const UnitVector u = random_unit(rng, n, ctx);
    const Real eps2 = pow10(-(ctx.digits() / 2), ctx);
    // Drive the state by hand to see every iteration.
    PslqState s = PslqState::start(build_h(u), gamma);
    const SizeReduction first = size_reduce(s.H);
    s.H = first.H;
    s.A = first.D;
    const auto inv = oracle::exact_inverse(first.D);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s.B(i, j) = (*inv)[i][j].get_num();
    Real last_pi = pi_function(s.H, gamma);
    Real last_hmax(ctx);
    for (std::size_t j = 0; j + 1 < n; ++j) last_hmax = max(last_hmax, abs(s.H(j, j)));
    for (int k = 0; k < 20000 && !(s.h_nn1() < eps2); ++k) {
      s = iterate(std::move(s));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i && j + 1 < n; ++j)
          if (abs(s.H(i, j)) * 2L > abs(s.H(j, j)) * (one + slack)) return why = "half bound", false;
      const IntMatrix AB = multiply(s.A, s.B);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (AB(i, j) != (i == j ? 1 : 0)) return why = "A B = I", false;
      if (abs(oracle::determinant(s.A)) != 1) return why = "|det A| = 1", false;
      Real hmax(ctx);
      for (std::size_t j = 0; j + 1 < n; ++j) hmax = max(hmax, abs(s.H(j, j)));
      if (hmax > last_hmax * (one + slack)) return why = "h_max increased", false;
      const Real pi = pi_function(s.H, gamma);
      if (!(last_pi > tau * pi * (one - slack))) return why = "Pi decay", false;
      const Gauge gauge = invariant_gauge(s, u.entries);
      if (gauge.lhs > gauge.rhs * (one + pow10(-10, ctx))) return why = "gauge", false;
      last_pi = pi;
      last_hmax = hmax;
    }
    if (!(s.h_nn1() < eps2)) return why = "run did not finish", false;
  }
  return true;
}

bool part_d(const PrecisionContext& ctx, std::string& why) {
  Rng rng(404);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + t % 11;
    const UnitVector u = random_unit(rng, n, ctx);
    // ||e|| uniform in (0, 1/(8n)) along a random direction.
    std::vector<Real> dir = oracle::unit(random_vector(rng, n, ctx));
    const Real radius = (oracle::uniform(rng, ctx) + Real(1L, ctx)) / 2L / Real(static_cast<long>(8 * n), ctx);
    std::vector<Real> bar;
    for (std::size_t k = 0; k < n; ++k) bar.push_back(u.entries[k] + dir[k] * radius);
    const auto h = oracle::hyperplane(u.entries);
    const auto hb = oracle::hyperplane(bar);
    Real d(ctx);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j + 1 < n; ++j) d += (h[i][j] - hb[i][j]) * (h[i][j] - hb[i][j]);
    const Real nn(static_cast<long>(n), ctx);
    if (!(sqrt(d) < nn * sqrt(nn) * radius * 8L)) return why = "bound exceeded at n=" + std::to_string(n), false;
  }
  return true;
}

/// A unit vector (internal order, largest entry last) with a planted
/// relation of height <= h.
UnitVector planted(Rng& rng, std::size_t n, long h, const PrecisionContext& ctx) {
  for (;;) {
    std::vector<Real> v = random_vector(rng, n - 1, ctx);
    Real partial(ctx);
    for (Real& x : v) partial += x * (static_cast<long>(rng() % (2 * h + 1)) - h);
    long last = static_cast<long>(rng() % h) + 1;
    v.push_back(-partial / last);
    Normalized nz = normalize_and_permute(v);
    if (auto* u = std::get_if<UnitVector>(&nz)) return *u;
  }
}

bool part_e(const PrecisionContext& ctx, std::string& why) {
  Rng rng(505);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 3 + t % 4;
    const UnitVector u = planted(rng, n, 9, ctx);
    const Real eps = pow10(-(8 + static_cast<long>(rng() % 20)), ctx);
    const ErrorPlan p = plan(eps, Real(9L, ctx), static_cast<int>(n), u.last());
    std::vector<Real> dir = oracle::unit(random_vector(rng, n, ctx));
    const Real radius = p.eps1 * ((oracle::uniform(rng, ctx) + Real(1L, ctx)) / 2L);
    std::vector<Real> bar;
    for (std::size_t k = 0; k < n; ++k) bar.push_back(u.entries[k] + dir[k] * radius);
    PslqOptions o;
    o.alpha = bar;
    const RelationResult r = run_pslq_epsilon(build_h(bar), p.eps2, default_gamma(ctx), o);
    if (r.status != RelationStatus::Found) return why = "no relation", false;
    Real m2(ctx);
    for (const BigInt& c : r.m) m2 += Real(c, ctx) * Real(c, ctx);
    const long double C = oracle::constant_c(static_cast<int>(n), std::stold(u.last().to_string(30)));
    const Real bound = Real::parse(std::to_string(static_cast<double>(C)), ctx) * (sqrt(m2) * p.eps3 + u.last() * p.eps2) *
                       (Real(1L, ctx) + pow10(-10, ctx));
    if (!(oracle::residual(u.entries, r.m) < bound)) return why = "residual above C(||m|| eps3 + a_n eps2)", false;
  }
  return true;
}

bool part_f(const PrecisionContext& ctx, std::string& why, int& with_relation) {
  Rng rng(606);
  const Real tol = pow10(-12, ctx);
  with_relation = 0;
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + t % 3;
    const UnitVector u = t % 2 == 0 ? planted(rng, n, 30, ctx) : random_unit(rng, n, ctx);
    std::vector<long double> ad;
    for (const Real& a : u.entries) ad.push_back(std::stold(a.to_string(25)));
    const oracle::Best best = oracle::enumerate(ad, 30);
    const bool oracle_has = best.residual < 1e-12L;
    with_relation += oracle_has;
    const ErrorPlan p = plan(pow10(-15, ctx), Real(30L, ctx), static_cast<int>(n), u.last());
    PslqOptions o;
    o.alpha = u.entries;
    const RelationResult r = run_pslq_epsilon(build_h(u), p.eps2, default_gamma(ctx), o);
    if (r.status != RelationStatus::Found) return why = "no output", false;
    BigInt height = 0;
    for (const BigInt& c : r.m) height = std::max(height, BigInt(abs(c)));
    const Real res = oracle::residual(u.entries, r.m);
    const bool pslq_has = height <= 30 && res < tol;
    if (pslq_has != oracle_has) return why = "existence disagrees on trial " + std::to_string(t), false;
    Real m2(ctx);
    for (const BigInt& c : r.m) m2 += Real(c, ctx) * Real(c, ctx);
    const Real fb = forward_bound(sqrt(m2), p.eps2, p.eps3, static_cast<int>(n), u.last());
    if (!(res < fb)) return why = "residual above the forward bound", false;
  }
  return true;
}

Verdict criterion5() {
  Verdict v;
  const PrecisionContext ctx(50);
  const auto t0 = Clock::now();
  auto part = [&](const char* tag, const std::function<bool(std::string&)>& body) {
    const auto t = Clock::now();
    std::string why;
    const bool ok = body(why);
    v.require(ok, std::string(tag) + ": " + why);
    if (ok) v.note(std::string(tag) + " ok (" + std::to_string(since(t)) + " s)");
  };
  part("5a", [&](std::string& w) { return part_a(ctx, w); });
  part("5b", [&](std::string& w) { return part_b(ctx, w); });
  part("5c", [&](std::string& w) { return part_c(ctx, w); });
  part("5d", [&](std::string& w) { return part_d(ctx, w); });
  part("5e", [&](std::string& w) { return part_e(ctx, w); });
  int with_relation = 0;
  part("5f", [&](std::string& w) { return part_f(ctx, w, with_relation); });
  v.note("5f: " + std::to_string(with_relation) + " of 30 instances carry a relation of height <= 30");
  v.require(since(t0) < 300, "suite under 5 minutes");
  return v;
}

// 6 -----------------------------------------------------------------------
Verdict criterion6() {
  Verdict v;
  const PrecisionContext ctx(60);
  const Real tol = pow10(-50, ctx);
  int cells = 0;
  for (int n : {2, 3, 5, 10, 21, 50}) {
    for (const char* a : {"0.2", "0.577", "0.9", "1"}) {
      for (long e : {5L, 20L, 89L, 487L}) {
        const Real an = Real::parse(a, ctx);
        const Real eps = pow10(-e, ctx);
        const Real G(16L, ctx);
        ErrorPlan p = [&] {
          try {
            return plan(eps, G, n, an);
          } catch (const InfeasiblePlan&) {
            return plan(eps * pow10(-10, ctx), G, n, an);
          }
        }();
        // Test-side evaluation of the thresholds.
        const Real nn(static_cast<long>(n), ctx);
        const Real C = (sqrt(nn * an * an - an * an * 2L + Real(1L, ctx)) + an) * 2L / an;
        const Real M = sqrt(nn) * G;
        const Real e1 = p.eps / (M * C * nn * sqrt(nn) * 16L);
        const Real e2 = p.eps / (C * an * 2L);
        v.require(abs(p.eps1_limit / e1 - Real(1L, ctx)) < tol, "eps1 at n=" + std::to_string(n));
        v.require(abs(p.eps2_limit / e2 - Real(1L, ctx)) < tol, "eps2 at n=" + std::to_string(n));
        const oracle::Budget b = oracle::budget(std::stold(p.eps.to_string(30)), 16.0L, n, std::stold(a));
        v.require(std::fabs(std::stold(p.eps1_limit.to_string(30)) / b.eps1_limit - 1) < 1e-12L,
                  "long double eps1 at n=" + std::to_string(n));
        ++cells;
      }
    }
  }
  struct Pair {
    const char* name;
    VectorSpec spec;
    const char* eps;
    const char* G;
    const char* e1;
    const char* e2;
  };
  const Pair pairs[] = {{"transcendental (eps 1e-6)", example_spec(1), "1e-6", "16", "2.60e-11", "8.39e-8"},
                        {"degree 20", example_spec(2), "1e-89", "7440", "1.73e-98", "4.99e-91"},
                        {"degree 49", example_spec(3), "1e-487", "966420105", "1.61e-502", "3.47e-489"}};
  std::string seen;
  for (const Pair& pr : pairs) {
    const auto u = std::get<UnitVector>(normalize_and_permute(materialize(pr.spec, ctx)));
    const ErrorPlan p = plan(Real::parse(pr.eps, ctx), Real::parse(pr.G, ctx), static_cast<int>(u.size()), u.last());
    v.require(matches3(p.eps1, pr.e1) && matches3(p.eps2, pr.e2),
              std::string(pr.name) + ": " + sig3(p.eps1) + ", " + sig3(p.eps2));
    seen += std::string(seen.empty() ? "" : "; ") + pr.name + " " + sig3(p.eps1) + "/" + sig3(p.eps2);
  }
  // The prose value eps = 1e-5 for the transcendental example lands one
  // decade off; recorded here, not asserted.
  const auto u1 = std::get<UnitVector>(normalize_and_permute(materialize(example_spec(1), ctx)));
  const ErrorPlan prose = plan(pow10(-5, ctx), Real(16L, ctx), 5, u1.last());
  v.note(std::to_string(cells) + " grid cells; " + seen + "; at eps 1e-5: " + sig3(prose.eps1) + "/" + sig3(prose.eps2));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  bool extended = false;
  std::set<int> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--extended") {
      extended = true;
    } else if (arg == "--expect-fail" && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      std::string item;
      while (std::getline(list, item, ',')) expected.insert(std::stoi(item));
    } else {
      std::cerr << "usage: acceptance [--extended] [--expect-fail N[,M...]]\n";
      return 2;
    }
  }

  struct Entry {
    int id;
    const char* title;
    Verdict (*fn)();
    bool extended_only;
  };
  const Entry entries[] = {
      {1, "transcendental example", criterion1, false},
      {2, "degree-20 minimal polynomial", criterion2, false},
      {3, "degree-49 minimal polynomial and negative control", criterion3, true},
      {4, "eps sweep pattern", criterion4, false},
      {5, "property suite", criterion5, false},
      {6, "plan formula pinning", criterion6, false},
  };

  std::set<int> failed;
  for (const Entry& e : entries) {
    if (e.extended_only && !extended) {
      std::cout << "[SKIP] " << e.id << " " << e.title << " (needs --extended)\n";
      continue;
    }
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = e.fn();
    } catch (const std::exception& ex) {
      v.require(false, std::string("exception: ") + ex.what());
    }
    if (!v.pass) failed.insert(e.id);
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << e.id << " " << e.title << " (" << since(t0) << " s)\n";
    for (const std::string& n : v.notes) std::cout << "       " << n << '\n';
    std::cout.flush();
  }
  bool as_expected = true;
  for (int id : failed) {
    if (!expected.count(id)) as_expected = false;
  }
  for (int id : expected) {
    if (!failed.count(id) && (id != 3 || extended)) {
      std::cout << "criterion " << id << " was expected to fail but passed\n";
      as_expected = false;
    }
  }
  if (!failed.empty()) {
    std::cout << "failing:";
    for (int id : failed) std::cout << ' ' << id << (expected.count(id) ? " (expected)" : "");
    std::cout << '\n';
  }
  return as_expected ? 0 : 1;
}
