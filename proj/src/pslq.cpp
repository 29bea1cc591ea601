#include "pslqe/pslq.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "pslqe/error_control.hpp"

namespace pslqe {

std::string to_string(RelationStatus status) {
  switch (status) {
    case RelationStatus::Found:
      return "found";
    case RelationStatus::IterationCapExceeded:
      return "iteration_cap_exceeded";
    case RelationStatus::TrivialRelation:
      return "trivial_relation";
  }
  return "unknown";
}

Real default_gamma(const PrecisionContext& ctx) {
  // Just above the admissible limit 2/sqrt(3).
  return Real(2L, ctx) / sqrt(Real(3L, ctx)) + pow10(-6, ctx);
}

PslqState PslqState::start(HyperplaneMatrix H0, const Real& gamma, bool track_q) {
  if (!(gamma * gamma * 3L > 4L)) throw InputError("gamma must exceed 2/sqrt(3)");
  const std::size_t n = H0.rows();
  PslqState s{std::move(H0), identity_int(n), identity_int(n), 0, gamma, std::nullopt};
  if (track_q) s.q_cumulative = identity_real(n - 1, s.H.context());
  return s;
}

namespace {

std::atomic<bool> corner_sign_flip{false};

void check_pivot(const Real& h, std::size_t j) {
  if (h.is_zero()) throw DegenerateMatrix("zero diagonal entry h_{" + std::to_string(j + 1) + "," + std::to_string(j + 1) + "}");
}

// Size reduction applied to (H, A, B) in place; D is accumulated when given.
void reduce_in_place(HyperplaneMatrix& H, IntMatrix* A, IntMatrix* B, IntMatrix* D) {
  const std::size_t n = H.rows();
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = i; j-- > 0;) {
      const Real& pivot = H(j, j);
      check_pivot(pivot, j);
      if (abs_below_half(H(i, j), pivot)) continue;
      const BigInt q = nearest_int(H(i, j) / pivot);
      if (q == 0) continue;
      for (std::size_t k = 0; k <= j; ++k) H(i, k).sub_mul(H(j, k), q);
      if (A)
        for (std::size_t k = 0; k < n; ++k) (*A)(i, k) -= q * (*A)(j, k);
      if (B)
        for (std::size_t k = 0; k < n; ++k) (*B)(k, j) += q * (*B)(k, i);
      if (D)
        for (std::size_t k = 0; k < n; ++k) (*D)(i, k) -= q * (*D)(j, k);
    }
  }
}

std::vector<Real> gamma_powers(const Real& gamma, std::size_t count) {
  std::vector<Real> out;
  out.reserve(count);
  Real p = gamma;
  for (std::size_t j = 0; j < count; ++j) {
    out.push_back(p);
    p *= gamma;
  }
  return out;
}

std::size_t choose_swap(const HyperplaneMatrix& H, const std::vector<Real>& powers) {
  std::size_t best = 0;
  Real best_value = powers[0] * abs(H(0, 0));
  for (std::size_t j = 1; j < H.cols(); ++j) {
    Real value = powers[j] * abs(H(j, j));
    if (value > best_value) {
      best = j;
      best_value = std::move(value);
    }
  }
  return best;
}

// Rotation coefficients (c, s) = (beta/delta, lambda/delta) taken from row r
// of the post-swap matrix.
std::pair<Real, Real> corner_coefficients(const HyperplaneMatrix& H, std::size_t r) {
  const Real& beta = H(r, r);
  const Real& lambda = H(r, r + 1);
  const Real delta = sqrt(beta * beta + lambda * lambda);
  if (delta.is_zero()) throw DegenerateMatrix("corner step with delta = 0 at row " + std::to_string(r + 1));
  if (corner_sign_flip.load(std::memory_order_relaxed)) return {beta / delta, -(lambda / delta)};
  return {beta / delta, lambda / delta};
}

void rotate_columns(RealMatrix& M, std::size_t first_row, std::size_t r, const Real& c, const Real& s) {
  for (std::size_t i = first_row; i < M.rows(); ++i) {
    const Real x = M(i, r);
    const Real y = M(i, r + 1);
    M(i, r) = c * x + s * y;
    M(i, r + 1) = c * y - s * x;
  }
}

void apply_corner(PslqState& s, std::size_t r) {
  const auto [c, sn] = corner_coefficients(s.H, r);
  rotate_columns(s.H.matrix(), r, r, c, sn);
  s.H(r, r + 1) = Real(s.H.context());
  if (s.q_cumulative) rotate_columns(*s.q_cumulative, 0, r, c, sn);
}

std::size_t step(PslqState& s, const std::vector<Real>& powers) {
  const std::size_t n = s.n();
  const std::size_t r = choose_swap(s.H, powers);
  s.H.matrix().swap_rows(r, r + 1);
  s.A.swap_rows(r, r + 1);
  s.B.swap_cols(r, r + 1);
  if (r + 2 < n) apply_corner(s, r);
  reduce_in_place(s.H, &s.A, &s.B, nullptr);
  ++s.iteration;
  return r;
}

Real inner_with_column(std::span<const Real> alpha, const IntMatrix& B, std::size_t col) {
  Real acc(alpha.front().context());
  for (std::size_t k = 0; k < alpha.size(); ++k) acc += alpha[k] * Real(B(k, col), alpha[k].context());
  return acc;
}

Real gauge_scale(std::span<const Real> alpha) {
  const std::size_t n = alpha.size();
  return sqrt(alpha[n - 2] * alpha[n - 2] + alpha[n - 1] * alpha[n - 1]);
}

IterationDiagnostic diagnose(const PslqState& s, std::size_t swap_row, const std::optional<std::vector<Real>>& alpha) {
  const std::size_t n = s.n();
  const PrecisionContext ctx = s.H.context();
  Real h_max(ctx);
  for (std::size_t j = 0; j + 1 < n; ++j) h_max = max(h_max, abs(s.H(j, j)));
  IterationDiagnostic d{s.iteration, swap_row, s.h_nn1(), h_max, pi_function(s.H, s.gamma), Real(ctx), Real(ctx),
                        Real(ctx)};
  if (alpha) {
    const Gauge g = invariant_gauge(s, *alpha);
    d.gauge_lhs = g.lhs;
    d.gauge_rhs = g.rhs;
    d.z_ratio = abs(inner_with_column(*alpha, s.B, n - 1)) / abs(s.H(n - 2, n - 2));
  }
  return d;
}

std::vector<BigInt> column(const IntMatrix& B, std::size_t col) {
  std::vector<BigInt> out(B.rows());
  for (std::size_t k = 0; k < B.rows(); ++k) out[k] = B(k, col);
  return out;
}

std::vector<BigInt> unpermute(const std::vector<BigInt>& internal, const std::vector<std::size_t>& permutation) {
  if (permutation.empty()) return internal;
  std::vector<BigInt> out(internal.size());
  for (std::size_t k = 0; k < internal.size(); ++k) out[permutation[k]] = internal[k];
  return out;
}

BigInt content_of(const std::vector<BigInt>& m) {
  BigInt g = 0;
  for (const BigInt& x : m) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

std::size_t max_bits(const IntMatrix& A) {
  std::size_t bits = 0;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) bits = std::max(bits, mpz_sizeinbase(A(i, j).get_mpz_t(), 2));
  return bits;
}

// Digits H must carry so that n max|A| 10^-digits stays guard digits below
// 10^-target_digits.
int needed_digits(const IntMatrix& A, int target_digits, int guard) {
  const double a_digits = static_cast<double>(max_bits(A)) * std::log10(2.0);
  const double n_digits = std::log10(static_cast<double>(A.rows()));
  return static_cast<int>(std::ceil(a_digits + n_digits)) + target_digits + guard;
}

template <class StopRule>
PslqRun run_engine(const HyperplaneMatrix& H0, const Real& gamma, const PslqOptions& options, std::uint64_t cap,
                   const std::optional<Real>& early_bound, const std::optional<Real>& noise_target,
                   StopRule&& should_stop) {
  if (!H0.is_lower_trapezoidal()) throw InputError("input matrix is not lower trapezoidal");
  const std::size_t n = H0.rows();
  if (options.alpha && options.alpha->size() != n) throw InputError("alpha length does not match the matrix");
  if (!options.permutation.empty() && options.permutation.size() != n)
    throw InputError("permutation length does not match the matrix");

  PslqState state = PslqState::start(H0, gamma, options.track_q);
  std::optional<std::vector<Real>> alpha = options.alpha;
  const std::vector<Real> powers = gamma_powers(gamma, n - 1);
  RelationResult result;

  auto log = [&](std::size_t swap_row) {
    if (!options.trace) return;
    result.trace.push_back(diagnose(state, swap_row, alpha));
    if (options.on_iteration) options.on_iteration(result.trace.back());
  };

  const int target_digits = noise_target ? static_cast<int>(neg_log10_ceil(*noise_target)) : 0;
  auto keep_precision = [&] {
    if (!noise_target || !options.adaptive_precision) return;
    const int current = state.H.context().digits();
    const int needed = needed_digits(state.A, target_digits, options.guard_digits);
    if (needed <= current) return;
    const PrecisionContext wider(std::max(needed + std::max(20, current / 4), current + 1));
    // H0 carries the rounding of the original precision, which A amplifies;
    // when the data is at hand, rebuild H0 itself with the stored binary
    // values taken as exact.
    Refresh fresh = [&] {
      if (!alpha) return rebuild_h(state.A, H0, wider, &state.H);
      if (options.refine) {
        alpha = options.refine(wider);
      } else {
        for (Real& a : *alpha) a = convert(a, wider);
      }
      return rebuild_h(state.A, build_h(*alpha), wider, &state.H);
    }();
    state.H = std::move(fresh.H);
    if (state.q_cumulative) state.q_cumulative = std::move(fresh.G);
    ++result.precision_raises;
  };

  reduce_in_place(state.H, &state.A, &state.B, nullptr);
  keep_precision();
  log(0);

  std::optional<std::size_t> early_column;
  while (!should_stop(state)) {
    if (early_bound) {
      for (std::size_t c = 0; c < n && !early_column; ++c)
        if (abs(inner_with_column(*alpha, state.B, c)) < *early_bound) early_column = c;
      if (early_column) break;
    }
    if (state.iteration >= cap) {
      result.status = RelationStatus::IterationCapExceeded;
      break;
    }
    const std::size_t r = step(state, powers);
    keep_precision();
    log(r + 1);
  }

  result.m = unpermute(column(state.B, early_column.value_or(n - 2)), options.permutation);
  result.early_exit = early_column.has_value();
  result.iterations = state.iteration;
  result.final_h_nn1 = state.h_nn1();
  result.content = content_of(result.m);
  result.working_digits = state.H.context().digits();
  return PslqRun{std::move(result), std::move(state)};
}

}  // namespace

namespace fault {
void set_corner_sign_flip(bool on) { corner_sign_flip.store(on, std::memory_order_relaxed); }
}  // namespace fault

Refresh rebuild_h(const IntMatrix& A, const HyperplaneMatrix& H0, const PrecisionContext& ctx,
                  const HyperplaneMatrix* sign_reference) {
  const std::size_t n = H0.rows();
  const std::size_t m = H0.cols();
  RealMatrix wide(n, m, Real(ctx));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) wide(i, j) = convert(H0(i, j), ctx);
  RealMatrix L = multiply(A, wide);
  RealMatrix G = identity_real(m, ctx);
  // Givens rotations from the right clear everything above the diagonal.
  for (std::size_t i = 0; i < std::min(n, m); ++i) {
    for (std::size_t j = m - 1; j > i; --j) {
      const Real& x = L(i, j - 1);
      const Real& y = L(i, j);
      if (y.is_zero()) continue;
      const Real delta = sqrt(x * x + y * y);
      const Real c = x / delta;
      const Real s = y / delta;
      rotate_columns(L, i, j - 1, c, s);
      rotate_columns(G, 0, j - 1, c, s);
      L(i, j) = Real(ctx);
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    const int want = sign_reference ? (*sign_reference)(j, j).sign() : 1;
    if (want != 0 && L(j, j).sign() != 0 && L(j, j).sign() != want) {
      for (std::size_t i = 0; i < n; ++i) L(i, j) = -L(i, j);
      for (std::size_t i = 0; i < m; ++i) G(i, j) = -G(i, j);
    }
  }
  return Refresh{HyperplaneMatrix(std::move(L)), std::move(G)};
}

SizeReduction size_reduce(const HyperplaneMatrix& H) {
  SizeReduction out{identity_int(H.rows()), H};
  reduce_in_place(out.H, nullptr, nullptr, &out.D);
  return out;
}

SwapChoice bergman_swap(const HyperplaneMatrix& H, const Real& gamma) {
  if (!(gamma * gamma * 3L > 4L)) throw InputError("gamma must exceed 2/sqrt(3)");
  SwapChoice out{identity_int(H.rows()), choose_swap(H, gamma_powers(gamma, H.cols()))};
  out.D.swap_rows(out.r, out.r + 1);
  return out;
}

CornerStep corner(const HyperplaneMatrix& H, std::size_t r) {
  const std::size_t m = H.cols();
  if (r + 1 >= m) throw InputError("corner needs r < n-2 (0-based)");
  const auto [c, s] = corner_coefficients(H, r);
  CornerStep out{identity_real(m, H.context()), H};
  out.Q(r, r) = c;
  out.Q(r, r + 1) = -s;
  out.Q(r + 1, r) = s;
  out.Q(r + 1, r + 1) = c;
  rotate_columns(out.H.matrix(), r, r, c, s);
  out.H(r, r + 1) = Real(H.context());
  return out;
}

PslqState iterate(PslqState state) {
  step(state, gamma_powers(state.gamma, state.H.cols()));
  return state;
}

Real pi_function(const HyperplaneMatrix& H, const Real& gamma) {
  const std::size_t n = H.rows();
  const PrecisionContext ctx = H.context();
  Real h_max(ctx);
  for (std::size_t j = 0; j + 1 < n; ++j) h_max = max(h_max, abs(H(j, j)));
  const Real floor_value = h_max / pow(gamma, static_cast<long>(n) - 1);
  Real product(1L, ctx);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    product *= pow(max(abs(H(j, j)), floor_value), static_cast<long>(n - 1 - j));
  }
  return product;
}

Gauge invariant_gauge(const PslqState& state, std::span<const Real> alpha) {
  const std::size_t n = state.n();
  if (alpha.size() != n) throw InputError("alpha length does not match the state");
  return Gauge{abs(inner_with_column(alpha, state.B, n - 2)), gauge_scale(alpha) * state.h_nn1()};
}

PslqRun run_pslq_epsilon_full(const HyperplaneMatrix& H0, const Real& eps2, const Real& gamma,
                              const PslqOptions& options) {
  if (!(eps2 > 0L)) throw InputError("eps2 must be positive");
  const int n = static_cast<int>(H0.rows());
  const std::uint64_t cap = options.max_iterations.value_or(iteration_bound(n, gamma, eps2));
  std::optional<Real> early_bound;
  if (options.early_exit && options.alpha) early_bound = gauge_scale(*options.alpha) * eps2;

  PslqRun run = run_engine(H0, gamma, options, cap, early_bound, eps2,
                           [&](const PslqState& s) { return s.h_nn1() < eps2; });
  if (options.alpha) run.result.residual_bound = gauge_scale(*options.alpha) * eps2;
  else run.result.residual_bound = eps2;
  return run;
}

RelationResult run_pslq_epsilon(const HyperplaneMatrix& H0, const Real& eps2, const Real& gamma,
                                const PslqOptions& options) {
  return run_pslq_epsilon_full(H0, eps2, gamma, options).result;
}

RelationResult run_pslq_exact(std::span<const Rational> alpha, const Real& gamma) {
  const std::size_t n = alpha.size();
  if (n < 2) throw InputError("need at least two entries");
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] == 0) {
      RelationResult r;
      r.status = RelationStatus::TrivialRelation;
      r.m.assign(n, BigInt(0));
      r.m[i] = 1;
      r.content = 1;
      return r;
    }
  }
  const PrecisionContext ctx(std::max(gamma.digits(), 50));
  std::vector<Real> reals;
  for (const Rational& q : alpha) reals.emplace_back(q, ctx);
  Normalized normalized = normalize_and_permute(reals);
  if (std::holds_alternative<TrivialRelation>(normalized)) {
    throw InputError("entries span more than the working precision; raise the digit count");
  }
  const UnitVector& unit = std::get<UnitVector>(normalized);

  // Clear denominators so the stopping test is pure integer arithmetic.
  BigInt lcm = 1;
  for (const Rational& q : alpha) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());
  std::vector<BigInt> scaled(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Rational& q = alpha[unit.permutation[k]];
    scaled[k] = q.get_num() * (lcm / q.get_den());
  }

  const Real floor_value = pow10(-(ctx.digits() - 10), ctx);
  PslqOptions options;
  options.permutation = unit.permutation;
  options.alpha = unit.entries;
  const std::uint64_t cap = iteration_bound(static_cast<int>(n), gamma, floor_value);
  auto exact_zero = [&](const PslqState& s) {
    BigInt acc = 0;
    for (std::size_t k = 0; k < n; ++k) acc += scaled[k] * s.B(k, n - 2);
    if (acc == 0) return true;
    if (s.h_nn1() < floor_value) throw Error("working precision exhausted before an exact relation was reached");
    return false;
  };
  PslqRun run = run_engine(build_h(unit), gamma, options, cap, std::nullopt, floor_value, exact_zero);
  run.result.residual_bound = Real(ctx);
  return run.result;
}

}  // namespace pslqe
