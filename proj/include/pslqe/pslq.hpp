#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pslqe/hyperplane.hpp"
#include "pslqe/matrix.hpp"
#include "pslqe/numerics.hpp"

namespace pslqe {

/// Per-iteration record, produced only in trace mode.
struct IterationDiagnostic {
  std::uint64_t iteration = 0;
  std::size_t swap_row = 0;  ///< 1-based r of the Bergman swap; 0 for the initial reduction
  Real h_nn1;                ///< |h_{n,n-1}|
  Real h_max;                ///< max_j |h_{j,j}|
  Real pi_value;
  Real gauge_lhs;  ///< |z_{n-1}|, z = alpha B
  Real gauge_rhs;  ///< sqrt(a_{n-1}^2 + a_n^2) |h_{n,n-1}|
  Real z_ratio;    ///< |z_n / h_{n-1,n-1}|
};

enum class RelationStatus { Found, IterationCapExceeded, TrivialRelation };

std::string to_string(RelationStatus status);

struct RelationResult {
  RelationStatus status = RelationStatus::Found;
  std::vector<BigInt> m;  ///< user order
  std::uint64_t iterations = 0;
  std::optional<Real> final_h_nn1;
  std::optional<Real> residual_bound;  ///< sqrt(a_{n-1}^2 + a_n^2) eps2 when alpha is known
  BigInt content;                      ///< gcd of |m_i|
  bool early_exit = false;             ///< returned by the optional column check
  int working_digits = 0;              ///< precision of H at termination
  unsigned precision_raises = 0;       ///< times H was rebuilt at higher precision
  std::vector<IterationDiagnostic> trace;
};

/// The evolving (H, A, B) triple. A B = I and det A = +-1 hold exactly.
struct PslqState {
  HyperplaneMatrix H;
  IntMatrix A;
  IntMatrix B;
  std::uint64_t iteration = 0;
  Real gamma;
  /// Accumulated right-hand orthogonal factor, kept only when requested.
  std::optional<RealMatrix> q_cumulative;

  /// A = B = I, H = H0 (no reduction yet).
  static PslqState start(HyperplaneMatrix H0, const Real& gamma, bool track_q = false);

  std::size_t n() const noexcept { return H.rows(); }
  /// |h_{n,n-1}|.
  Real h_nn1() const { return abs(H(H.rows() - 1, H.cols() - 1)); }
};

struct SizeReduction {
  IntMatrix D;
  HyperplaneMatrix H;
};

/// Unimodular lower unitriangular D with D H satisfying
/// |h_ij| <= |h_jj| / 2 for j < i. Rows ascend, columns descend.
SizeReduction size_reduce(const HyperplaneMatrix& H);

struct SwapChoice {
  IntMatrix D;
  std::size_t r = 0;  ///< 0-based; rows r and r+1 are exchanged
};

/// Picks r maximizing gamma^(r+1) |h_rr| (smallest r on ties).
SwapChoice bergman_swap(const HyperplaneMatrix& H, const Real& gamma);

struct CornerStep {
  RealMatrix Q;
  HyperplaneMatrix H;
};

/// Restores lower-trapezoidal form after a swap at 0-based row r < n-2:
/// H' = H Q, with Q a rotation in the (r, r+1) column plane.
CornerStep corner(const HyperplaneMatrix& H, std::size_t r);

/// Swap, conditional corner, size reduction; returns the new state.
PslqState iterate(PslqState state);

/// prod_j max(|h_jj|, h_max / gamma^(n-1))^(n-j).
Real pi_function(const HyperplaneMatrix& H, const Real& gamma);

struct Gauge {
  Real lhs;
  Real rhs;
};

/// (|z_{n-1}|, sqrt(a_{n-1}^2 + a_n^2) |h_{n,n-1}|) with z = alpha B;
/// alpha is the (internal-order) vector H0 was built from.
Gauge invariant_gauge(const PslqState& state, std::span<const Real> alpha);

struct PslqOptions {
  /// Defaults to iteration_bound(n, gamma, eps2) (statement exponent).
  std::optional<std::uint64_t> max_iterations;
  bool trace = false;
  /// Check every column of B against sqrt(a_{n-1}^2 + a_n^2) eps2 each
  /// iteration; needs `alpha`.
  bool early_exit = false;
  /// Internal-order vector that produced H0 (enables gauge and residual bound).
  std::optional<std::vector<Real>> alpha;
  /// permutation[k] = user index of internal slot k; identity when empty.
  std::vector<std::size_t> permutation;
  /// Called after each logged diagnostic (trace mode only).
  std::function<void(const IterationDiagnostic&)> on_iteration;
  /// Keep the accumulated orthogonal factor (for consistency checks).
  bool track_q = false;
  /// Rounding error in H grows like max|A| * 10^-digits. When that floor
  /// comes within `guard_digits` of eps2, H is rebuilt from A H0 at a
  /// higher precision (H0 rebuilt from alpha when given) so the stopping
  /// test keeps its meaning.
  bool adaptive_precision = true;
  int guard_digits = 10;
  /// Re-evaluates `alpha` (internal order) at a wider precision when H is
  /// rebuilt. Without it the stored binary values are taken as exact.
  std::function<std::vector<Real>(const PrecisionContext&)> refine;
};

struct PslqRun {
  RelationResult result;
  PslqState final_state;
};

/// Size-reduces H0, then iterates while |h_{n,n-1}| >= eps2.
PslqRun run_pslq_epsilon_full(const HyperplaneMatrix& H0, const Real& eps2, const Real& gamma,
                              const PslqOptions& options = {});
RelationResult run_pslq_epsilon(const HyperplaneMatrix& H0, const Real& eps2, const Real& gamma,
                                const PslqOptions& options = {});

/// L-factor of A H0 at `ctx`: lower trapezoidal L and orthogonal G with
/// A H0 G = L, column signs matching `sign_reference` when given.
struct Refresh {
  HyperplaneMatrix H;
  RealMatrix G;
};
Refresh rebuild_h(const IntMatrix& A, const HyperplaneMatrix& H0, const PrecisionContext& ctx,
                  const HyperplaneMatrix* sign_reference = nullptr);

/// Exact-data PSLQ over rationals. Stops when the candidate column has an
/// exactly zero inner product with `alpha` (the exact form of h_{n,n-1} = 0).
RelationResult run_pslq_exact(std::span<const Rational> alpha, const Real& gamma);

namespace fault {
/// Flips the sign of the corner rotation's sine term. Self-test use only.
void set_corner_sign_flip(bool on);
}  // namespace fault

/// Default swap parameter: 2/sqrt(3) + 1e-6.
Real default_gamma(const PrecisionContext& ctx);

}  // namespace pslqe
