#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "pslqe/matrix.hpp"
#include "pslqe/numerics.hpp"

namespace pslqe {

/// A unit vector with its largest-magnitude entry moved to the last slot.
/// `permutation[k]` is the user-order index of internal position k.
struct UnitVector {
  std::vector<Real> entries;
  std::vector<std::size_t> permutation;

  std::size_t size() const noexcept { return entries.size(); }
  const Real& last() const { return entries.back(); }
  PrecisionContext context() const { return entries.front().context(); }

  /// Maps a vector indexed in internal order back to user order.
  template <class T>
  std::vector<T> to_user_order(const std::vector<T>& internal) const {
    std::vector<T> out(internal);
    for (std::size_t k = 0; k < internal.size(); ++k) out[permutation[k]] = internal[k];
    return out;
  }
};

/// Returned instead of a UnitVector when some entry is (numerically) zero:
/// the unit vector e_index is then an exact relation.
struct TrivialRelation {
  std::size_t index = 0;  // 0-based, user order
  std::vector<BigInt> relation;
};

using Normalized = std::variant<UnitVector, TrivialRelation>;

/// The n x (n-1) lower-trapezoidal hyperplane matrix.
class HyperplaneMatrix {
 public:
  HyperplaneMatrix() = default;
  explicit HyperplaneMatrix(RealMatrix entries);

  std::size_t rows() const noexcept { return h_.rows(); }
  std::size_t cols() const noexcept { return h_.cols(); }
  const Real& operator()(std::size_t i, std::size_t j) const { return h_(i, j); }
  Real& operator()(std::size_t i, std::size_t j) { return h_(i, j); }
  const RealMatrix& matrix() const noexcept { return h_; }
  RealMatrix& matrix() noexcept { return h_; }
  PrecisionContext context() const { return h_(0, 0).context(); }

  bool is_lower_trapezoidal() const;
  /// The leading (n-1) x (n-1) block.
  RealMatrix principal_block() const;

 private:
  RealMatrix h_;
};

/// Scales `v` to unit length, flips the sign so the largest entry is
/// positive, and swaps the largest-magnitude entry into the last slot.
/// An entry below 10^-(digits-2) relative to the norm yields TrivialRelation.
Normalized normalize_and_permute(std::span<const Real> v);

/// s_j = sqrt(sum_{k>=j} a_k^2) for j = 1..n.
std::vector<Real> partial_sums(std::span<const Real> alpha);
inline std::vector<Real> partial_sums(const UnitVector& alpha) { return partial_sums(alpha.entries); }

/// The hyperplane matrix of a vector with nonzero entries. Scale invariant,
/// so `alpha` need not be normalized.
HyperplaneMatrix build_h(std::span<const Real> alpha);
inline HyperplaneMatrix build_h(const UnitVector& alpha) { return build_h(alpha.entries); }

/// Closed-form inverse of the principal (n-1) x (n-1) block of build_h(alpha).
RealMatrix principal_inverse(std::span<const Real> alpha);
inline RealMatrix principal_inverse(const UnitVector& alpha) { return principal_inverse(alpha.entries); }

/// (||H_[1..n-1]||_F, ||H_[1..n-1]^-1||_F) via the closed forms
/// (n-2) + a_n^2 and (n-2) + 1/a_n^2 for a unit vector.
std::pair<Real, Real> fro_norms(const UnitVector& alpha);

/// Gauss-Jordan inverse with partial pivoting. Throws DegenerateMatrix.
RealMatrix invert(const RealMatrix& m);

}  // namespace pslqe
