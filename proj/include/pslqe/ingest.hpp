#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pslqe/numerics.hpp"

namespace pslqe {

/// Parsed vector file: values plus non-fatal diagnostics.
struct VectorRead {
  std::vector<Real> values;
  std::vector<std::string> warnings;
  std::optional<int> header_digits;  ///< from an `@digits N` line
};

/// Vector file format: UTF-8, one decimal literal per line, `#` starts a
/// comment, blank lines ignored, optional `@digits N` header line.
VectorRead parse_vector(std::string_view text, const PrecisionContext& ctx);
VectorRead read_vector(const std::filesystem::path& path, const PrecisionContext& ctx);
std::string format_vector(std::span<const Real> values);

/// Evaluates an arithmetic expression over decimal literals and the
/// constant vocabulary of eval_constant (pi, ln2, e, sqrt(k), nthroot(k,d))
/// with + - * / ^ and parentheses. `^` takes an integer exponent.
Real eval_expression(std::string_view expr, const PrecisionContext& ctx);

/// (base^degree, ..., base, 1), unnormalized.
std::vector<Real> algebraic_power_vector(const Real& base, int degree);

/// v + e with ||e||_2 < eps1 strictly; e is uniform on the sphere scaled by
/// a uniform radius, fully determined by `seed`.
std::vector<Real> perturb(std::span<const Real> v, const Real& eps1, std::uint64_t seed);

/// Exhaustive search over ||m||_inf <= inf_bound. Returns the m minimizing
/// |<alpha, m>| if that minimum is below residual_tol. Ties (equal within
/// working precision) go to the smaller inf-norm, then 2-norm, then the
/// lexicographically smaller vector; the sign makes the first nonzero entry
/// positive.
std::optional<std::vector<BigInt>> brute_force_relation(std::span<const Real> alpha, int inf_bound,
                                                        const Real& residual_tol);

/// min |<alpha, m>| over ||m||_inf <= inf_bound, m not parallel to `relation`.
Real gap_estimate(std::span<const Real> alpha, int inf_bound, std::span<const BigInt> relation);

/// |<alpha, m>| at the working precision of alpha.
Real verify_relation(std::span<const Real> alpha, std::span<const BigInt> m);

/// Describes where an input vector comes from.
struct VectorSpec {
  enum class Kind { File, AlgebraicPowers, ConstantList };
  Kind kind = Kind::ConstantList;
  std::string path;                    ///< File
  std::string base;                    ///< AlgebraicPowers: expression
  int degree = 0;                      ///< AlgebraicPowers
  std::vector<std::string> constants;  ///< ConstantList: expressions

  std::string describe() const;
};

/// Parses "file:PATH", "powers:EXPR:DEGREE", "constants:E1;E2;..." or
/// "example:1|2|3".
VectorSpec parse_vector_spec(std::string_view text);

/// The vectors of the three worked examples (1: transcendental,
/// 2: degree-20 algebraic, 3: degree-49 algebraic).
VectorSpec example_spec(int which);

/// Evaluates a spec at `ctx`; file warnings are appended to `warnings`.
std::vector<Real> materialize(const VectorSpec& spec, const PrecisionContext& ctx,
                              std::vector<std::string>* warnings = nullptr);

}  // namespace pslqe
