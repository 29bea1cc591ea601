#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <string>
#include <string_view>

#include "pslqe/errors.hpp"

namespace pslqe {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Decimal working precision. Read-only after construction; every Real is
/// created against an explicit context rather than a process-wide default.
class PrecisionContext {
 public:
  static constexpr int kMinDigits = 10;

  explicit PrecisionContext(int digits);

  int digits() const noexcept { return digits_; }
  /// Binary precision backing `digits` decimal digits (over-provisioned).
  mpfr_prec_t bits() const noexcept { return bits_; }

  friend bool operator==(const PrecisionContext&, const PrecisionContext&) = default;

 private:
  int digits_;
  mpfr_prec_t bits_;
};

PrecisionContext with_precision(int digits);

/// Arbitrary-precision real number. Owns an mpfr_t; copies are deep.
/// Binary operations produce a result at the larger of the operand
/// precisions, rounded to nearest.
class Real {
 public:
  explicit Real(const PrecisionContext& ctx);
  Real(long value, const PrecisionContext& ctx);
  Real(const BigInt& value, const PrecisionContext& ctx);
  Real(const Rational& value, const PrecisionContext& ctx);

  /// Parses a decimal literal ("0.6", "-1.25e-7"). Throws InputError.
  static Real parse(std::string_view text, const PrecisionContext& ctx);
  /// Parses the `mantissa@digits` serialization produced by serialize().
  static Real deserialize(std::string_view text);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  int digits() const noexcept { return digits_; }
  mpfr_prec_t bits() const noexcept { return mpfr_get_prec(value_); }
  PrecisionContext context() const { return PrecisionContext(digits_); }

  mpfr_srcptr raw() const noexcept { return value_; }
  mpfr_ptr raw() noexcept { return value_; }

  bool is_zero() const noexcept { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const noexcept { return mpfr_number_p(value_) != 0; }
  int sign() const noexcept { return mpfr_sgn(value_); }
  double to_double() const noexcept { return mpfr_get_d(value_, MPFR_RNDN); }
  /// Base-10 exponent e with |x| = m * 10^e, 1 <= m < 10; zero maps to 0.
  long decimal_exponent() const;

  /// Scientific notation with `significant` digits (0 means all digits).
  std::string to_string(int significant = 0) const;
  /// Canonical form `d.ddd…e<exp>@<digits>`; deterministic per context.
  std::string serialize() const;

  Real operator-() const;
  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);

  /// this -= q * x, evaluated with a single rounding of the product.
  void sub_mul(const Real& x, const BigInt& q);

  friend Real operator+(Real lhs, const Real& rhs) { return lhs += rhs; }
  friend Real operator-(Real lhs, const Real& rhs) { return lhs -= rhs; }
  friend Real operator*(Real lhs, const Real& rhs) { return lhs *= rhs; }
  friend Real operator/(Real lhs, const Real& rhs) { return lhs /= rhs; }
  friend Real operator*(Real lhs, long rhs);
  friend Real operator/(Real lhs, long rhs);

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);
  friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.value_, b) == 0; }
  friend std::partial_ordering operator<=>(const Real& a, long b);

 private:
  void widen_to(mpfr_prec_t bits, int digits);

  mpfr_t value_;
  int digits_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real log(const Real& x);
Real log10(const Real& x);
Real exp(const Real& x);
Real pow(const Real& x, long exponent);
Real pow(const Real& x, const Real& exponent);
/// Real d-th root of x (d >= 1; negative x only for odd d).
Real nth_root(const Real& x, unsigned long d);
Real min(const Real& a, const Real& b);
Real max(const Real& a, const Real& b);
/// x rounded (or widened) to the precision of `ctx`.
Real convert(const Real& x, const PrecisionContext& ctx);
/// 10^exponent at the given precision.
Real pow10(long exponent, const PrecisionContext& ctx);
/// Ceiling of a finite Real, as an exact integer.
BigInt ceil_int(const Real& x);

/// 2|x| < |pivot|, evaluated exactly.
bool abs_below_half(const Real& x, const Real& pivot);

/// floor(x + 1/2): ties go toward +infinity. Exact for any finite x.
BigInt nearest_int(const Real& x);

/// Evaluates a named constant: "pi", "ln2", "e", "sqrt(k)", "nthroot(k,d)".
/// Throws UnsupportedConstant for anything else.
Real eval_constant(std::string_view name, const PrecisionContext& ctx);

}  // namespace pslqe
