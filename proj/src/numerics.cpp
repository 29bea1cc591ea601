#include "pslqe/numerics.hpp"

#include <cctype>
#include <cmath>
#include <string>

namespace pslqe {

namespace {

constexpr double kLog2Of10 = 3.32192809488736234787;
constexpr mpfr_prec_t kGuardBits = 16;

mpfr_prec_t digits_to_bits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * kLog2Of10)) + kGuardBits;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Scratch register for sub_mul; resized only when the precision changes.
struct Scratch {
  mpfr_t value;
  Scratch() { mpfr_init2(value, MPFR_PREC_MIN); }
  ~Scratch() { mpfr_clear(value); }
  mpfr_ptr at(mpfr_prec_t bits) {
    if (mpfr_get_prec(value) != bits) mpfr_set_prec(value, bits);
    return value;
  }
};

thread_local Scratch scratch;

std::string format_scientific(mpfr_srcptr v, int significant) {
  if (mpfr_nan_p(v)) return "nan";
  if (mpfr_inf_p(v)) return mpfr_sgn(v) > 0 ? "inf" : "-inf";
  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(significant), v, MPFR_RNDN);
  std::string digits(raw);
  mpfr_free_str(raw);
  std::string out;
  if (!digits.empty() && digits.front() == '-') {
    out.push_back('-');
    digits.erase(digits.begin());
  }
  long exponent = mpfr_zero_p(v) ? 0 : static_cast<long>(exp10) - 1;
  out.push_back(digits.front());
  if (digits.size() > 1) {
    out.push_back('.');
    out.append(digits, 1, std::string::npos);
  }
  out += "e" + std::to_string(exponent);
  return out;
}

}  // namespace

PrecisionContext::PrecisionContext(int digits) : digits_(digits), bits_(0) {
  if (digits < kMinDigits) {
    throw ConfigError("precision of " + std::to_string(digits) + " digits is below the minimum of " +
                      std::to_string(kMinDigits));
  }
  bits_ = digits_to_bits(digits);
}

PrecisionContext with_precision(int digits) { return PrecisionContext(digits); }

Real::Real(const PrecisionContext& ctx) : digits_(ctx.digits()) {
  mpfr_init2(value_, ctx.bits());
  mpfr_set_zero(value_, 1);
}

Real::Real(long value, const PrecisionContext& ctx) : digits_(ctx.digits()) {
  mpfr_init2(value_, ctx.bits());
  mpfr_set_si(value_, value, MPFR_RNDN);
}

Real::Real(const BigInt& value, const PrecisionContext& ctx) : digits_(ctx.digits()) {
  mpfr_init2(value_, ctx.bits());
  mpfr_set_z(value_, value.get_mpz_t(), MPFR_RNDN);
}

Real::Real(const Rational& value, const PrecisionContext& ctx) : digits_(ctx.digits()) {
  mpfr_init2(value_, ctx.bits());
  mpfr_set_q(value_, value.get_mpq_t(), MPFR_RNDN);
}

Real Real::parse(std::string_view text, const PrecisionContext& ctx) {
  const std::string literal(trim(text));
  if (literal.empty()) throw InputError("empty numeric literal");
  Real out(ctx);
  char* end = nullptr;
  mpfr_strtofr(out.value_, literal.c_str(), &end, 10, MPFR_RNDN);
  if (end == literal.c_str() || *end != '\0' || !out.is_finite()) {
    throw InputError("not a finite decimal literal: '" + literal + "'");
  }
  return out;
}

Real Real::deserialize(std::string_view text) {
  const auto at = text.rfind('@');
  if (at == std::string_view::npos) throw InputError("missing '@digits' suffix in '" + std::string(text) + "'");
  int digits = 0;
  try {
    digits = std::stoi(std::string(text.substr(at + 1)));
  } catch (const std::exception&) {
    throw InputError("bad digit count in '" + std::string(text) + "'");
  }
  return parse(text.substr(0, at), PrecisionContext(digits));
}

Real::Real(const Real& other) : digits_(other.digits_) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept : digits_(other.digits_) {
  // Leave `other` valid (tiny, zero) so its destructor and reassignment work.
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
    digits_ = other.digits_;
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  std::swap(digits_, other.digits_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

void Real::widen_to(mpfr_prec_t bits, int digits) {
  if (bits > mpfr_get_prec(value_)) mpfr_prec_round(value_, bits, MPFR_RNDN);
  if (digits > digits_) digits_ = digits;
}

long Real::decimal_exponent() const {
  if (is_zero() || !is_finite()) return 0;
  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(digits_), value_, MPFR_RNDN);
  mpfr_free_str(raw);
  return static_cast<long>(exp10) - 1;
}

std::string Real::to_string(int significant) const {
  return format_scientific(value_, significant > 0 ? significant : digits_);
}

std::string Real::serialize() const { return to_string(digits_) + "@" + std::to_string(digits_); }

Real Real::operator-() const {
  Real out(*this);
  mpfr_neg(out.value_, out.value_, MPFR_RNDN);
  return out;
}

Real& Real::operator+=(const Real& rhs) {
  widen_to(mpfr_get_prec(rhs.value_), rhs.digits_);
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(const Real& rhs) {
  widen_to(mpfr_get_prec(rhs.value_), rhs.digits_);
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(const Real& rhs) {
  widen_to(mpfr_get_prec(rhs.value_), rhs.digits_);
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(const Real& rhs) {
  widen_to(mpfr_get_prec(rhs.value_), rhs.digits_);
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

void Real::sub_mul(const Real& x, const BigInt& q) {
  widen_to(mpfr_get_prec(x.value_), x.digits_);
  mpfr_ptr product = scratch.at(mpfr_get_prec(value_));
  mpfr_mul_z(product, x.value_, q.get_mpz_t(), MPFR_RNDN);
  mpfr_sub(value_, value_, product, MPFR_RNDN);
}

Real operator*(Real lhs, long rhs) {
  mpfr_mul_si(lhs.value_, lhs.value_, rhs, MPFR_RNDN);
  return lhs;
}

Real operator/(Real lhs, long rhs) {
  mpfr_div_si(lhs.value_, lhs.value_, rhs, MPFR_RNDN);
  return lhs;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::partial_ordering operator<=>(const Real& a, long b) {
  if (mpfr_nan_p(a.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_si(a.value_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

Real abs(const Real& x) {
  Real out(x);
  mpfr_abs(out.raw(), out.raw(), MPFR_RNDN);
  return out;
}

Real sqrt(const Real& x) {
  Real out(x);
  mpfr_sqrt(out.raw(), out.raw(), MPFR_RNDN);
  return out;
}

Real log(const Real& x) {
  Real out(x);
  mpfr_log(out.raw(), out.raw(), MPFR_RNDN);
  return out;
}

Real log10(const Real& x) {
  Real out(x);
  mpfr_log10(out.raw(), out.raw(), MPFR_RNDN);
  return out;
}

Real exp(const Real& x) {
  Real out(x);
  mpfr_exp(out.raw(), out.raw(), MPFR_RNDN);
  return out;
}

Real pow(const Real& x, long exponent) {
  Real out(x);
  mpfr_pow_si(out.raw(), x.raw(), exponent, MPFR_RNDN);
  return out;
}

Real pow(const Real& x, const Real& exponent) {
  Real out = x.bits() >= exponent.bits() ? x : exponent;
  mpfr_pow(out.raw(), x.raw(), exponent.raw(), MPFR_RNDN);
  return out;
}

Real nth_root(const Real& x, unsigned long d) {
  if (d == 0) throw InputError("root degree must be positive");
  Real out(x);
  mpfr_rootn_ui(out.raw(), x.raw(), d, MPFR_RNDN);
  return out;
}

Real min(const Real& a, const Real& b) { return (b < a) ? b : a; }
Real max(const Real& a, const Real& b) { return (a < b) ? b : a; }

Real convert(const Real& x, const PrecisionContext& ctx) {
  Real out(ctx);
  mpfr_set(out.raw(), x.raw(), MPFR_RNDN);
  return out;
}

Real pow10(long exponent, const PrecisionContext& ctx) {
  Real out(10L, ctx);
  mpfr_pow_si(out.raw(), out.raw(), exponent, MPFR_RNDN);
  return out;
}

BigInt ceil_int(const Real& x) {
  if (!x.is_finite()) throw InputError("ceil of a non-finite value");
  BigInt out;
  mpfr_get_z(out.get_mpz_t(), x.raw(), MPFR_RNDU);
  return out;
}

bool abs_below_half(const Real& x, const Real& pivot) {
  mpfr_ptr twice = scratch.at(x.bits());
  mpfr_mul_2ui(twice, x.raw(), 1, MPFR_RNDN);
  return mpfr_cmpabs(twice, pivot.raw()) < 0;
}

BigInt nearest_int(const Real& x) {
  if (!x.is_finite()) throw InputError("nearest_int of a non-finite value");
  BigInt floor_part;
  mpfr_get_z(floor_part.get_mpz_t(), x.raw(), MPFR_RNDD);
  // x - floor(x) is exact at x's own precision.
  mpfr_t frac;
  mpfr_init2(frac, std::max<mpfr_prec_t>(x.bits(), 2));
  mpfr_sub_z(frac, x.raw(), floor_part.get_mpz_t(), MPFR_RNDN);
  if (mpfr_cmp_d(frac, 0.5) >= 0) floor_part += 1;
  mpfr_clear(frac);
  return floor_part;
}

namespace {

unsigned long parse_unsigned(std::string_view text, std::string_view whole) {
  text = trim(text);
  if (text.empty()) throw UnsupportedConstant("malformed constant id '" + std::string(whole) + "'");
  unsigned long value = 0;
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw UnsupportedConstant("malformed constant id '" + std::string(whole) + "'");
    }
    value = value * 10 + static_cast<unsigned long>(c - '0');
    if (value > (1ul << 40)) throw UnsupportedConstant("constant argument too large in '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Real eval_constant(std::string_view name, const PrecisionContext& ctx) {
  const std::string_view id = trim(name);
  // Evaluate with extra guard bits, then round once to the context precision.
  const mpfr_prec_t work_bits = ctx.bits() + 32;
  mpfr_t v;
  mpfr_init2(v, work_bits);
  auto finish = [&]() {
    Real out(ctx);
    mpfr_set(out.raw(), v, MPFR_RNDN);
    mpfr_clear(v);
    return out;
  };

  if (id == "pi") {
    mpfr_const_pi(v, MPFR_RNDN);
    return finish();
  }
  if (id == "ln2") {
    mpfr_const_log2(v, MPFR_RNDN);
    return finish();
  }
  if (id == "e") {
    mpfr_set_ui(v, 1, MPFR_RNDN);
    mpfr_exp(v, v, MPFR_RNDN);
    return finish();
  }
  auto args_of = [&](std::string_view prefix) -> std::string_view {
    if (id.size() <= prefix.size() + 1 || id.substr(0, prefix.size()) != prefix || id[prefix.size()] != '(' ||
        id.back() != ')') {
      return {};
    }
    return id.substr(prefix.size() + 1, id.size() - prefix.size() - 2);
  };
  try {
    if (auto args = args_of("sqrt"); !args.empty()) {
      const unsigned long k = parse_unsigned(args, id);
      if (k < 2) throw UnsupportedConstant("sqrt(k) requires k >= 2");
      mpfr_sqrt_ui(v, k, MPFR_RNDN);
      return finish();
    }
    if (auto args = args_of("nthroot"); !args.empty()) {
      const auto comma = args.find(',');
      if (comma == std::string_view::npos) throw UnsupportedConstant("nthroot requires two arguments");
      const unsigned long k = parse_unsigned(args.substr(0, comma), id);
      const unsigned long d = parse_unsigned(args.substr(comma + 1), id);
      if (d < 1) throw UnsupportedConstant("nthroot degree must be >= 1");
      mpfr_set_ui(v, k, MPFR_RNDN);
      mpfr_rootn_ui(v, v, d, MPFR_RNDN);
      return finish();
    }
  } catch (...) {
    mpfr_clear(v);
    throw;
  }
  mpfr_clear(v);
  throw UnsupportedConstant("unknown constant '" + std::string(id) + "'");
}

}  // namespace pslqe
