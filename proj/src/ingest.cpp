#include "pslqe/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cfloat>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace pslqe {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Significant decimal digits carried by a literal such as "-0.00125e3".
int significant_digits(std::string_view literal) {
  std::string_view mantissa = literal.substr(0, literal.find_first_of("eE"));
  int count = 0;
  bool leading = true;
  for (char c : mantissa) {
    if (!std::isdigit(static_cast<unsigned char>(c))) continue;
    if (leading && c == '0') continue;
    leading = false;
    ++count;
  }
  return count;
}

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, const PrecisionContext& ctx) : text_(text), ctx_(ctx) {}

  Real parse() {
    Real value = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return value;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("expression '" + std::string(text_) + "': " + what + " at offset " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Real expression() {
    Real value = term();
    for (;;) {
      if (accept('+')) value += term();
      else if (accept('-')) value -= term();
      else return value;
    }
  }

  Real term() {
    Real value = unary();
    for (;;) {
      if (accept('*')) value *= unary();
      else if (accept('/')) {
        Real divisor = unary();
        if (divisor.is_zero()) fail("division by zero");
        value /= divisor;
      } else {
        return value;
      }
    }
  }

  Real unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Real power() {
    Real base = primary();
    if (!accept('^')) return base;
    Real exponent = unary();
    if (mpfr_integer_p(exponent.raw()) && mpfr_fits_slong_p(exponent.raw(), MPFR_RNDN)) {
      return pslqe::pow(base, mpfr_get_si(exponent.raw(), MPFR_RNDN));
    }
    return pslqe::pow(base, exponent);
  }

  Real primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Real value = expression();
      if (!accept(')')) fail("missing ')'");
      return value;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return named();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Real number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    return Real::parse(text_.substr(start, pos_ - start), ctx_);
  }

  Real named() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      const std::size_t close = text_.find(')', pos_);
      if (close == std::string_view::npos) fail("missing ')'");
      std::string call(text_.substr(start, pos_ - start));
      call.erase(std::remove_if(call.begin(), call.end(), [](unsigned char ch) { return std::isspace(ch); }),
                 call.end());
      call += std::string(text_.substr(pos_, close - pos_ + 1));
      pos_ = close + 1;
      return eval_constant(call, ctx_);
    }
    return eval_constant(text_.substr(start, pos_ - start), ctx_);
  }

  std::string_view text_;
  PrecisionContext ctx_;
  std::size_t pos_ = 0;
};

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t at = text.find(sep, start);
    out.emplace_back(trim(text.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start)));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Brute-force enumeration over the first n-1 coordinates. For each prefix
// the best last coordinates near -S/alpha_n are offered to `visit`.
template <class Visit>
void enumerate_relations(std::span<const long double> a, int bound, int spread, Visit&& visit) {
  const std::size_t n = a.size();
  std::vector<long> m(n, -bound);
  std::vector<long double> partial(n, 0.0L);  // partial[k] = sum_{i<k} a_i m_i
  for (std::size_t k = 0; k + 1 < n; ++k) partial[k + 1] = partial[k] + a[k] * static_cast<long double>(m[k]);
  const long double last = a[n - 1];
  for (;;) {
    const long double s = partial[n - 1];
    const long double t = -s / last;
    const long centre = static_cast<long>(std::floor(t));
    for (long c = centre - spread + 1; c <= centre + spread; ++c) {
      if (c < -bound || c > bound) continue;
      m[n - 1] = c;
      visit(m, std::fabs(s + last * static_cast<long double>(c)));
    }
    // Odometer over coordinates 0..n-2, least significant is n-2.
    std::size_t k = n - 1;
    for (;;) {
      if (k == 0) return;
      --k;
      if (m[k] < bound) {
        ++m[k];
        break;
      }
      m[k] = -bound;
    }
    for (std::size_t j = k; j + 1 < n; ++j) partial[j + 1] = partial[j] + a[j] * static_cast<long double>(m[j]);
  }
}

std::vector<long double> to_long_double(std::span<const Real> alpha) {
  std::vector<long double> out;
  for (const Real& x : alpha) out.push_back(mpfr_get_ld(x.raw(), MPFR_RNDN));
  return out;
}

long double rounding_slack(std::span<const long double> a, int bound) {
  long double biggest = 0.0L;
  for (long double x : a) biggest = std::max(biggest, std::fabs(x));
  return 8.0L * static_cast<long double>(a.size()) * bound * biggest * LDBL_EPSILON;
}

std::vector<BigInt> to_bigint(const std::vector<long>& m) {
  std::vector<BigInt> out;
  for (long x : m) out.emplace_back(x);
  return out;
}

void sign_normalize(std::vector<BigInt>& m) {
  for (const BigInt& x : m) {
    if (x == 0) continue;
    if (x < 0)
      for (BigInt& y : m) y = -y;
    return;
  }
}

bool parallel(const std::vector<long>& m, std::span<const BigInt> r) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j)
      if (BigInt(m[i]) * r[j] != BigInt(m[j]) * r[i]) return false;
  return true;
}

}  // namespace

VectorRead parse_vector(std::string_view text, const PrecisionContext& ctx) {
  VectorRead out;
  std::size_t line_no = 0;
  int short_literals = 0;
  int fewest_digits = ctx.digits();
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (line.starts_with("@digits")) {
      const std::string count(trim(line.substr(7)));
      try {
        std::size_t used = 0;
        out.header_digits = std::stoi(count, &used);
        if (used != count.size() || *out.header_digits <= 0) throw std::invalid_argument("digits");
      } catch (const std::exception&) {
        throw ParseError(line_no, "bad @digits header '" + std::string(line) + "'");
      }
      continue;
    }
    try {
      out.values.push_back(Real::parse(line, ctx));
    } catch (const InputError&) {
      throw ParseError(line_no, "not a decimal literal: '" + std::string(line) + "'");
    }
    const int sig = significant_digits(line);
    if (sig < ctx.digits()) {
      ++short_literals;
      fewest_digits = std::min(fewest_digits, sig);
    }
    if (end == text.size()) break;
  }
  if (out.values.empty()) throw InputError("vector file contains no values");
  if (short_literals > 0) {
    out.warnings.push_back(std::to_string(short_literals) + " literal(s) carry fewer than " +
                           std::to_string(ctx.digits()) + " significant digits (fewest: " +
                           std::to_string(fewest_digits) + "); input accuracy may be below the working precision");
  }
  if (out.header_digits && *out.header_digits < ctx.digits()) {
    out.warnings.push_back("@digits header declares " + std::to_string(*out.header_digits) +
                           " digits, below the working precision of " + std::to_string(ctx.digits()));
  }
  return out;
}

VectorRead read_vector(const std::filesystem::path& path, const PrecisionContext& ctx) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open vector file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_vector(buffer.str(), ctx);
}

std::string format_vector(std::span<const Real> values) {
  std::string out;
  if (!values.empty()) out += "@digits " + std::to_string(values.front().digits()) + "\n";
  for (const Real& v : values) out += v.to_string() + "\n";
  return out;
}

Real eval_expression(std::string_view expr, const PrecisionContext& ctx) {
  // Extra digits absorb the rounding of intermediate steps.
  const PrecisionContext work(ctx.digits() + 10);
  return convert(ExpressionParser(expr, work).parse(), ctx);
}

std::vector<Real> algebraic_power_vector(const Real& base, int degree) {
  if (degree < 1) throw InputError("degree must be at least 1");
  if (base.is_zero()) throw InputError("base must be nonzero");
  std::vector<Real> out(static_cast<std::size_t>(degree) + 1, Real(1L, base.context()));
  for (int k = degree - 1; k >= 0; --k) out[static_cast<std::size_t>(k)] = out[static_cast<std::size_t>(k) + 1] * base;
  return out;
}

std::vector<Real> perturb(std::span<const Real> v, const Real& eps1, std::uint64_t seed) {
  if (!(eps1 > 0L)) throw InputError("eps1 must be positive");
  if (v.empty()) return {};
  std::mt19937_64 rng(seed);
  std::vector<double> g(v.size());
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& x : g) {
      const double u1 = 1.0 - uniform01(rng);  // (0, 1]
      const double u2 = uniform01(rng);
      x = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
      norm2 += x * x;
    }
  } while (norm2 == 0.0);
  // Radius strictly below eps1, with room for rounding in the update.
  const double radius_fraction = uniform01(rng) * (1.0 - 0x1.0p-20);

  const PrecisionContext ctx = v.front().context();
  Real direction_norm(ctx);
  std::vector<Real> dir;
  for (double x : g) {
    Real r(ctx);
    mpfr_set_d(r.raw(), x, MPFR_RNDN);
    direction_norm += r * r;
    dir.push_back(std::move(r));
  }
  direction_norm = sqrt(direction_norm);
  Real radius(ctx);
  mpfr_set_d(radius.raw(), radius_fraction, MPFR_RNDN);
  radius *= eps1;

  std::vector<Real> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(v[i] + dir[i] * radius / direction_norm);
  return out;
}

std::optional<std::vector<BigInt>> brute_force_relation(std::span<const Real> alpha, int inf_bound,
                                                        const Real& residual_tol) {
  if (alpha.size() < 2) throw InputError("need at least two entries");
  if (inf_bound < 1) throw InputError("inf_bound must be positive");
  const std::vector<long double> a = to_long_double(alpha);
  const long double slack = rounding_slack(a, inf_bound);

  struct Candidate {
    std::vector<long> m;
    long double residual;
  };
  std::vector<Candidate> candidates;
  long double best = INFINITY;
  enumerate_relations(a, inf_bound, 1, [&](const std::vector<long>& m, long double residual) {
    if (std::all_of(m.begin(), m.end(), [](long x) { return x == 0; })) return;
    if (residual > best + 2 * slack) return;
    if (residual < best) best = residual;
    candidates.push_back({m, residual});
    if (candidates.size() > 4096) {
      std::erase_if(candidates, [&](const Candidate& c) { return c.residual > best + 2 * slack; });
    }
  });
  std::erase_if(candidates, [&](const Candidate& c) { return c.residual > best + 2 * slack; });
  if (candidates.empty()) return std::nullopt;

  // Re-rank the survivors at full precision.
  const PrecisionContext ctx = alpha.front().context();
  Real biggest(ctx);
  for (const Real& x : alpha) biggest = max(biggest, abs(x));
  const Real noise = pow10(-(ctx.digits() - 5), ctx) * Real(static_cast<long>(alpha.size()) * inf_bound, ctx) * biggest;

  struct Ranked {
    std::vector<BigInt> m;
    Real residual;
    BigInt inf_norm;
    BigInt norm2;
  };
  std::optional<Ranked> winner;
  for (const Candidate& c : candidates) {
    Ranked r{to_bigint(c.m), Real(ctx), 0, 0};
    sign_normalize(r.m);
    r.residual = verify_relation(alpha, r.m);
    for (const BigInt& x : r.m) {
      r.inf_norm = std::max(r.inf_norm, BigInt(abs(x)));
      r.norm2 += x * x;
    }
    if (!winner) {
      winner = std::move(r);
      continue;
    }
    const Real diff = r.residual - winner->residual;
    bool better = false;
    if (diff < -noise) better = true;
    else if (abs(diff) <= noise) {
      if (r.inf_norm != winner->inf_norm) better = r.inf_norm < winner->inf_norm;
      else if (r.norm2 != winner->norm2) better = r.norm2 < winner->norm2;
      else better = std::lexicographical_compare(r.m.begin(), r.m.end(), winner->m.begin(), winner->m.end());
    }
    if (better) winner = std::move(r);
  }
  if (!(winner->residual < residual_tol)) return std::nullopt;
  return winner->m;
}

Real gap_estimate(std::span<const Real> alpha, int inf_bound, std::span<const BigInt> relation) {
  if (relation.size() != alpha.size()) throw InputError("dimension mismatch");
  const std::vector<long double> a = to_long_double(alpha);
  const long double slack = rounding_slack(a, inf_bound);
  std::vector<std::pair<std::vector<long>, long double>> candidates;
  long double best = INFINITY;
  enumerate_relations(a, inf_bound, 2, [&](const std::vector<long>& m, long double residual) {
    if (residual > best + 2 * slack) return;
    if (parallel(m, relation)) return;  // includes m = 0
    best = std::min(best, residual);
    candidates.push_back({m, residual});
    if (candidates.size() > 4096) std::erase_if(candidates, [&](const auto& c) { return c.second > best + 2 * slack; });
  });
  std::optional<Real> out;
  for (const auto& [m, residual] : candidates) {
    if (residual > best + 2 * slack) continue;
    Real r = verify_relation(alpha, to_bigint(m));
    if (!out || r < *out) out = std::move(r);
  }
  if (!out) throw InputError("no non-parallel vector in range");
  return *out;
}

Real verify_relation(std::span<const Real> alpha, std::span<const BigInt> m) {
  if (alpha.size() != m.size()) {
    throw InputError("dimension mismatch: vector has " + std::to_string(alpha.size()) + " entries, relation has " +
                     std::to_string(m.size()));
  }
  if (alpha.empty()) throw InputError("empty vector");
  const PrecisionContext ctx = alpha.front().context();
  Real acc(ctx);
  for (std::size_t i = 0; i < alpha.size(); ++i) acc += alpha[i] * Real(m[i], ctx);
  return abs(acc);
}

std::string VectorSpec::describe() const {
  switch (kind) {
    case Kind::File:
      return "file:" + path;
    case Kind::AlgebraicPowers:
      return "powers:" + base + ":" + std::to_string(degree);
    case Kind::ConstantList: {
      std::string out = "constants:";
      for (std::size_t i = 0; i < constants.size(); ++i) out += (i ? ";" : "") + constants[i];
      return out;
    }
  }
  return {};
}

VectorSpec parse_vector_spec(std::string_view text) {
  text = trim(text);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw InputError("vector spec needs a 'kind:' prefix: '" + std::string(text) + "'");
  const std::string_view kind = text.substr(0, colon);
  const std::string_view rest = text.substr(colon + 1);
  VectorSpec spec;
  if (kind == "file") {
    spec.kind = VectorSpec::Kind::File;
    spec.path = std::string(rest);
    if (spec.path.empty()) throw InputError("empty file path in vector spec");
  } else if (kind == "powers") {
    const auto last = rest.rfind(':');
    if (last == std::string_view::npos) throw InputError("powers spec must be powers:EXPR:DEGREE");
    spec.kind = VectorSpec::Kind::AlgebraicPowers;
    spec.base = std::string(trim(rest.substr(0, last)));
    try {
      spec.degree = std::stoi(std::string(rest.substr(last + 1)));
    } catch (const std::exception&) {
      throw InputError("bad degree in powers spec");
    }
    if (spec.degree < 1) throw InputError("degree must be at least 1");
  } else if (kind == "constants") {
    spec.kind = VectorSpec::Kind::ConstantList;
    spec.constants = split(rest, ';');
    if (spec.constants.size() < 2) throw InputError("constants spec needs at least two ';'-separated entries");
  } else if (kind == "example") {
    try {
      return example_spec(std::stoi(std::string(rest)));
    } catch (const std::invalid_argument&) {
      throw InputError("example number must be 1, 2 or 3");
    }
  } else {
    throw InputError("unknown vector spec kind '" + std::string(kind) + "'");
  }
  return spec;
}

VectorSpec example_spec(int which) {
  VectorSpec spec;
  switch (which) {
    case 1:
      // t = 5 - 4 ln2 + 16 ln^2 2 - pi^2 closes the relation (1, -5, 4, -16, 1).
      spec.kind = VectorSpec::Kind::ConstantList;
      spec.constants = {"5 - 4*ln2 + 16*ln2^2 - pi^2", "1", "ln2", "ln2^2", "pi^2"};
      return spec;
    case 2:
      spec.kind = VectorSpec::Kind::AlgebraicPowers;
      spec.base = "1/(nthroot(3,5) + nthroot(2,4))";
      spec.degree = 20;
      return spec;
    case 3:
      spec.kind = VectorSpec::Kind::AlgebraicPowers;
      spec.base = "1/(nthroot(3,7) + nthroot(2,7))";
      spec.degree = 49;
      return spec;
    default:
      throw InputError("example number must be 1, 2 or 3");
  }
}

std::vector<Real> materialize(const VectorSpec& spec, const PrecisionContext& ctx, std::vector<std::string>* warnings) {
  switch (spec.kind) {
    case VectorSpec::Kind::File: {
      VectorRead read = read_vector(spec.path, ctx);
      if (warnings) warnings->insert(warnings->end(), read.warnings.begin(), read.warnings.end());
      return std::move(read.values);
    }
    case VectorSpec::Kind::AlgebraicPowers: {
      const PrecisionContext work(ctx.digits() + 10);
      std::vector<Real> powers = algebraic_power_vector(eval_expression(spec.base, work), spec.degree);
      std::vector<Real> out;
      for (const Real& x : powers) out.push_back(convert(x, ctx));
      return out;
    }
    case VectorSpec::Kind::ConstantList: {
      std::vector<Real> out;
      for (const std::string& c : spec.constants) out.push_back(eval_expression(c, ctx));
      return out;
    }
  }
  return {};
}

}  // namespace pslqe
