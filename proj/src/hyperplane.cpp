#include "pslqe/hyperplane.hpp"

#include <string>

namespace pslqe {

HyperplaneMatrix::HyperplaneMatrix(RealMatrix entries) : h_(std::move(entries)) {
  if (h_.rows() < 2 || h_.cols() + 1 != h_.rows()) {
    throw InputError("hyperplane matrix must be n x (n-1) with n >= 2");
  }
}

bool HyperplaneMatrix::is_lower_trapezoidal() const {
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = i + 1; j < cols(); ++j)
      if (!h_(i, j).is_zero()) return false;
  return true;
}

RealMatrix HyperplaneMatrix::principal_block() const {
  const std::size_t m = cols();
  RealMatrix out(m, m, h_(0, 0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out(i, j) = h_(i, j);
  return out;
}

Normalized normalize_and_permute(std::span<const Real> v) {
  const std::size_t n = v.size();
  if (n < 2) throw InputError("need at least two entries, got " + std::to_string(n));
  const PrecisionContext ctx = v.front().context();

  Real norm2(ctx);
  for (const Real& x : v) norm2 += x * x;
  if (norm2.is_zero()) throw InputError("all-zero input vector");
  const Real norm = sqrt(norm2);

  const Real cutoff = pow10(-(ctx.digits() - 2), ctx);
  for (std::size_t i = 0; i < n; ++i) {
    if (abs(v[i]) / norm < cutoff) {
      TrivialRelation t;
      t.index = i;
      t.relation.assign(n, BigInt(0));
      t.relation[i] = 1;
      return t;
    }
  }

  std::size_t largest = n - 1;
  for (std::size_t i = 0; i < n; ++i)
    if (abs(v[i]) > abs(v[largest])) largest = i;

  UnitVector out;
  out.entries.reserve(n);
  for (const Real& x : v) out.entries.push_back(x / norm);
  out.permutation.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.permutation[k] = k;
  if (largest != n - 1) {
    std::swap(out.entries[largest], out.entries[n - 1]);
    std::swap(out.permutation[largest], out.permutation[n - 1]);
  }
  if (out.entries.back().sign() < 0)
    for (Real& x : out.entries) x = -x;
  return out;
}

std::vector<Real> partial_sums(std::span<const Real> alpha) {
  const std::size_t n = alpha.size();
  std::vector<Real> s(n, Real(alpha.front().context()));
  Real acc(alpha.front().context());
  for (std::size_t k = n; k-- > 0;) {
    acc += alpha[k] * alpha[k];
    s[k] = sqrt(acc);
  }
  return s;
}

HyperplaneMatrix build_h(std::span<const Real> alpha) {
  const std::size_t n = alpha.size();
  if (n < 2) throw InputError("hyperplane matrix needs n >= 2");
  const PrecisionContext ctx = alpha.front().context();
  const std::vector<Real> s = partial_sums(alpha);
  for (const Real& x : alpha)
    if (x.is_zero()) throw InputError("hyperplane matrix needs nonzero entries");

  RealMatrix h(n, n - 1, Real(ctx));
  for (std::size_t j = 0; j + 1 < n; ++j) {
    h(j, j) = s[j + 1] / s[j];
    const Real denom = s[j] * s[j + 1];
    for (std::size_t i = j + 1; i < n; ++i) h(i, j) = -(alpha[i] * alpha[j]) / denom;
  }
  return HyperplaneMatrix(std::move(h));
}

RealMatrix principal_inverse(std::span<const Real> alpha) {
  const std::size_t n = alpha.size();
  const std::size_t m = n - 1;
  const PrecisionContext ctx = alpha.front().context();
  const std::vector<Real> s = partial_sums(alpha);
  RealMatrix inv(m, m, Real(ctx));
  for (std::size_t i = 0; i < m; ++i) {
    inv(i, i) = s[i] / s[i + 1];
    const Real denom = s[i] * s[i + 1];
    for (std::size_t j = 0; j < i; ++j) inv(i, j) = alpha[j] * alpha[i] / denom;
  }
  return inv;
}

std::pair<Real, Real> fro_norms(const UnitVector& alpha) {
  const std::size_t n = alpha.size();
  const PrecisionContext ctx = alpha.context();
  const Real an2 = alpha.last() * alpha.last();
  const Real base(static_cast<long>(n) - 2, ctx);
  return {sqrt(base + an2), sqrt(base + Real(1L, ctx) / an2)};
}

RealMatrix invert(const RealMatrix& m) {
  const std::size_t n = m.rows();
  const PrecisionContext ctx = m(0, 0).context();
  RealMatrix a = m;
  RealMatrix inv = identity_real(n, ctx);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (abs(a(r, col)) > abs(a(pivot, col))) pivot = r;
    if (a(pivot, col).is_zero()) throw DegenerateMatrix("singular matrix in invert()");
    a.swap_rows(pivot, col);
    inv.swap_rows(pivot, col);
    const Real p = a(col, col);
    for (std::size_t k = 0; k < n; ++k) {
      a(col, k) /= p;
      inv(col, k) /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a(r, col).is_zero()) continue;
      const Real f = a(r, col);
      for (std::size_t k = 0; k < n; ++k) {
        a(r, k) -= f * a(col, k);
        inv(r, k) -= f * inv(col, k);
      }
    }
  }
  return inv;
}

}  // namespace pslqe
