#include <algorithm>

#include "conflab/tensor.hpp"

namespace conflab::tensor {

namespace {

struct Elimination {
  RationalMatrix inverse;
  RationalFunction determinant;
  bool singular = false;
};

// Cheapest pivots first: constants, then low total degree.
int pivot_cost(const RationalFunction& f) {
  return f.numerator().total_degree() + f.denominator().total_degree() +
         static_cast<int>(f.numerator().terms().size());
}

Elimination gauss_jordan(const std::vector<Polynomial>& g, int n) {
  const int nv = g.front().nvars();
  RationalMatrix a{n, {}};
  RationalMatrix inv{n, std::vector<RationalFunction>(n * n, RationalFunction(nv))};
  a.data.reserve(n * n);
  for (const auto& p : g) a.data.emplace_back(p);
  for (int i = 0; i < n; ++i) inv(i, i) = RationalFunction(Polynomial::constant(nv, 1));

  RationalFunction det(Polynomial::constant(nv, 1));
  for (int c = 0; c < n; ++c) {
    int best = -1;
    for (int r = c; r < n; ++r) {
      if (a(r, c).is_zero()) continue;
      if (best < 0 || pivot_cost(a(r, c)) < pivot_cost(a(best, c))) best = r;
    }
    if (best < 0) return {std::move(inv), RationalFunction(nv), true};
    if (best != c) {
      for (int j = 0; j < n; ++j) {
        std::swap(a(best, j), a(c, j));
        std::swap(inv(best, j), inv(c, j));
      }
      det = -det;
    }
    const RationalFunction pivot = a(c, c);
    det = det * pivot;
    const RationalFunction pivot_inv = RationalFunction(Polynomial::constant(nv, 1)) / pivot;
    for (int j = 0; j < n; ++j) {
      if (!a(c, j).is_zero()) a(c, j) = a(c, j) * pivot_inv;
      if (!inv(c, j).is_zero()) inv(c, j) = inv(c, j) * pivot_inv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || a(r, c).is_zero()) continue;
      const RationalFunction f = a(r, c);
      for (int j = 0; j < n; ++j) {
        if (!a(c, j).is_zero()) a(r, j) = a(r, j) - f * a(c, j);
        if (!inv(c, j).is_zero()) inv(r, j) = inv(r, j) - f * inv(c, j);
      }
    }
  }
  return {std::move(inv), std::move(det), false};
}

}  // namespace

MetricSpec::MetricSpec(Signature declared, std::vector<Polynomial> components)
    : declared_(declared), g_(std::move(components)) {
  const auto size = g_.size();
  n_ = 0;
  while (static_cast<std::size_t>(n_ * n_) < size) ++n_;
  if (static_cast<std::size_t>(n_ * n_) != size || n_ < 3)
    throw Error(ErrorCode::DimensionMismatch, "metric needs n*n components with n >= 3");
  if (declared.p < 0 || declared.q < 0 || declared.p + declared.q != n_)
    throw Error(ErrorCode::InvalidSignature, "declared type (" + std::to_string(declared.p) + "," +
                                                 std::to_string(declared.q) + ") in dimension " +
                                                 std::to_string(n_));
  for (const auto& p : g_)
    if (p.nvars() != n_) throw Error(ErrorCode::DimensionMismatch, "metric entries must use x1..xn");
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (!((*this)(i, j) == (*this)(j, i)))
        throw Error(ErrorCode::InvalidArgument, "metric is not symmetric at (" + std::to_string(i + 1) +
                                                    "," + std::to_string(j + 1) + ")");
  auto elim = gauss_jordan(g_, n_);
  if (elim.singular) throw Error(ErrorCode::DegenerateMetric, "determinant vanishes identically");
  det_ = elim.determinant.numerator();
  inverse_ = std::move(elim.inverse);
}

MetricSpec MetricSpec::conformally_scaled(const Polynomial& factor) const {
  std::vector<Polynomial> out;
  out.reserve(g_.size());
  for (const auto& p : g_) out.push_back(p * factor);
  return MetricSpec(declared_, std::move(out));
}

RationalMatrix metric_inverse(const MetricSpec& g) { return g.inverse(); }

MetricSpec build_g0(int p, int q) {
  if (p < 2 || q < p)
    throw Error(ErrorCode::InvalidSignature,
                "need 2 <= p <= q, got (" + std::to_string(p) + "," + std::to_string(q) + ")");
  const int n = p + q;
  const int s = q - 2;
  std::vector<Polynomial> g(n * n, Polynomial(n));
  auto set = [&](int i, int j, const Polynomial& v) {
    g[i * n + j] = v;
    g[j * n + i] = v;
  };
  const Polynomial one = Polynomial::constant(n, 1);
  const Polynomial x3 = Polynomial::variable(n, 2);
  set(0, 0, x3 * x3);
  set(0, 1, one);
  set(2, 3, one);
  for (int j = 4; j < n; ++j) {
    const bool positive = j + 1 <= 4 + s;
    set(j, j, Polynomial::constant(n, positive ? 1 : -1));
  }
  return MetricSpec({p, q}, std::move(g));
}

MetricSpec build_flat_metric(int p, int q) {
  const int n = p + q;
  std::vector<Polynomial> g(n * n, Polynomial(n));
  for (int i = 0; i < n; ++i) g[i * n + i] = Polynomial::constant(n, i < p ? -1 : 1);
  return MetricSpec({p, q}, std::move(g));
}

Signature signature_at(const MetricSpec& g, std::span<const Rational> x) {
  const int n = g.dim();
  if (static_cast<int>(x.size()) != n) throw Error(ErrorCode::DimensionMismatch, "point dimension");
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = g(i, j).evaluate(x).rational_value();

  Signature sig;
  for (int s = 0; s < n; ++s) {
    int pivot = -1;
    for (int i = s; i < n && pivot < 0; ++i)
      if (a[i][i] != 0) pivot = i;
    if (pivot < 0) {
      // Zero diagonal: add a row/column with a nonzero coupling, giving 2*a_ij on the diagonal.
      for (int i = s; i < n && pivot < 0; ++i)
        for (int j = s; j < n && pivot < 0; ++j)
          if (i != j && a[i][j] != 0) {
            for (int c = 0; c < n; ++c) a[i][c] += a[j][c];
            for (int r = 0; r < n; ++r) a[r][i] += a[r][j];
            pivot = i;
          }
    }
    if (pivot < 0) throw Error(ErrorCode::DegenerateAtPoint, "metric is singular at the point");
    if (pivot != s) {
      std::swap(a[pivot], a[s]);
      for (int r = 0; r < n; ++r) std::swap(a[r][pivot], a[r][s]);
    }
    const Rational d = a[s][s];
    (d < 0 ? sig.p : sig.q) += 1;
    // Row operations alone leave the symmetric Schur complement in the trailing block.
    for (int r = s + 1; r < n; ++r) {
      if (a[r][s] == 0) continue;
      const Rational f = a[r][s] / d;
      for (int c = s; c < n; ++c) a[r][c] -= f * a[s][c];
    }
  }
  return sig;
}

std::vector<std::vector<Rational>> row_reduced_basis(std::vector<std::vector<Rational>> rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    const Rational lead = rows[rank][c];
    for (auto& v : rows[rank]) v /= lead;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      const Rational f = rows[r][c];
      for (std::size_t k = 0; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  rows.resize(rank);
  return rows;
}

}  // namespace conflab::tensor
