#include "conflab/conformal.hpp"

#include <algorithm>
#include <cmath>

namespace conflab::conformal {

namespace {

void require_dim(int n) {
  if (n < 4) throw Error(ErrorCode::DimensionTooSmall, "diagonal maps of g0 need n >= 4, got " + std::to_string(n));
}

void require_same_shape(const DiagonalMap& a, const DiagonalMap& b) {
  if (a.dim() != b.dim())
    throw Error(ErrorCode::DimensionMismatch,
                "maps of dimension " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
}

std::string pair_name(int i, int j) { return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"; }

}  // namespace

LambdaVerdict validate_lambda(const LambdaParams& lambda) {
  const double a = lambda.alpha, b = lambda.beta;
  LambdaVerdict v;
  v.exponents = {-a + 2 * b, 3 * a, 2 * a - b, 3 * b, a + b};
  if (!std::isfinite(a) || !std::isfinite(b)) {
    v.reason = "non-finite parameter";
    return v;
  }
  if (!(a < b)) {
    v.reason = "alpha < beta fails";
  } else if (!(b < a / 2)) {
    v.reason = "beta < alpha/2 fails";
  } else if (!(a / 2 < 0)) {
    v.reason = "alpha/2 < 0 fails";
  } else {
    v.admissible = true;
  }
  v.exponents_negative = std::all_of(v.exponents.begin(), v.exponents.end(), [](double e) { return e < 0; });
  if (v.admissible && !v.exponents_negative) {
    v.admissible = false;
    v.reason = "generator exponent not negative";
  }
  return v;
}

DiagonalMap::DiagonalMap(std::vector<ExactScalar> entries, ExpBinding binding)
    : entries_(std::move(entries)), binding_(binding) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& d = entries_[i];
    if (!d.is_unit() || d.terms().begin()->second <= 0)
      throw Error(ErrorCode::InvalidArgument,
                  "diagonal entry " + std::to_string(i + 1) + " is not a positive Laurent monomial: " + d.to_string());
  }
}

DiagonalMap DiagonalMap::identity(int n, ExpBinding binding) {
  return DiagonalMap(std::vector<ExactScalar>(n, ExactScalar(1)), binding);
}

std::vector<double> DiagonalMap::numeric_entries() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& d : entries_) out.push_back(d.evaluate(binding_));
  return out;
}

DiagonalMap DiagonalMap::inverse() const {
  std::vector<ExactScalar> inv;
  inv.reserve(entries_.size());
  for (const auto& d : entries_) inv.push_back(d.unit_inverse());
  return DiagonalMap(std::move(inv), binding_);
}

DiagonalMap DiagonalMap::pow(int k) const {
  std::vector<ExactScalar> out;
  out.reserve(entries_.size());
  for (const auto& d : entries_) out.push_back(d.unit_pow(k));
  return DiagonalMap(std::move(out), binding_);
}

std::vector<double> DiagonalMap::apply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) throw Error(ErrorCode::DimensionMismatch, "point length");
  const auto d = numeric_entries();
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = d[i] * x[i];
  return y;
}

DiagonalMap compose(const DiagonalMap& a, const DiagonalMap& b) {
  require_same_shape(a, b);
  if (!(a.binding() == b.binding()))
    throw Error(ErrorCode::InvalidArgument, "exact composition needs a common exponential binding");
  std::vector<ExactScalar> out;
  out.reserve(a.dim());
  for (int i = 0; i < a.dim(); ++i) out.push_back(a.entry(i) * b.entry(i));
  return DiagonalMap(std::move(out), a.binding());
}

std::vector<double> compose_numeric(const DiagonalMap& a, const DiagonalMap& b) {
  require_same_shape(a, b);
  const auto da = a.numeric_entries(), db = b.numeric_entries();
  std::vector<double> out(da.size());
  for (std::size_t i = 0; i < da.size(); ++i) out[i] = da[i] * db[i];
  return out;
}

double max_entry_difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "entry vectors");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

DiagonalMap make_phi_lambda(const LambdaParams& lambda, int n) {
  require_dim(n);
  std::vector<ExactScalar> d(n, ExactScalar::monomial(1, 1, 1));
  d[0] = ExactScalar::monomial(1, -1, 2);
  d[1] = ExactScalar::monomial(1, 3, 0);
  d[2] = ExactScalar::monomial(1, 2, -1);
  d[3] = ExactScalar::monomial(1, 0, 3);
  return DiagonalMap(std::move(d), lambda.binding());
}

DiagonalMap make_essential_flow(double t, int n) {
  require_dim(n);
  std::vector<ExactScalar> d(n, ExactScalar::e1(-3));
  d[2] = ExactScalar(1);
  d[3] = ExactScalar::e1(-6);
  return DiagonalMap(std::move(d), ExpBinding{t / 2, 0.0});
}

std::vector<Polynomial> pullback_components(const DiagonalMap& map, const tensor::MetricSpec& g) {
  const int n = g.dim();
  if (map.dim() != n)
    throw Error(ErrorCode::DimensionMismatch,
                "map of dimension " + std::to_string(map.dim()) + " on metric of dimension " + std::to_string(n));
  std::vector<Polynomial> out(n * n, Polynomial(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Polynomial& gij = g(i, j);
      if (gij.is_zero()) continue;
      out[i * n + j] = gij.scale_variables(map.entries()) * (map.entry(i) * map.entry(j));
    }
  return out;
}

tensor::MetricSpec pullback_metric(const DiagonalMap& map, const tensor::MetricSpec& g) {
  return tensor::MetricSpec(g.declared(), pullback_components(map, g));
}

ExactScalar conformal_factor(const DiagonalMap& map, const tensor::MetricSpec& g) {
  const int n = g.dim();
  const auto pulled = pullback_components(map, g);
  std::optional<ExactScalar> factor;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Polynomial& gij = g(i, j);
      const Polynomial& pij = pulled[i * n + j];
      if (gij.is_zero()) continue;
      if (!factor) {
        const auto& lead = gij.leading_term();
        if (!lead.second.is_unit())
          throw Error(ErrorCode::InvalidArgument, "metric entry " + pair_name(i, j) + " has a non-unit leading coefficient");
        auto it = pij.terms().find(lead.first);
        if (it == pij.terms().end())
          throw Error(ErrorCode::NotConformal, "component " + pair_name(i, j) + " is not a scalar multiple");
        factor = it->second * lead.second.unit_inverse();
      }
      if (!(pij == gij * *factor))
        throw Error(ErrorCode::NotConformal, "component " + pair_name(i, j) + " scales by a different factor than " +
                                                 "the first nonzero component");
    }
  if (!factor) throw Error(ErrorCode::DegenerateMetric, "zero metric");
  return *factor;
}

std::optional<LambdaParams> recover_lambda(const DiagonalMap& map) {
  const int n = map.dim();
  if (n < 4) return std::nullopt;
  const ExactScalar& d2 = map.entry(1);
  const ExactScalar& d4 = map.entry(3);
  if (!(map.entry(0).unit_pow(3) == d2.unit_inverse() * d4 * d4)) return std::nullopt;
  if (!(map.entry(2).unit_pow(3) == d2 * d2 * d4.unit_inverse())) return std::nullopt;
  for (int j = 4; j < n; ++j)
    if (!(map.entry(j).unit_pow(3) == d2 * d4)) return std::nullopt;
  const auto num = map.numeric_entries();
  return LambdaParams{std::log(num[1]) / 3, std::log(num[3]) / 3, false};
}

std::vector<double> numeric_exponents(const DiagonalMap& map) {
  const auto num = map.numeric_entries();
  std::vector<double> out(num.size());
  std::transform(num.begin(), num.end(), out.begin(), [](double v) { return std::log(v); });
  return out;
}

}  // namespace conflab::conformal
