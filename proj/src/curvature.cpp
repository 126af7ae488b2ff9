#include <mutex>
#include <random>

#include "conflab/tensor.hpp"
#include "detail/parallel_for.hpp"

namespace conflab::tensor {

namespace {

// base^power / d is cached per denominator.
// base^power / d are cached because the same denominators recur.
class CommonDenominator {
 public:
  CommonDenominator(const Polynomial& base, int power) : base_(base), power_(power), value_(base.pow(power)) {}

  const Polynomial& base() const { return base_; }
  int power() const { return power_; }
  const Polynomial& value() const { return value_; }

  Polynomial quotient(const Polynomial& den) const {
    {
      std::lock_guard lock(mutex_);
      for (const auto& [d, q] : cache_)
        if (d == den) return q;
    }
    Polynomial q = polynomial_exact_divide(value_, den);
    std::lock_guard lock(mutex_);
    cache_.emplace_back(den, q);
    return q;
  }

 private:
  Polynomial base_;
  int power_;
  Polynomial value_;
  mutable std::mutex mutex_;
  mutable std::vector<std::pair<Polynomial, Polynomial>> cache_;
};

// Sums unreduced fractions. Terms sharing a denominator are merged first; the
// buckets are then lifted onto one common denominator by exact division so the
// whole sum costs a single reduction.
class Combiner {
 public:
  explicit Combiner(int nvars, const CommonDenominator* common = nullptr) : nvars_(nvars), common_(common) {}

  void add(Polynomial num, const Polynomial& den) {
    if (num.is_zero()) return;
    for (auto& [d, acc] : buckets_) {
      if (d == den) {
        acc += num;
        return;
      }
    }
    buckets_.emplace_back(den, std::move(num));
  }
  void add(const RationalFunction& f, bool negate = false) {
    if (!f.is_zero()) add(negate ? -f.numerator() : f.numerator(), f.denominator());
  }
  void add_product(const RationalFunction& a, const RationalFunction& b, bool negate = false) {
    if (a.is_zero() || b.is_zero()) return;
    Polynomial num = a.numerator() * b.numerator();
    if (negate) num = -num;
    if (a.is_polynomial()) return add(std::move(num), b.denominator());
    if (b.is_polynomial()) return add(std::move(num), a.denominator());
    add(std::move(num), a.denominator() * b.denominator());
  }
  void add_derivative(const RationalFunction& f, int var, bool negate = false) {
    if (f.is_zero()) return;
    if (f.is_polynomial()) return add((negate ? -f.numerator() : f.numerator()).derivative(var), f.denominator());
    const auto& a = f.numerator();
    const auto& b = f.denominator();
    Polynomial num = a.derivative(var) * b - a * b.derivative(var);
    if (negate) num = -num;
    add(std::move(num), b * b);
  }

  RationalFunction result() const {
    std::erase_if(buckets_, [](const auto& bucket) { return bucket.second.is_zero(); });
    if (buckets_.empty()) return RationalFunction(nvars_);
    if (common_) {
      Polynomial total(nvars_);
      try {
        for (const auto& [d, num] : buckets_) total += num * common_->quotient(d);
        return RationalFunction::over_power(std::move(total), common_->base(), common_->power());
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InvalidArgument) throw;
      }
    }
    if (buckets_.size() == 1) return RationalFunction(buckets_[0].second, buckets_[0].first);
    const Polynomial* target = &buckets_[0].first;
    for (const auto& [d, num] : buckets_)
      if (d.total_degree() > target->total_degree()) target = &d;
    Polynomial total(nvars_);
    try {
      for (const auto& [d, num] : buckets_) total += d == *target ? num : num * polynomial_exact_divide(*target, d);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InvalidArgument) throw;
      RationalFunction sum(nvars_);
      for (const auto& [d, num] : buckets_) sum = sum + RationalFunction(num, d);
      return sum;
    }
    return RationalFunction(std::move(total), *target);
  }

 private:
  int nvars_;
  const CommonDenominator* common_;
  mutable std::vector<std::pair<Polynomial, Polynomial>> buckets_;
};

RationalFunction constant_rf(int nvars, const Rational& c) {
  return RationalFunction(Polynomial::constant(nvars, ExactScalar(c)));
}

}  // namespace

Field3 christoffel(const MetricSpec& g, Execution exec) {
  const int n = g.dim();
  const auto& ginv = g.inverse();
  const CommonDenominator det(g.determinant(), 1);

  // dg[(m * n + i) * n + j] = d_m g_ij
  std::vector<Polynomial> dg(n * n * n, Polynomial(n));
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dg[(m * n + i) * n + j] = g(i, j).derivative(m);
  auto d = [&](int m, int i, int j) -> const Polynomial& { return dg[(m * n + i) * n + j]; };

  const Rational half = make_rational(1, 2);
  // Gamma_{l,ij} = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
  std::vector<Polynomial> lowered(n * n * n, Polynomial(n));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        lowered[(l * n + i) * n + j] = (d(i, j, l) + d(j, i, l) - d(l, i, j)) * ExactScalar(half);

  struct Task {
    int k, i, j;
  };
  std::vector<Task> tasks;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) tasks.push_back({k, i, j});

  Field3 gamma(n, n);
  detail::parallel_for(tasks.size(), exec, [&](std::size_t t) {
    const auto [k, i, j] = tasks[t];
    Combiner acc(n, &det);
    for (int l = 0; l < n; ++l) {
      const Polynomial& low = lowered[(l * n + i) * n + j];
      if (low.is_zero() || ginv(k, l).is_zero()) continue;
      acc.add(ginv(k, l).numerator() * low, ginv(k, l).denominator());
    }
    gamma(k, i, j) = acc.result();
  });
  for (const auto& [k, i, j] : tasks)
    if (i != j) gamma(k, j, i) = gamma(k, i, j);
  return gamma;
}

Field4 riemann(const MetricSpec& g, const Field3& gamma, Execution exec) {
  const int n = g.dim();

  const CommonDenominator common(g.determinant(), 2);

  struct Task {
    int l, k, i, j;
  };
  std::vector<Task> tasks;
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) tasks.push_back({l, k, i, j});

  Field4 r(n, n);
  detail::parallel_for(tasks.size(), exec, [&](std::size_t t) {
    const auto [l, k, i, j] = tasks[t];
    Combiner acc(n, &common);
    acc.add_derivative(gamma(l, j, k), i);
    acc.add_derivative(gamma(l, i, k), j, true);
    for (int m = 0; m < n; ++m) {
      acc.add_product(gamma(l, i, m), gamma(m, j, k));
      acc.add_product(gamma(l, j, m), gamma(m, i, k), true);
    }
    r(l, k, i, j) = acc.result();
  });
  for (const auto& [l, k, i, j] : tasks) r(l, k, j, i) = -r(l, k, i, j);
  return r;
}

Field2 ricci(const Field4& riem) {
  const int n = riem.dim();
  const int nv = n;
  Field2 ric(n, nv);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Combiner acc(nv);
      for (int i = 0; i < n; ++i) acc.add(riem(i, k, i, j));
      ric(j, k) = acc.result();
    }
  return ric;
}

RationalFunction scalar_curvature(const MetricSpec& g, const Field2& ric) {
  const int n = g.dim();
  const CommonDenominator common(g.determinant(), 3);
  Combiner acc(n, &common);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) acc.add_product(g.inverse()(j, k), ric(j, k));
  return acc.result();
}

Field4 weyl(const MetricSpec& g, const Field4& riem, const Field2& ric, const RationalFunction& scalar,
            Execution exec) {
  const int n = g.dim();
  if (n < 4)
    throw Error(ErrorCode::DimensionTooSmall,
                "Weyl tensor vanishes identically in dimension 3; conformal flatness needs the Cotton tensor");
  const auto& ginv = g.inverse();
  std::vector<RationalFunction> gm;
  gm.reserve(n * n);
  for (const auto& p : g.components()) gm.emplace_back(p);
  auto metric = [&](int a, int b) -> const RationalFunction& { return gm[a * n + b]; };
  const CommonDenominator det3(g.determinant(), 3);

  // Schouten tensor P = (Ric - S / (2(n-1)) g) / (n-2), lowered and with its
  // first index raised.
  const RationalFunction trace_coef = scalar * constant_rf(n, make_rational(1, 2 * (n - 1)));
  const RationalFunction norm = constant_rf(n, make_rational(1, n - 2));
  Field2 schouten(n, n), mixed(n, n);
  detail::parallel_for(static_cast<std::size_t>(n * n), exec, [&](std::size_t t) {
    const int a = static_cast<int>(t) / n, b = static_cast<int>(t) % n;
    Combiner low(n, &det3);
    low.add_product(ric(a, b), norm);
    low.add_product(trace_coef * norm, metric(a, b), true);
    schouten(a, b) = low.result();

    Combiner up(n, &det3);
    for (int m = 0; m < n; ++m) up.add_product(ginv(a, m), ric(m, b));
    RationalFunction raised = up.result();
    Combiner acc(n, &det3);
    acc.add_product(raised, norm);
    if (a == b) acc.add_product(trace_coef, norm, true);
    mixed(a, b) = acc.result();
  });

  // W^l_{kij} = R^l_{kij} - (d^l_i P_{jk} + g_{jk} P^l_i - d^l_j P_{ik} - g_{ik} P^l_j),
  // the Kulkarni-Nomizu product P (KN) g with its last index raised.
  struct Task {
    int l, k, i, j;
  };
  std::vector<Task> tasks;
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) tasks.push_back({l, k, i, j});

  Field4 w(n, n);
  detail::parallel_for(tasks.size(), exec, [&](std::size_t t) {
    const auto [l, k, i, j] = tasks[t];
    Combiner acc(n, &det3);
    acc.add(riem(l, k, i, j));
    if (l == i) acc.add(schouten(j, k), true);
    acc.add_product(metric(j, k), mixed(l, i), true);
    if (l == j) acc.add(schouten(i, k));
    acc.add_product(metric(i, k), mixed(l, j));
    w(l, k, i, j) = acc.result();
  });
  for (const auto& [l, k, i, j] : tasks) w(l, k, j, i) = -w(l, k, i, j);
  return w;
}

CurvatureReport compute_curvature(const MetricSpec& g, Execution exec) {
  CurvatureReport rep;
  rep.inverse = g.inverse();
  rep.christoffel = christoffel(g, exec);
  rep.riemann = riemann(g, rep.christoffel, exec);
  rep.ricci = ricci(rep.riemann);
  rep.scalar = scalar_curvature(g, rep.ricci);
  if (g.dim() >= 4) rep.weyl = weyl(g, rep.riemann, rep.ricci, rep.scalar, exec);
  return rep;
}

std::vector<std::vector<Rational>> weyl_image_at(const Field4& w, std::span<const Rational> x) {
  const int n = w.dim();
  std::vector<std::vector<Rational>> vectors;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        std::vector<Rational> v(n);
        bool nonzero = false;
        for (int l = 0; l < n; ++l) {
          const auto& f = w(l, k, i, j);
          if (f.is_zero()) continue;
          v[l] = f.evaluate(x).rational_value();
          nonzero = nonzero || v[l] != 0;
        }
        if (nonzero) vectors.push_back(std::move(v));
      }
  return row_reduced_basis(std::move(vectors));
}

ConformalFlatness conformal_flatness_from(const Field4& w) {
  const int n = w.dim();
  for (std::size_t t = 0; t < w.size(); ++t) {
    const auto& f = w.at_flat(t);
    if (f.is_zero()) continue;
    const auto idx = w.unflatten(t);
    // A nonzero rational function is nonzero on a dense set; probe until hit.
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> num(-7, 7);
    std::uniform_int_distribution<int> den(1, 5);
    for (int attempt = 0; attempt < 64; ++attempt) {
      FramePoint x(n);
      for (int a = 0; a < n; ++a)
        x[a] = attempt == 0 ? Rational(1) : make_rational(num(rng), den(rng));
      try {
        ExactScalar v = f.evaluate(x);
        if (!v.is_zero()) return {false, WeylWitness{idx[0], idx[1], idx[2], idx[3], x, v}};
      } catch (const Error&) {
        // pole or non-rational denominator at this probe; try another
      }
    }
    return {false, std::nullopt};
  }
  return {true, std::nullopt};
}

ConformalFlatness is_conformally_flat(const MetricSpec& g, Execution exec) {
  if (g.dim() < 4)
    throw Error(ErrorCode::DimensionTooSmall, "Weyl criterion needs n >= 4");
  const auto rep = compute_curvature(g, exec);
  return conformal_flatness_from(*rep.weyl);
}

}  // namespace conflab::tensor
