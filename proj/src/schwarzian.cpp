#include <algorithm>
#include <cmath>
#include <string>

#include "conflab/geodesic.hpp"

namespace conflab::geodesic {

namespace {

struct Derivs {
  double d1, d2, d3;
};

double first(std::span<const double> p, std::size_t i, double h) { return (p[i + 1] - p[i - 1]) / (2 * h); }
double second(std::span<const double> p, std::size_t i, double h) {
  return (p[i + 1] - 2 * p[i] + p[i - 1]) / (h * h);
}
double third(std::span<const double> p, std::size_t i, double h) {
  return (p[i + 2] - 2 * p[i + 1] + 2 * p[i - 1] - p[i - 2]) / (2 * h * h * h);
}

void check_samples(std::size_t size, std::size_t at_least, double step) {
  if (size < at_least)
    throw Error(ErrorCode::InvalidArgument,
                "need at least " + std::to_string(at_least) + " samples, got " + std::to_string(size));
  if (!(step > 0.0) || !std::isfinite(step)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
}

void check_derivative(double d, double floor, std::size_t i) {
  if (!(std::abs(d) >= floor))
    throw Error(ErrorCode::DerivativeTooSmall, "|derivative| below floor at sample " + std::to_string(i));
}

}  // namespace

std::vector<double> schwarzian_numeric(std::span<const double> samples, double step, SchwarzianOptions opts) {
  check_samples(samples.size(), 5, step);
  std::vector<double> out;
  out.reserve(samples.size() - 4);
  for (std::size_t i = 2; i + 2 < samples.size(); ++i) {
    const double d1 = first(samples, i, step);
    check_derivative(d1, opts.derivative_floor, i);
    const double r = second(samples, i, step) / d1;
    out.push_back(third(samples, i, step) / d1 - 1.5 * r * r);
  }
  return out;
}

RationalFunction schwarzian_exact(const RationalFunction& p) {
  if (p.nvars() != 1) throw Error(ErrorCode::InvalidArgument, "Schwarzian needs a univariate function");
  const RationalFunction d1 = p.derivative(0);
  if (d1.is_zero()) throw Error(ErrorCode::DerivativeTooSmall, "derivative vanishes identically");
  const RationalFunction d2 = d1.derivative(0);
  const RationalFunction d3 = d2.derivative(0);
  const RationalFunction r = d2 / d1;
  return d3 / d1 - RationalFunction(Polynomial::constant(1, make_rational(3, 2))) * r * r;
}

double schwarzian_chain_rule_residual(std::span<const double> p, std::span<const double> u, double step,
                                      SchwarzianOptions opts) {
  if (p.size() != u.size()) throw Error(ErrorCode::DimensionMismatch, "p and u sample counts differ");
  check_samples(p.size(), 5, step);
  const std::size_t m = p.size();
  // N = p'' u' - p' u'' on 1..m-2, so that N' is available on 2..m-3.
  std::vector<double> nn(m, 0.0);
  for (std::size_t i = 1; i + 1 < m; ++i)
    nn[i] = second(p, i, step) * first(u, i, step) - first(p, i, step) * second(u, i, step);
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < m; ++i) {
    const double p1 = first(p, i, step), p2 = second(p, i, step), p3 = third(p, i, step);
    const double u1 = first(u, i, step), u2 = second(u, i, step), u3 = third(u, i, step);
    check_derivative(p1, opts.derivative_floor, i);
    check_derivative(u1, opts.derivative_floor, i);
    const double dn = first(nn, i, step);
    const double pu = p1 / u1;
    const double puu = nn[i] / (u1 * u1 * u1);
    const double puuu = (dn * u1 - 3 * nn[i] * u2) / std::pow(u1, 5);
    const double lhs = puuu / pu - 1.5 * (puu / pu) * (puu / pu);
    const double sp = p3 / p1 - 1.5 * (p2 / p1) * (p2 / p1);
    const double su = u3 / u1 - 1.5 * (u2 / u1) * (u2 / u1);
    const double rhs = (sp - su) / (u1 * u1);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

namespace {

struct Linear {
  double u1, du1, u2, du2;
};

Linear rhs(const Linear& y, double k) { return {y.du1, k * y.u1, y.du2, k * y.u2}; }
Linear axpy(const Linear& y, double h, const Linear& d) {
  return {y.u1 + h * d.u1, y.du1 + h * d.du1, y.u2 + h * d.u2, y.du2 + h * d.du2};
}

double crossing(double s, double h, double before, double after) { return s + h * before / (before - after); }

void check_dim(int n) {
  if (n < 3) throw Error(ErrorCode::DimensionTooSmall, "projective parameters need n >= 3");
}

}  // namespace

ProjectiveResult solve_projective_parameter(const std::function<double(double)>& ric_along, int n, double s0,
                                            double s1, double step, ProjectiveInit init) {
  check_dim(n);
  if (!(step > 0.0) || !(s1 > s0) || !std::isfinite(s1 - s0))
    throw Error(ErrorCode::InvalidArgument, "need s0 < s1 and a positive step");
  const long nsteps = std::max(1L, std::lround(std::ceil((s1 - s0) / step - 1e-9)));
  const double h = (s1 - s0) / static_cast<double>(nsteps);
  // u'' = -V u / 2 = Ric u / (n - 2)
  auto k = [&](double s) {
    const double r = ric_along(s);
    if (!std::isfinite(r)) throw Error(ErrorCode::NonFinite, "Ric along the curve at s = " + std::to_string(s));
    return r / (n - 2);
  };
  ProjectiveResult out;
  Linear y{init.u1, init.du1, init.u2, init.du2};
  if (y.u2 == 0.0) {
    out.chart_boundary = s0;
    return out;
  }
  out.samples.push_back({s0, y.u1 / y.u2, y.u1, y.u2});
  for (long i = 0; i < nsteps; ++i) {
    const double s = s0 + static_cast<double>(i) * h;
    const double km = k(s + h / 2);
    const Linear a = rhs(y, k(s));
    const Linear b = rhs(axpy(y, h / 2, a), km);
    const Linear c = rhs(axpy(y, h / 2, b), km);
    const Linear d = rhs(axpy(y, h, c), k(s + h));
    const Linear next{y.u1 + h / 6 * (a.u1 + 2 * b.u1 + 2 * c.u1 + d.u1),
                      y.du1 + h / 6 * (a.du1 + 2 * b.du1 + 2 * c.du1 + d.du1),
                      y.u2 + h / 6 * (a.u2 + 2 * b.u2 + 2 * c.u2 + d.u2),
                      y.du2 + h / 6 * (a.du2 + 2 * b.du2 + 2 * c.du2 + d.du2)};
    if (next.u2 == 0.0 || (next.u2 > 0.0) != (y.u2 > 0.0)) {
      out.chart_boundary = crossing(s, h, y.u2, next.u2);
      return out;
    }
    y = next;
    const double sn = i + 1 == nsteps ? s1 : s0 + static_cast<double>(i + 1) * h;
    out.samples.push_back({sn, y.u1 / y.u2, y.u1, y.u2});
  }
  return out;
}

ProjectivePath integrate_with_projective(const GeodesicIntegrator& integ, const GeodesicState& start, double step,
                                         int nsteps, ProjectiveInit init) {
  const int n = integ.dim();
  check_dim(n);
  if (!(step > 0.0) || nsteps < 0) throw Error(ErrorCode::InvalidArgument, "need a positive step");
  struct Joint {
    GeodesicState g;
    Linear u;
  };
  auto deriv = [&](const Joint& j) {
    Joint d{{j.g.v, std::vector<double>(n), 0.0}, {}};
    integ.acceleration(j.g.x, j.g.v, d.g.v);
    d.u = rhs(j.u, integ.ricci_along(j.g) / (n - 2));
    return d;
  };
  auto shift = [&](const Joint& j, double h, const Joint& d) {
    Joint o{{std::vector<double>(n), std::vector<double>(n), j.g.s + h}, axpy(j.u, h, d.u)};
    for (int i = 0; i < n; ++i) {
      o.g.x[i] = j.g.x[i] + h * d.g.x[i];
      o.g.v[i] = j.g.v[i] + h * d.g.v[i];
    }
    return o;
  };

  ProjectivePath out;
  Joint y{start, {init.u1, init.du1, init.u2, init.du2}};
  if (y.u.u2 == 0.0) {
    out.chart_boundary = start.s;
    return out;
  }
  out.samples.push_back({y.g, y.u.u1 / y.u.u2, y.u.u1, y.u.u2});
  const double h = step;
  for (int k = 0; k < nsteps; ++k) {
    Joint next;
    try {
      const Joint a = deriv(y);
      const Joint b = deriv(shift(y, h / 2, a));
      const Joint c = deriv(shift(y, h / 2, b));
      const Joint d = deriv(shift(y, h, c));
      next = y;
      next.g.s = y.g.s + h;
      for (int i = 0; i < n; ++i) {
        next.g.x[i] += h / 6 * (a.g.x[i] + 2 * b.g.x[i] + 2 * c.g.x[i] + d.g.x[i]);
        next.g.v[i] += h / 6 * (a.g.v[i] + 2 * b.g.v[i] + 2 * c.g.v[i] + d.g.v[i]);
      }
      next.u = {y.u.u1 + h / 6 * (a.u.u1 + 2 * b.u.u1 + 2 * c.u.u1 + d.u.u1),
                y.u.du1 + h / 6 * (a.u.du1 + 2 * b.u.du1 + 2 * c.u.du1 + d.u.du1),
                y.u.u2 + h / 6 * (a.u.u2 + 2 * b.u.u2 + 2 * c.u.u2 + d.u.u2),
                y.u.du2 + h / 6 * (a.u.du2 + 2 * b.u.du2 + 2 * c.u.du2 + d.u.du2)};
      for (int i = 0; i < n; ++i)
        if (!std::isfinite(next.g.x[i]) || !std::isfinite(next.g.v[i]))
          throw Error(ErrorCode::NonFinite, "geodesic state");
    } catch (const Error& e) {
      throw Error(e.code(), "step " + std::to_string(k + 1) + ": " + e.what());
    }
    if (next.u.u2 == 0.0 || (next.u.u2 > 0.0) != (y.u.u2 > 0.0)) {
      out.chart_boundary = crossing(y.g.s, h, y.u.u2, next.u.u2);
      return out;
    }
    y = std::move(next);
    out.samples.push_back({y.g, y.u.u1 / y.u.u2, y.u.u1, y.u.u2});
  }
  return out;
}

}  // namespace conflab::geodesic
