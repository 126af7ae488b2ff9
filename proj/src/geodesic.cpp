#include "conflab/geodesic.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "detail/format.hpp"

namespace conflab::geodesic {

namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (double d : v)
    if (!std::isfinite(d)) throw Error(ErrorCode::NonFinite, std::string(what) + " is not finite");
}

void require_length(std::span<const double> v, int n, const char* what) {
  if (static_cast<int>(v.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has length " + std::to_string(v.size()) +
                                                  ", expected " + std::to_string(n));
}

}  // namespace

NumericField::NumericField(std::span<const RationalFunction> components, int nvars, ExpBinding binding,
                           double pole_tolerance)
    : nvars_(nvars), pole_tolerance_(pole_tolerance) {
  auto compile = [&](const Polynomial& p) {
    Poly out;
    if (p.nvars() != nvars) throw Error(ErrorCode::DimensionMismatch, "field component in wrong number of variables");
    for (const auto& [m, c] : p.terms()) {
      out.coef.push_back(c.evaluate(binding));
      for (int e : m) {
        out.exps.push_back(e);
        max_degree_ = std::max(max_degree_, e);
      }
    }
    return out;
  };
  comps_.reserve(components.size());
  for (const auto& f : components)
    comps_.emplace_back(compile(f.numerator()), f.is_polynomial() ? Poly{} : compile(f.denominator()));
}

double NumericField::eval(const Poly& p, std::span<const std::vector<double>> powers, double* magnitude) const {
  double sum = 0.0, mag = 0.0;
  for (std::size_t t = 0; t < p.coef.size(); ++t) {
    double term = p.coef[t];
    const int* e = p.exps.data() + t * nvars_;
    for (int i = 0; i < nvars_; ++i)
      if (e[i]) term *= powers[i][e[i]];
    sum += term;
    mag += std::abs(term);
  }
  if (magnitude) *magnitude = mag;
  return sum;
}

void NumericField::evaluate(std::span<const double> x, std::span<double> out) const {
  require_length(x, nvars_, "point");
  if (out.size() != comps_.size()) throw Error(ErrorCode::DimensionMismatch, "output buffer");
  std::vector<std::vector<double>> powers(nvars_, std::vector<double>(max_degree_ + 1, 1.0));
  for (int i = 0; i < nvars_; ++i)
    for (int k = 1; k <= max_degree_; ++k) powers[i][k] = powers[i][k - 1] * x[i];
  for (std::size_t c = 0; c < comps_.size(); ++c) {
    const auto& [num, den] = comps_[c];
    const double top = eval(num, powers, nullptr);
    if (den.coef.empty()) {
      out[c] = top;
      continue;
    }
    double mag = 0.0;
    const double bottom = eval(den, powers, &mag);
    if (std::abs(bottom) <= pole_tolerance_ * mag || bottom == 0.0)
      throw Error(ErrorCode::PoleOnPath, "denominator of component " + std::to_string(c) + " vanishes");
    out[c] = top / bottom;
  }
}

std::vector<double> NumericField::evaluate(std::span<const double> x) const {
  std::vector<double> out(comps_.size());
  evaluate(x, out);
  return out;
}

GeodesicIntegrator::GeodesicIntegrator(const tensor::MetricSpec& g, ExpBinding binding, IntegratorOptions opts)
    : n_(g.dim()), metric_(g), opts_(opts) {
  const auto gamma = tensor::christoffel(g);
  std::vector<RationalFunction> gcomp;
  gcomp.reserve(gamma.size());
  for (std::size_t k = 0; k < gamma.size(); ++k) gcomp.push_back(gamma.at_flat(k));
  gamma_ = NumericField(gcomp, n_, binding, opts.pole_tolerance);

  std::vector<RationalFunction> mcomp(g.components().begin(), g.components().end());
  metric_field_ = NumericField(mcomp, n_, binding, opts.pole_tolerance);
  const RationalFunction det(g.determinant());
  det_ = NumericField(std::span(&det, 1), n_, binding, opts.pole_tolerance);

  if (opts.with_ricci) {
    const auto ric = tensor::ricci(tensor::riemann(g, gamma));
    std::vector<RationalFunction> rcomp;
    for (std::size_t k = 0; k < ric.size(); ++k) rcomp.push_back(ric.at_flat(k));
    ricci_.emplace(rcomp, n_, binding, opts.pole_tolerance);
  }
}

void GeodesicIntegrator::acceleration(std::span<const double> x, std::span<const double> v,
                                      std::span<double> out) const {
  const auto gamma = gamma_.evaluate(x);
  for (int k = 0; k < n_; ++k) {
    double a = 0.0;
    const double* gk = gamma.data() + static_cast<std::size_t>(k) * n_ * n_;
    for (int i = 0; i < n_; ++i) {
      if (v[i] == 0.0) continue;
      for (int j = 0; j < n_; ++j) a += gk[i * n_ + j] * v[i] * v[j];
    }
    out[k] = -a;
  }
}

GeodesicState GeodesicIntegrator::step(const GeodesicState& s, double h) const {
  const int n = n_;
  std::vector<double> k1x(s.v), k1v(n), k2x(n), k2v(n), k3x(n), k3v(n), k4x(n), k4v(n), x(n), v(n);
  acceleration(s.x, s.v, k1v);
  for (int i = 0; i < n; ++i) {
    x[i] = s.x[i] + 0.5 * h * k1x[i];
    v[i] = s.v[i] + 0.5 * h * k1v[i];
  }
  k2x = v;
  acceleration(x, v, k2v);
  for (int i = 0; i < n; ++i) {
    x[i] = s.x[i] + 0.5 * h * k2x[i];
    v[i] = s.v[i] + 0.5 * h * k2v[i];
  }
  k3x = v;
  acceleration(x, v, k3v);
  for (int i = 0; i < n; ++i) {
    x[i] = s.x[i] + h * k3x[i];
    v[i] = s.v[i] + h * k3v[i];
  }
  k4x = v;
  acceleration(x, v, k4v);
  GeodesicState out{std::vector<double>(n), std::vector<double>(n), s.s + h};
  for (int i = 0; i < n; ++i) {
    out.x[i] = s.x[i] + h / 6 * (k1x[i] + 2 * k2x[i] + 2 * k3x[i] + k4x[i]);
    out.v[i] = s.v[i] + h / 6 * (k1v[i] + 2 * k2v[i] + 2 * k3v[i] + k4v[i]);
  }
  require_finite(out.x, "position");
  require_finite(out.v, "velocity");
  const double before = det_.evaluate(s.x)[0], after = det_.evaluate(out.x)[0];
  if ((before > 0.0 && after <= 0.0) || (before < 0.0 && after >= 0.0))
    throw Error(ErrorCode::PoleOnPath, "metric degenerates between s = " + std::to_string(s.s) + " and " +
                                           std::to_string(out.s));
  return out;
}

std::vector<GeodesicState> GeodesicIntegrator::integrate(const GeodesicState& start, double h, int nsteps) const {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  if (nsteps < 0) throw Error(ErrorCode::InvalidArgument, "negative step count");
  require_length(start.x, n_, "position");
  require_length(start.v, n_, "velocity");
  require_finite(start.x, "initial position");
  require_finite(start.v, "initial velocity");
  std::vector<GeodesicState> path;
  path.reserve(static_cast<std::size_t>(nsteps) + 1);
  path.push_back(start);
  for (int k = 0; k < nsteps; ++k) {
    try {
      path.push_back(step(path.back(), h));
    } catch (const Error& e) {
      throw Error(e.code(), "step " + std::to_string(k + 1) + ": " + e.what());
    }
  }
  return path;
}

double GeodesicIntegrator::null_norm(const GeodesicState& s) const {
  const auto g = metric_field_.evaluate(s.x);
  double q = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) q += g[i * n_ + j] * s.v[i] * s.v[j];
  return q;
}

double GeodesicIntegrator::ricci_along(const GeodesicState& s) const {
  if (!ricci_) throw Error(ErrorCode::InvalidArgument, "integrator built without Ricci");
  const auto r = ricci_->evaluate(s.x);
  double q = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) q += r[i * n_ + j] * s.v[i] * s.v[j];
  return q;
}

std::vector<GeodesicState> integrate_geodesic(const tensor::MetricSpec& g, const GeodesicState& start, double step,
                                              int nsteps, IntegratorOptions opts) {
  return GeodesicIntegrator(g, {}, opts).integrate(start, step, nsteps);
}

bool is_lightlike(const tensor::MetricSpec& g, const GeodesicState& s, double tol) {
  const int n = g.dim();
  require_length(s.x, n, "position");
  require_length(s.v, n, "velocity");
  if (tol == 0.0) {
    std::vector<Rational> x, v;
    for (double d : s.x) x.emplace_back(d);
    for (double d : s.v) v.emplace_back(d);
    return is_lightlike(g, x, v);
  }
  double q = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!g(i, j).is_zero()) q += g(i, j).evaluate(s.x) * s.v[i] * s.v[j];
  return std::abs(q) <= tol;
}

bool is_lightlike(const tensor::MetricSpec& g, std::span<const Rational> x, std::span<const Rational> v) {
  const int n = g.dim();
  if (static_cast<int>(x.size()) != n || static_cast<int>(v.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "state length");
  ExactScalar q;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!g(i, j).is_zero()) q += g(i, j).evaluate(x) * ExactScalar(Rational(v[i] * v[j]));
  return q.is_zero();
}

void write_trajectory_csv(std::ostream& os, const std::vector<GeodesicState>& path, const GeodesicIntegrator& integ) {
  const int n = integ.dim();
  os << "s";
  for (int i = 1; i <= n; ++i) os << ",x" << i;
  for (int i = 1; i <= n; ++i) os << ",v" << i;
  os << ",nullnorm\n";
  for (const auto& st : path) {
    os << detail::format_double(st.s);
    for (double d : st.x) os << ',' << detail::format_double(d);
    for (double d : st.v) os << ',' << detail::format_double(d);
    os << ',' << detail::format_double(integ.null_norm(st)) << '\n';
  }
  if (!os) throw Error(ErrorCode::IoError, "trajectory write failed");
}

}  // namespace conflab::geodesic
