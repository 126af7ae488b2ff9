#pragma once

// Numerical lightlike geodesics, Schwarzian derivatives, projective
// parameters and Moebius maps.

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "conflab/exact_algebra.hpp"
#include "conflab/tensor.hpp"

namespace conflab::geodesic {

/// Exact rational functions compiled to double evaluators. A component whose
/// denominator magnitude drops below pole_tolerance times the sum of its term
/// magnitudes triggers PoleOnPath.
class NumericField {
 public:
  NumericField() = default;
  NumericField(std::span<const RationalFunction> components, int nvars, ExpBinding binding = {},
               double pole_tolerance = 1e-12);

  int nvars() const { return nvars_; }
  std::size_t size() const { return comps_.size(); }
  void evaluate(std::span<const double> x, std::span<double> out) const;
  std::vector<double> evaluate(std::span<const double> x) const;

 private:
  struct Poly {
    std::vector<double> coef;
    std::vector<int> exps;  // nterms * nvars
  };
  double eval(const Poly& p, std::span<const std::vector<double>> powers, double* magnitude) const;

  int nvars_ = 0;
  int max_degree_ = 0;
  double pole_tolerance_ = 1e-12;
  std::vector<std::pair<Poly, Poly>> comps_;  // numerator, denominator (empty = 1)
};

struct GeodesicState {
  std::vector<double> x;
  std::vector<double> v;
  double s = 0.0;
};

struct IntegratorOptions {
  double pole_tolerance = 1e-12;
  /// Also compile Ric for ricci_along and projective transport.
  bool with_ricci = false;
};

/// Classical RK4 on x'' = -Gamma(x)(x', x'), with Gamma compiled once.
class GeodesicIntegrator {
 public:
  explicit GeodesicIntegrator(const tensor::MetricSpec& g, ExpBinding binding = {}, IntegratorOptions opts = {});

  int dim() const { return n_; }
  /// One step of size h. Throws PoleOnPath (also when det g changes sign
  /// across the step) or NonFinite.
  GeodesicState step(const GeodesicState& s, double h) const;
  /// nsteps + 1 states including the start. Errors carry the failing step index.
  std::vector<GeodesicState> integrate(const GeodesicState& start, double h, int nsteps) const;
  /// g_x(v, v).
  double null_norm(const GeodesicState& s) const;
  /// Ric_x(v, v). Throws InvalidArgument unless built with_ricci.
  double ricci_along(const GeodesicState& s) const;
  const tensor::MetricSpec& metric() const { return metric_; }

  /// dv/ds = -Gamma(x)(v, v).
  void acceleration(std::span<const double> x, std::span<const double> v, std::span<double> out) const;

 private:
  int n_;
  tensor::MetricSpec metric_;
  IntegratorOptions opts_;
  NumericField gamma_;
  NumericField metric_field_;
  NumericField det_;
  std::optional<NumericField> ricci_;
};

std::vector<GeodesicState> integrate_geodesic(const tensor::MetricSpec& g, const GeodesicState& start, double step,
                                              int nsteps, IntegratorOptions opts = {});

/// |g_x(v,v)| <= tol. With tol == 0 the doubles are converted to rationals
/// and the test is exact.
bool is_lightlike(const tensor::MetricSpec& g, const GeodesicState& s, double tol);
bool is_lightlike(const tensor::MetricSpec& g, std::span<const Rational> x, std::span<const Rational> v);

/// CSV with header s,x1..xn,v1..vn,nullnorm; doubles printed with 17 digits.
void write_trajectory_csv(std::ostream& os, const std::vector<GeodesicState>& path, const GeodesicIntegrator& integ);

// ---- Schwarzian derivative ------------------------------------------------

struct SchwarzianOptions {
  double derivative_floor = 1e-8;
};

/// {p,s} = p'''/p' - 3/2 (p''/p')^2 from uniformly spaced samples, by central
/// differences. Entry i of the result belongs to sample i + 2.
/// Throws InvalidArgument (< 5 samples) or DerivativeTooSmall.
std::vector<double> schwarzian_numeric(std::span<const double> samples, double step, SchwarzianOptions opts = {});

/// Exact Schwarzian of a univariate rational function.
RationalFunction schwarzian_exact(const RationalFunction& p);

/// max over interior samples of |{p,u} - ({p,s} - {u,s}) (ds/du)^2|, with {p,u}
/// assembled from the u-derivatives p_u, p_uu, p_uuu obtained by the chain rule.
double schwarzian_chain_rule_residual(std::span<const double> p, std::span<const double> u, double step,
                                      SchwarzianOptions opts = {});

// ---- projective parameters --------------------------------------------------

struct ProjectiveInit {
  double u1 = 0.0, du1 = 1.0, u2 = 1.0, du2 = 0.0;
};

struct ProjectiveSample {
  double s, p, u1, u2;
};

struct ProjectiveResult {
  std::vector<ProjectiveSample> samples;
  /// Where u2 first vanished; integration stops there.
  std::optional<double> chart_boundary;
};

/// p = u1/u2 with u'' + V u / 2 = 0, V = -2/(n-2) Ric(gamma', gamma').
ProjectiveResult solve_projective_parameter(const std::function<double(double)>& ric_along, int n, double s0,
                                            double s1, double step, ProjectiveInit init = {});

struct ProjectivePathSample {
  GeodesicState state;
  double p, u1, u2;
};

struct ProjectivePath {
  std::vector<ProjectivePathSample> samples;
  std::optional<double> chart_boundary;
};

/// Geodesic and projective parameter advanced together by one RK4 scheme.
ProjectivePath integrate_with_projective(const GeodesicIntegrator& integ, const GeodesicState& start, double step,
                                         int nsteps, ProjectiveInit init = {});

// ---- Moebius maps ----------------------------------------------------------

struct MobiusMap {
  double a = 1, b = 0, c = 0, d = 1;

  static MobiusMap scaling(double mu) { return {mu, 0, 0, 1}; }
  double operator()(double z) const { return (a * z + b) / (c * z + d); }
  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }
  /// Scaled so that |det| = 1.
  MobiusMap normalized() const;
  MobiusMap inverse() const { return {d, -b, -c, a}; }
};

MobiusMap compose(const MobiusMap& f, const MobiusMap& g);

struct ProjectiveClass {
  double multiplier;
};

/// Contracting multiplier of a hyperbolic map from trace^2/det = mu + 1/mu + 2.
/// Throws NotHyperbolic when trace^2/det <= 4 + tolerance.
ProjectiveClass mobius_multiplier(const MobiusMap& m, double tolerance = 1e-12);

/// The map sending z[i] to w[i] for three distinct points.
MobiusMap mobius_through(std::span<const double, 3> z, std::span<const double, 3> w);

struct MobiusFit {
  MobiusMap map;
  double residual;  // max |map(z_i) - w_i|
};

/// Least-squares fit of w = (a z + b) / (c z + d) by SVD of the linearized system.
MobiusFit fit_mobius(std::span<const double> z, std::span<const double> w);

}  // namespace conflab::geodesic
