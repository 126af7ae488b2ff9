#include "conflab/quotient.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "detail/format.hpp"
#include "detail/parallel_for.hpp"

namespace conflab::quotient {

namespace {

double sup_norm(const Point& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

conformal::LambdaParams checked_lambda(const conformal::LambdaParams& lambda) {
  const auto v = conformal::validate_lambda(lambda);
  if (!v.admissible) throw Error(ErrorCode::InadmissibleLambda, v.reason);
  return lambda;
}

}  // namespace

QuotientModel::QuotientModel(int p, int q, conformal::LambdaParams lambda)
    : lambda_(checked_lambda(lambda)),
      metric_(tensor::build_g0(p, q)),
      generator_(conformal::make_phi_lambda(lambda_, metric_.dim())),
      entries_(generator_.numeric_entries()) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!(entries_[i] > 0.0 && entries_[i] < 1.0))
      throw Error(ErrorCode::InadmissibleLambda, "generator entry " + std::to_string(i + 1) + " not in ]0,1[");
    log_entries_.push_back(std::log(entries_[i]));
  }
  if (!(conformal::conformal_factor(generator_, metric_) == ExactScalar::monomial(1, 2, 2)))
    throw Error(ErrorCode::NotConformal, "generator factor differs from E1^2 E2^2");
}

Point QuotientModel::apply_power(const Point& x, int k) const {
  if (static_cast<int>(x.size()) != dim()) throw Error(ErrorCode::DimensionMismatch, "point length");
  Point y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = k == 0 ? x[i] : x[i] * std::exp(k * log_entries_[i]);
  return y;
}

QuotientModel build_model(int p, int q, conformal::LambdaParams lambda) { return QuotientModel(p, q, lambda); }

Representative project_point(const QuotientModel& m, const Point& x) {
  if (static_cast<int>(x.size()) != m.dim()) throw Error(ErrorCode::DimensionMismatch, "point length");
  const double norm = sup_norm(x);
  if (norm == 0.0) throw Error(ErrorCode::ZeroVector, "cannot project the origin");
  if (!std::isfinite(norm)) throw Error(ErrorCode::NonFinite, "point is not finite");
  // Start from the k at which the slowest-contracting coordinate alone would
  // cross 1, then walk.
  const double slowest = *std::max_element(m.log_entries().begin(), m.log_entries().end());
  int k = static_cast<int>(std::floor(std::log(norm) / -slowest));
  k = std::max(k - 1, 0);
  auto norm_at = [&](int j) { return sup_norm(m.apply_power(x, j)); };
  while (norm_at(k) >= 1.0) ++k;
  while (norm_at(k - 1) < 1.0) --k;
  return {m.apply_power(x, k), k};
}

ShiftTable::ShiftTable(const QuotientModel& m, int window) : window_(window), n_(m.dim()) {
  if (window < 0) throw Error(ErrorCode::InvalidArgument, "negative group window");
  table_.resize(static_cast<std::size_t>(2 * window + 1) * n_);
  for (int k = -window; k <= window; ++k)
    for (int i = 0; i < n_; ++i)
      table_[static_cast<std::size_t>(k + window) * n_ + i] = std::exp(k * m.log_entries()[i]);
}

double quotient_distance(const ShiftTable& shifts, const Point& a, const Point& b) {
  const int n = shifts.dim();
  double best = std::numeric_limits<double>::infinity();
  for (int k = -shifts.window(); k <= shifts.window(); ++k) {
    const double* f = shifts.factors(k);
    const double* g = shifts.factors(-k);
    double ab = 0.0, ba = 0.0;
    for (int i = 0; i < n; ++i) {
      const double u = a[i] - f[i] * b[i];
      const double w = g[i] * a[i] - b[i];
      ab += u * u;
      ba += w * w;
    }
    best = std::min(best, 0.5 * (std::sqrt(ab) + std::sqrt(ba)));
  }
  return best;
}

double quotient_distance(const QuotientModel& m, const Point& a, const Point& b, int window) {
  if (static_cast<int>(a.size()) != m.dim() || static_cast<int>(b.size()) != m.dim())
    throw Error(ErrorCode::DimensionMismatch, "point length");
  return quotient_distance(ShiftTable(m, window), a, b);
}

double hausdorff_distance(const ShiftTable& shifts, const std::vector<Point>& a, const std::vector<Point>& b,
                          Execution exec) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::InvalidArgument, "empty sample");
  // directed distances of every point, reduced afterwards in index order
  std::vector<double> from_a(a.size()), from_b(b.size());
  detail::parallel_for(a.size() + b.size(), exec, [&](std::size_t idx) {
    const bool in_a = idx < a.size();
    const Point& x = in_a ? a[idx] : b[idx - a.size()];
    const auto& other = in_a ? b : a;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : other) best = std::min(best, quotient_distance(shifts, x, y));
    (in_a ? from_a[idx] : from_b[idx - a.size()]) = best;
  });
  return std::max(*std::max_element(from_a.begin(), from_a.end()), *std::max_element(from_b.begin(), from_b.end()));
}

LeafVerdict invariant_leaf_check(const QuotientModel& m, int samples, unsigned seed) {
  const int n = m.dim();
  LeafVerdict v;
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(1, 9), den(1, 4), sign(0, 1);
  auto rational = [&] { return make_rational((sign(rng) ? 1 : -1) * num(rng), den(rng)); };

  v.sigma_preserved = true;
  for (int t = 0; t < samples; ++t) {
    Point x(n, 0.0);
    x[1] = rational().get_d();
    x[3] = rational().get_d();
    const Point y = m.apply_power(x, 1);
    for (int i = 0; i < n; ++i)
      if ((i == 1 || i == 3) ? y[i] == 0.0 : y[i] != 0.0) v.sigma_preserved = false;
  }

  v.offset_leaves_moved = true;
  for (int c = 0; c < n; ++c) {
    if (c == 1 || c == 3) continue;
    for (int t = 0; t < samples; ++t) {
      const double offset = rational().get_d();
      Point x(n, 0.0);
      x[c] = offset;
      const Point y = m.apply_power(x, 1);
      ++v.offset_samples;
      if (m.generator().entry(c) == ExactScalar(1) || y[c] == offset) {
        v.offset_leaves_moved = false;
        v.detail += "leaf x" + std::to_string(c + 1) + " = " + detail::format_double(offset) + " preserved; ";
      }
    }
  }

  const auto curv = tensor::compute_curvature(m.metric());
  std::vector<std::vector<Rational>> sigma(2, std::vector<Rational>(n));
  sigma[0][1] = 1;
  sigma[1][3] = 1;
  v.weyl_image_is_sigma = true;
  for (int t = 0; t < samples; ++t) {
    std::vector<Rational> x(n);
    x[1] = rational();
    x[3] = rational();
    if (t == 0) x[1] = x[3] = 1;
    ++v.weyl_samples;
    if (tensor::weyl_image_at(*curv.weyl, x) != sigma) {
      v.weyl_image_is_sigma = false;
      v.detail += "Weyl image differs at a point of Sigma; ";
    }
  }
  return v;
}

const char* to_string(GeodesicTag t) {
  switch (t) {
    case GeodesicTag::gamma_plus: return "gamma+";
    case GeodesicTag::gamma_minus: return "gamma-";
    case GeodesicTag::delta_plus: return "delta+";
    case GeodesicTag::delta_minus: return "delta-";
  }
  return "?";
}

bool axis_ray_is_closed_lightlike_geodesic(const QuotientModel& m, int axis) {
  const int n = m.dim();
  if (axis < 1 || axis > n) throw Error(ErrorCode::InvalidArgument, "axis " + std::to_string(axis));
  const int a = axis - 1;
  if (!m.metric()(a, a).is_zero()) return false;
  const auto gamma = tensor::christoffel(m.metric());
  for (int k = 0; k < n; ++k)
    if (!gamma(k, a, a).is_zero()) return false;
  const double d = m.entries()[a];
  return d > 0.0 && d < 1.0;
}

std::vector<ClosedGeodesic> closed_lightlike_geodesics(const QuotientModel& m) {
  std::vector<ClosedGeodesic> out;
  const std::array<std::pair<GeodesicTag, int>, 4> list = {{{GeodesicTag::gamma_plus, 2},
                                                            {GeodesicTag::gamma_minus, 2},
                                                            {GeodesicTag::delta_plus, 4},
                                                            {GeodesicTag::delta_minus, 4}}};
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto [tag, axis] = list[i];
    if (!axis_ray_is_closed_lightlike_geodesic(m, axis))
      throw Error(ErrorCode::MismatchBetweenMethods, std::string(to_string(tag)) + " fails verification");
    out.push_back({tag, axis, i % 2 == 0 ? 1 : -1, {m.entries()[axis - 1]}, m.generator().entry(axis - 1)});
  }
  return out;
}

HolonomyResult holonomy_multiplier(const QuotientModel& m, const ClosedGeodesic& g, double tolerance) {
  const int n = m.dim();
  const int a = g.axis - 1;
  const double d = m.entries()[a];
  const std::array<double, 3> marks = {0.5, 0.7, 0.9};

  // affine ray sign * s * e_a, integrated with its projective parameter
  const double s_lo = 0.25 * d, s_hi = 1.0;
  const int nsteps = 2000;
  geodesic::GeodesicState start{Point(n, 0.0), Point(n, 0.0), s_lo};
  start.x[a] = g.sign * s_lo;
  start.v[a] = g.sign;
  const geodesic::GeodesicIntegrator integ(m.metric(), m.generator().binding(), {.with_ricci = true});
  const auto path = geodesic::integrate_with_projective(integ, start, (s_hi - s_lo) / nsteps, nsteps);
  if (path.chart_boundary) throw Error(ErrorCode::MismatchBetweenMethods, "projective chart ends on the ray");

  std::vector<double> coord, param;
  for (const auto& smp : path.samples) {
    coord.push_back(g.sign * smp.state.x[a]);
    param.push_back(smp.p);
  }
  auto p_at = [&](double c) {
    auto it = std::upper_bound(coord.begin(), coord.end(), c);
    if (it == coord.begin() || it == coord.end())
      throw Error(ErrorCode::MismatchBetweenMethods, "point outside the transported segment");
    const std::size_t j = static_cast<std::size_t>(it - coord.begin());
    const double w = (c - coord[j - 1]) / (coord[j] - coord[j - 1]);
    return param[j - 1] + w * (param[j] - param[j - 1]);
  };
  std::array<double, 3> z{}, w{};
  for (int i = 0; i < 3; ++i) {
    Point x(n, 0.0);
    x[a] = g.sign * marks[i];
    const Point y = m.apply_power(x, 1);
    z[i] = p_at(marks[i]);
    w[i] = p_at(g.sign * y[a]);
  }
  const double transported = geodesic::mobius_multiplier(geodesic::mobius_through(z, w)).multiplier;
  if (!(std::abs(transported - d) <= tolerance))
    throw Error(ErrorCode::MismatchBetweenMethods, std::string(to_string(g.tag)) + ": generator gives " +
                                                       detail::format_double(d) + ", transport gives " +
                                                       detail::format_double(transported));
  return {d, transported, m.generator().entry(a)};
}

InvariantPair classify_model(const QuotientModel& m) {
  return {m.entries()[1], m.entries()[3], m.generator().entry(1), m.generator().entry(3)};
}

bool models_equivalent(const QuotientModel& a, const QuotientModel& b, double tolerance) {
  if (!(a.signature() == b.signature()))
    throw Error(ErrorCode::SignatureMismatch, "models of different signature");
  const auto pa = classify_model(a), pb = classify_model(b);
  if (a.lambda().symbolic && b.lambda().symbolic)
    return pa.gamma_exact == pb.gamma_exact && pa.delta_exact == pb.delta_exact &&
           a.generator().binding() == b.generator().binding();
  return std::abs(pa.gamma - pb.gamma) <= tolerance && std::abs(pa.delta - pb.delta) <= tolerance;
}

std::vector<Point> sample_box(int n, int grid) {
  if (grid < 2) throw Error(ErrorCode::InvalidArgument, "grid must be >= 2");
  const double h = 1.0 / (grid - 1);
  std::vector<Point> out;
  std::vector<int> idx(n, 0);
  while (true) {
    Point x(n);
    for (int i = 0; i < n; ++i) x[i] = (i == 2 ? 0.5 : -0.5) + idx[i] * h;
    out.push_back(std::move(x));
    int i = n - 1;
    while (i >= 0 && ++idx[i] == grid) idx[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

std::vector<Point> sample_segment(int n, int grid) {
  if (grid < 2) throw Error(ErrorCode::InvalidArgument, "grid must be >= 2");
  std::vector<Point> out;
  for (int j = 0; j < grid; ++j) {
    Point x(n, 0.0);
    x[2] = 0.5 + j * (1.0 / (grid - 1));
    out.push_back(std::move(x));
  }
  return out;
}

namespace {

std::vector<Point> project_all(const QuotientModel& m, const std::vector<Point>& xs, const std::vector<double>& scale,
                               Execution exec) {
  std::vector<Point> out(xs.size());
  detail::parallel_for(xs.size(), exec, [&](std::size_t i) {
    Point y = xs[i];
    for (std::size_t j = 0; j < y.size(); ++j) y[j] *= scale[j];
    out[i] = project_point(m, y).point;
  });
  return out;
}

}  // namespace

EssentialityWitness essentiality_witness(const QuotientModel& m, const std::vector<double>& t_values, int grid,
                                         int window, Execution exec) {
  if (grid < 3) throw Error(ErrorCode::InvalidArgument, "grid must be >= 3, got " + std::to_string(grid));
  if (t_values.empty()) throw Error(ErrorCode::InvalidArgument, "no t values");
  for (std::size_t i = 1; i < t_values.size(); ++i)
    if (!(t_values[i] > t_values[i - 1])) throw Error(ErrorCode::InvalidArgument, "t values must increase");
  const int n = m.dim();
  const ShiftTable shifts(m, window);
  const auto box = sample_box(n, grid);
  const auto segment = project_all(m, sample_segment(n, grid), std::vector<double>(n, 1.0), exec);
  const double h = 1.0 / (grid - 1);

  EssentialityWitness w{{}, grid, window};
  for (double t : t_values) {
    const auto flow = conformal::make_essential_flow(t, n).numeric_entries();
    const auto image = project_all(m, box, flow, exec);
    double sq = 0.0;
    for (double c : flow) sq += c * c;
    w.rows.push_back({t, hausdorff_distance(shifts, image, segment, exec), 0.5 * h * std::sqrt(sq)});
  }
  return w;
}

double segment_self_distance(const QuotientModel& m, double t, int grid, int window) {
  const int n = m.dim();
  const auto seg = sample_segment(n, grid);
  const auto base = project_all(m, seg, std::vector<double>(n, 1.0), Execution::serial);
  const auto flow = conformal::make_essential_flow(t, n).numeric_entries();
  return hausdorff_distance(ShiftTable(m, window), project_all(m, seg, flow, Execution::serial), base,
                            Execution::serial);
}

void write_witness_csv(std::ostream& os, const EssentialityWitness& w) {
  os << "t,hausdorff,resolution\n";
  for (const auto& r : w.rows)
    os << detail::format_double(r.t) << ',' << detail::format_double(r.hausdorff) << ','
       << detail::format_double(r.resolution) << '\n';
  if (!os) throw Error(ErrorCode::IoError, "witness write failed");
}

report::Value model_json(const QuotientModel& m) {
  const auto pair = classify_model(m);
  report::Array geodesics;
  for (const auto& g : closed_lightlike_geodesics(m))
    geodesics.emplace_back(report::Object{{"tag", to_string(g.tag)},
                                          {"axis", g.axis},
                                          {"sign", g.sign},
                                          {"multiplier", g.multiplier.multiplier},
                                          {"exact", g.exact_multiplier.to_string()}});
  return report::Object{
      {"signature", report::Array{m.signature().p, m.signature().q}},
      {"lambda", report::Object{{"alpha", m.lambda().alpha}, {"beta", m.lambda().beta},
                                {"symbolic", m.lambda().symbolic}}},
      {"generator_entries", report::Value::array(m.entries())},
      {"multipliers", report::Object{{"gamma", pair.gamma},
                                     {"delta", pair.delta},
                                     {"gamma_exact", pair.gamma_exact.to_string()},
                                     {"delta_exact", pair.delta_exact.to_string()}}},
      {"closed_geodesics", std::move(geodesics)}};
}

}  // namespace conflab::quotient
