#include <cmath>
#include <fstream>
#include <sstream>

#include "conflab/cli.hpp"
#include "conflab/conformal.hpp"
#include "conflab/geodesic.hpp"
#include "conflab/quotient.hpp"
#include "conflab/tensor.hpp"

namespace conflab::cli {

using report::Array;
using report::Object;
using report::ReportDocument;
using report::Value;

namespace {

tensor::MetricSpec load_metric(const MetricSource& s) {
  if (s.file) return tensor::read_metric_file(*s.file);
  if (s.builtin == "g0") return tensor::build_g0(s.p, s.q);
  if (s.builtin == "flat") return tensor::build_flat_metric(s.p, s.q);
  throw Error(ErrorCode::InvalidArgument, "unknown builtin metric '" + s.builtin + "'");
}

Object metric_inputs(const MetricSource& s) {
  if (s.file) return {{"metric_file", *s.file}};
  return {{"builtin", s.builtin}, {"p", s.p}, {"q", s.q}};
}

Rational parse_rational(const std::string& s) {
  if (s.find_first_of(".eE") != std::string::npos) return Rational(std::stod(s));
  Rational r;
  if (r.set_str(s, 10) != 0) throw Error(ErrorCode::ParseError, "not a rational number: '" + s + "'");
  r.canonicalize();
  return r;
}

std::string index_name(const std::vector<int>& idx) {
  std::string s;
  for (int i : idx) s += std::to_string(i + 1);
  return s;
}

template <int Rank>
Array nonzero_entries(const tensor::Field<Rank>& f) {
  Array out;
  for (std::size_t k = 0; k < f.size(); ++k)
    if (!f.at_flat(k).is_zero())
      out.emplace_back(Object{{"index", index_name(f.unflatten(k))}, {"value", f.at_flat(k).to_string()}});
  return out;
}

Array vectors_json(const std::vector<std::vector<Rational>>& rows) {
  Array out;
  for (const auto& r : rows) {
    Array v;
    for (const auto& c : r) v.emplace_back(to_string(c));
    out.emplace_back(std::move(v));
  }
  return out;
}

// R^l_{kij} = -R^l_{kji} and Ric symmetric, both exact.
bool curvature_symmetries(const tensor::CurvatureReport& c, int n) {
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (!(c.riemann(l, k, i, j) == -c.riemann(l, k, j, i))) return false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(c.ricci(i, j) == c.ricci(j, i))) return false;
  return true;
}

Value numbers(const std::vector<double>& xs) { return Value::array(xs); }

}  // namespace

report::ReportDocument cmd_curvature(const CurvatureOptions& o) {
  const auto g = load_metric(o.metric);
  const int n = g.dim();
  std::vector<Rational> x(n, Rational(1));
  if (!o.point.empty()) {
    if (static_cast<int>(o.point.size()) != n)
      throw Error(ErrorCode::DimensionMismatch, "point has " + std::to_string(o.point.size()) + " coordinates");
    for (int i = 0; i < n; ++i) x[i] = parse_rational(o.point[i]);
  }
  Object inputs = metric_inputs(o.metric);
  Array pt;
  for (const auto& c : x) pt.emplace_back(to_string(c));
  inputs.emplace_back("point", std::move(pt));
  ReportDocument doc("curvature", std::move(inputs));

  const auto c = tensor::compute_curvature(g);
  const bool ricci_flat = c.ricci.is_identically_zero();
  const bool flat = c.riemann.is_identically_zero();
  std::optional<tensor::ConformalFlatness> cf;
  if (c.weyl) cf = tensor::conformal_flatness_from(*c.weyl);

  doc.add("curvature_symmetries", curvature_symmetries(c, n), true);
  const bool reference = !o.metric.file && o.metric.builtin == "g0";
  if (reference) {
    doc.add("ricci_flat", ricci_flat, true, {{"value", ricci_flat}});
    doc.add("not_flat", !flat, true, {{"riemann_nonzero", static_cast<long>(c.riemann.count_nonzero())}});
    doc.add("not_conformally_flat", cf && !cf->flat, true, {{"value", cf ? !cf->flat : false}});
  } else if (!o.metric.file && o.metric.builtin == "flat") {
    doc.add("flat", flat, true);
  } else {
    doc.skip("reference_verdicts", "no reference claim for a user metric");
  }
  if (c.weyl) {
    const auto image = tensor::weyl_image_at(*c.weyl, x);
    Object details{{"rank", static_cast<long>(image.size())}, {"basis", vectors_json(image)}};
    if (reference) {
      std::vector<std::vector<Rational>> sigma(2, std::vector<Rational>(n));
      sigma[0][1] = 1;
      sigma[1][3] = 1;
      doc.add("weyl_image_is_span_e2_e4", image == sigma, true, std::move(details));
    } else {
      doc.set_output("weyl_image", Value(std::move(details)));
    }
  } else {
    doc.skip("weyl_image", "dimension 3");
  }

  doc.set_output("ricci_flat", ricci_flat);
  doc.set_output("flat", flat);
  if (cf) {
    Object v{{"value", cf->flat}};
    if (cf->witness) {
      const auto& w = *cf->witness;
      Array p;
      for (const auto& r : w.point) p.emplace_back(to_string(r));
      v.emplace_back("witness", Object{{"index", index_name({w.l, w.k, w.i, w.j})},
                                       {"point", std::move(p)},
                                       {"value", w.value.to_string()}});
    }
    doc.set_output("conformally_flat", Value(std::move(v)));
  }
  doc.set_output("christoffel", nonzero_entries(c.christoffel));
  doc.set_output("riemann", nonzero_entries(c.riemann));
  doc.set_output("ricci", nonzero_entries(c.ricci));
  doc.set_output("scalar", c.scalar.to_string());
  if (c.weyl) doc.set_output("weyl", nonzero_entries(*c.weyl));
  return doc;
}

report::ReportDocument cmd_verify_conformal(const VerifyConformalOptions& o) {
  Object inputs{{"p", o.p}, {"q", o.q}, {"symbolic", o.symbolic}};
  if (!o.symbolic) {
    inputs.emplace_back("alpha", o.alpha);
    inputs.emplace_back("beta", o.beta);
  }
  if (o.t) inputs.emplace_back("t", *o.t);
  inputs.emplace_back("tolerance", o.tolerance);
  ReportDocument doc("verify-conformal", std::move(inputs));

  const auto g = tensor::build_g0(o.p, o.q);
  const int n = g.dim();
  const conformal::LambdaParams lambda{o.alpha, o.beta, o.symbolic};
  const auto phi = conformal::make_phi_lambda(lambda, n);
  const ExactScalar factor = conformal::conformal_factor(phi, g);
  if (o.symbolic) {
    doc.add("phi_lambda_factor", factor == ExactScalar::monomial(1, 2, 2), true,
            {{"factor", factor.to_string()}, {"expected", "E1^2*E2^2"}});
  } else {
    const double got = factor.evaluate(lambda.binding());
    const double want = std::exp(2 * (o.alpha + o.beta));
    doc.add("phi_lambda_factor", std::abs(got - want) <= o.tolerance, false,
            {{"factor", got}, {"expected", want}, {"exact_form", factor.to_string()}});
    const auto v = conformal::validate_lambda(lambda);
    Object adm{{"value", v.admissible}, {"exponents", numbers({v.exponents.begin(), v.exponents.end()})}};
    if (!v.admissible) adm.emplace_back("reason", v.reason);
    doc.set_output("admissible", Value(std::move(adm)));
  }
  if (o.t) {
    const auto flow = conformal::make_essential_flow(*o.t, n);
    const ExactScalar ff = conformal::conformal_factor(flow, g);
    const double got = ff.evaluate(flow.binding());
    const double want = std::exp(-3 * *o.t);
    doc.add("flow_factor", std::abs(got - want) <= o.tolerance, false,
            {{"factor", got}, {"expected", want}, {"exact_form", ff.to_string() + " with E1 = e^(t/2)"}});
    const double diff = conformal::max_entry_difference(conformal::compose_numeric(flow, phi),
                                                        conformal::compose_numeric(phi, flow));
    doc.add("flow_commutes_with_phi_lambda", diff <= o.tolerance, false, {{"max_entry_difference", diff}});
  } else {
    doc.skip("flow_factor", "no t given");
  }
  return doc;
}

namespace {

Object holonomy_details(const quotient::QuotientModel& m, bool& ok) {
  Object out;
  for (const auto& g : quotient::closed_lightlike_geodesics(m)) {
    try {
      const auto h = quotient::holonomy_multiplier(m, g);
      out.emplace_back(to_string(g.tag), Object{{"generator", h.from_generator},
                                                {"transport", h.from_transport},
                                                {"exact", h.exact.to_string()}});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MismatchBetweenMethods) throw;
      ok = false;
      out.emplace_back(to_string(g.tag), e.what());
    }
  }
  return out;
}

conformal::LambdaParams lambda_from(const std::vector<double>& v, const char* name) {
  if (v.size() != 2) throw Error(ErrorCode::InvalidArgument, std::string(name) + " needs two values alpha,beta");
  return {v[0], v[1]};
}

}  // namespace

report::ReportDocument cmd_classify(const ClassifyOptions& o) {
  const auto l1 = lambda_from(o.lambda1, "lambda1");
  const auto l2 = lambda_from(o.lambda2, "lambda2");
  ReportDocument doc("classify", {{"p", o.p},
                                  {"q", o.q},
                                  {"lambda1", numbers(o.lambda1)},
                                  {"lambda2", numbers(o.lambda2)},
                                  {"tolerance", o.tolerance}});
  const auto m1 = quotient::build_model(o.p, o.q, l1);
  const auto m2 = quotient::build_model(o.p, o.q, l2);
  bool ok1 = true, ok2 = true;
  auto h1 = holonomy_details(m1, ok1);
  auto h2 = holonomy_details(m2, ok2);
  doc.add("holonomy_cross_check_1", ok1, false, std::move(h1));
  doc.add("holonomy_cross_check_2", ok2, false, std::move(h2));

  const auto p1 = quotient::classify_model(m1), p2 = quotient::classify_model(m2);
  const bool equivalent = quotient::models_equivalent(m1, m2, o.tolerance);
  const bool same_lambda = l1.alpha == l2.alpha && l1.beta == l2.beta;
  doc.add("invariant_determines_lambda", equivalent == same_lambda, false,
          {{"equivalent", equivalent}, {"same_lambda", same_lambda}});
  doc.set_output("invariants_1", numbers({p1.gamma, p1.delta}));
  doc.set_output("invariants_2", numbers({p2.gamma, p2.delta}));
  doc.set_output("equivalent", equivalent);
  return doc;
}

report::ReportDocument cmd_essential_demo(const EssentialDemoOptions& o) {
  Object inputs{{"p", o.p},         {"q", o.q},           {"alpha", o.alpha},         {"beta", o.beta},
                {"t", numbers(o.t)}, {"grid", o.grid},     {"window", o.window},       {"threshold", o.threshold}};
  if (o.out) inputs.emplace_back("out", *o.out);
  ReportDocument doc("essential-demo", std::move(inputs));
  const auto m = quotient::build_model(o.p, o.q, {o.alpha, o.beta});
  const auto w = quotient::essentiality_witness(m, o.t, o.grid, o.window);

  Array rows;
  std::vector<double> h;
  for (const auto& r : w.rows) {
    rows.emplace_back(Object{{"t", r.t}, {"hausdorff", r.hausdorff}, {"resolution", r.resolution}});
    h.push_back(r.hausdorff);
  }
  if (w.rows.size() < 2) {
    doc.skip("monotone_decay", "a single t value");
    doc.skip("final_below_threshold", "a single t value");
  } else {
    bool decreasing = true;
    for (std::size_t i = 1; i < h.size(); ++i) decreasing = decreasing && h[i] < h[i - 1];
    doc.add("monotone_decay", decreasing, false, {{"hausdorff", numbers(h)}});
    doc.add("final_below_threshold", h.back() < o.threshold, false, {{"final", h.back()}});
  }
  double worst = 0.0;
  bool inside = true;
  for (const auto& r : w.rows) {
    const double d = quotient::segment_self_distance(m, r.t, o.grid, o.window);
    worst = std::max(worst, d);
    inside = inside && d < r.resolution;
  }
  doc.add("segment_invariant", inside, false, {{"max_self_distance", worst}});
  doc.set_output("witness", std::move(rows));
  if (o.out) {
    std::ofstream f(*o.out);
    if (!f) throw Error(ErrorCode::IoError, "cannot open " + *o.out);
    quotient::write_witness_csv(f, w);
  }
  return doc;
}

report::ReportDocument cmd_geodesic(const GeodesicOptions& o) {
  const auto g = load_metric(o.metric);
  const int n = g.dim();
  std::vector<double> x = o.x, v = o.v;
  if (x.empty()) {
    x.assign(n, 0.0);
    x[1] = 1.0;
  }
  if (v.empty()) {
    v.assign(n, 0.0);
    v[1] = 1.0;
  }
  if (static_cast<int>(x.size()) != n || static_cast<int>(v.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "initial state must have " + std::to_string(n) + " coordinates");
  Object inputs = metric_inputs(o.metric);
  inputs.emplace_back("x", numbers(x));
  inputs.emplace_back("v", numbers(v));
  inputs.emplace_back("step", o.step);
  inputs.emplace_back("nsteps", o.nsteps);
  inputs.emplace_back("projective", o.projective);
  inputs.emplace_back("null_tolerance", o.null_tolerance);
  if (o.out) inputs.emplace_back("out", *o.out);
  ReportDocument doc("geodesic", std::move(inputs));

  const geodesic::GeodesicIntegrator integ(g, {}, {.with_ricci = o.projective});
  const geodesic::GeodesicState start{x, v, 0.0};
  const double q0 = integ.null_norm(start);
  const bool lightlike = geodesic::is_lightlike(g, start, o.null_tolerance);

  std::vector<geodesic::GeodesicState> path;
  std::optional<geodesic::ProjectivePath> proj;
  if (o.projective) {
    proj = geodesic::integrate_with_projective(integ, start, o.step, o.nsteps);
    for (const auto& s : proj->samples) path.push_back(s.state);
  } else {
    path = integ.integrate(start, o.step, o.nsteps);
  }
  double drift = 0.0;
  for (const auto& s : path) drift = std::max(drift, std::abs(integ.null_norm(s) - q0));
  doc.add("initial_lightlike", lightlike, false, {{"null_norm", q0}});
  doc.add("null_drift", drift <= o.null_tolerance, false, {{"max_drift", drift}});

  if (proj) {
    Array series;
    std::vector<double> s, p;
    for (const auto& smp : proj->samples) {
      s.push_back(smp.state.s);
      p.push_back(smp.p);
    }
    const std::size_t stride = std::max<std::size_t>(1, s.size() / 100);
    for (std::size_t i = 0; i < s.size(); i += stride) series.emplace_back(numbers({s[i], p[i]}));
    doc.set_output("projective_parameter", std::move(series));
    doc.set_output("chart_boundary", proj->chart_boundary ? Value(*proj->chart_boundary) : Value(nullptr));
    const auto ric = tensor::ricci(tensor::riemann(g, tensor::christoffel(g)));
    if (ric.is_identically_zero() && s.size() >= 2) {
      // Ric = 0: p should be affine in s
      double worst = 0.0;
      const double slope = (p.back() - p.front()) / (s.back() - s.front());
      for (std::size_t i = 0; i < s.size(); ++i) worst = std::max(worst, std::abs(p[i] - p[0] - slope * (s[i] - s[0])));
      doc.add("projective_parameter_affine", worst <= o.null_tolerance, false, {{"max_deviation", worst}});
    } else {
      doc.skip("projective_parameter_affine", "metric is not Ricci flat");
    }
  }
  doc.set_output("endpoint", Object{{"s", path.back().s}, {"x", numbers(path.back().x)}, {"v", numbers(path.back().v)}});
  if (o.out) {
    std::ofstream f(*o.out);
    if (!f) throw Error(ErrorCode::IoError, "cannot open " + *o.out);
    geodesic::write_trajectory_csv(f, path, integ);
  }
  return doc;
}

std::string error_json(const std::string& command, const std::string& code, const std::string& message) {
  const Value v = Object{{"command", command}, {"error", Object{{"code", code}, {"message", message}}}};
  return v.dump(2) + "\n";
}

}  // namespace conflab::cli
