// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "conflab/conformal.hpp"
#include "conflab/geodesic.hpp"
#include "conflab/quotient.hpp"
#include "conflab/tensor.hpp"
#include "oracles/fd_oracle.hpp"
#include "oracles/generators.hpp"
#include "oracles/random_metrics.hpp"

using namespace conflab;
using conflab::tensor::build_flat_metric;
using conflab::tensor::build_g0;

namespace {

const std::vector<std::pair<int, int>> kSignatures = {{2, 2}, {2, 3}, {3, 3}, {2, 4}, {3, 4}};

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail.str("");
      detail << "failed: " << what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::size_t flat3(int n, int a, int b, int c) { return (a * n + b) * n + c; }
std::size_t flat4(int n, int a, int b, int c, int d) { return ((a * n + b) * n + c) * n + d; }

template <int R>
bool support_is(const tensor::Field<R>& f, const std::vector<std::size_t>& allowed) {
  for (std::size_t t = 0; t < f.size(); ++t) {
    const bool listed = std::find(allowed.begin(), allowed.end(), t) != allowed.end();
    if (f.at_flat(t).is_zero() == listed) return false;
  }
  return true;
}

RationalFunction rconst(int n, long v) { return RationalFunction(Polynomial::constant(n, v)); }

void curvature_of_g0(Outcome& out) {
  double worst = 0;
  for (auto [p, q] : kSignatures) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto g = build_g0(p, q);
    const int n = g.dim();
    const auto rep = tensor::compute_curvature(g);
    const std::string sig = "(" + std::to_string(p) + "," + std::to_string(q) + ") ";
    const RationalFunction x3(Polynomial::variable(n, 2));
    out.require(rep.christoffel(3, 0, 0) == -x3 && rep.christoffel(1, 0, 2) == x3 && rep.christoffel(1, 2, 0) == x3,
                sig + "christoffel values");
    out.require(support_is(rep.christoffel, {flat3(n, 3, 0, 0), flat3(n, 1, 0, 2), flat3(n, 1, 2, 0)}),
                sig + "christoffel support");
    // R(e3,e1)e1 = -e4, R(e3,e1)e3 = e2 and their antisymmetric partners
    out.require(rep.riemann(3, 0, 2, 0) == rconst(n, -1) && rep.riemann(1, 2, 2, 0) == rconst(n, 1) &&
                    rep.riemann(3, 0, 0, 2) == rconst(n, 1) && rep.riemann(1, 2, 0, 2) == rconst(n, -1),
                sig + "riemann values");
    out.require(support_is(rep.riemann, {flat4(n, 3, 0, 2, 0), flat4(n, 3, 0, 0, 2), flat4(n, 1, 2, 2, 0),
                                         flat4(n, 1, 2, 0, 2)}),
                sig + "riemann support");
    out.require(rep.ricci.is_identically_zero(), sig + "ricci flat");
    out.require(rep.weyl && *rep.weyl == rep.riemann, sig + "W = R");
    const double dt = seconds_since(t0);
    worst = std::max(worst, dt);
    out.require(dt < 10.0, sig + "runtime " + std::to_string(dt) + " s");
  }
  if (out.ok) out.detail << "5 signatures, slowest " << worst << " s";
}

void conformal_factors(Outcome& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExactScalar e1e2sq = ExactScalar::monomial(1, 2, 2);
  for (auto [p, q] : kSignatures) {
    const auto g = build_g0(p, q);
    const int n = g.dim();
    const auto phi = conformal::make_phi_lambda({-2, -1.5, true}, n);
    const auto pulled = conformal::pullback_metric(phi, g).components();
    bool same = true;
    for (int k = 0; k < n * n; ++k) same = same && pulled[k] == g.components()[k] * e1e2sq;
    out.require(same, "pullback of phi_lambda at (" + std::to_string(p) + "," + std::to_string(q) + ")");
    out.require(conformal::conformal_factor(phi, g) == e1e2sq, "factor E1^2 E2^2");
  }
  double err = 0;
  for (double t : {0.5, 1.0, 2.0}) {
    const auto g = build_g0(3, 3);
    const auto flow = conformal::make_essential_flow(t, g.dim());
    err = std::max(err, std::abs(conformal::conformal_factor(flow, g).evaluate(flow.binding()) - std::exp(-3 * t)));
  }
  out.require(err < 1e-12, "flow factor error " + std::to_string(err));
  const double dt = seconds_since(t0);
  out.require(dt < 1.0, "runtime " + std::to_string(dt) + " s");
  if (out.ok) out.detail << "exact E1^2*E2^2 on 5 signatures, flow |err| " << err << ", " << dt << " s";
}

void weyl_image(Outcome& out) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(301);
  for (auto [p, q] : {std::pair{2, 2}, std::pair{3, 3}}) {
    const auto g = build_g0(p, q);
    const int n = g.dim();
    const auto w = *tensor::compute_curvature(g).weyl;
    std::vector<std::vector<Rational>> expected(2, std::vector<Rational>(n, Rational(0)));
    expected[0][1] = 1;
    expected[1][3] = 1;
    for (int t = 0; t < 20; ++t) {
      const auto x = testing::random_point(rng, n);
      out.require(tensor::weyl_image_at(w, x) == expected, "image at a random point");
    }
  }
  const double dt = seconds_since(t0);
  out.require(dt < 5.0, "runtime " + std::to_string(dt) + " s");
  if (out.ok) out.detail << "rank 2, span{e2,e4} at 20 points in dims 4 and 6, " << dt << " s";
}

void oracle_equivalence(Outcome& out) {
  std::mt19937 rng(401);
  std::uniform_int_distribution<int> num(-4, 4);
  double worst = 0;
  for (int t = 0; t < 20; ++t) {
    const int n = 4 + t % 3;
    const auto g = testing::random_small_metric(rng, n);
    const auto gamma = tensor::christoffel(g);
    const auto riem = tensor::riemann(g, gamma);
    const testing::FiniteDifferenceCurvature fd(g, 1e-4);
    for (int k = 0; k < 2; ++k) {
      std::vector<double> x(n);
      for (auto& v : x) v = num(rng) / 8.0;
      const auto ref_g = fd.christoffel(x);
      const auto ref_r = fd.riemann(x);
      std::vector<double> got_g(ref_g.size()), got_r(ref_r.size());
      for (std::size_t i = 0; i < got_g.size(); ++i) got_g[i] = gamma.at_flat(i).evaluate(x);
      for (std::size_t i = 0; i < got_r.size(); ++i) got_r[i] = riem.at_flat(i).evaluate(x);
      worst = std::max({worst, testing::max_relative_error(got_g, ref_g), testing::max_relative_error(got_r, ref_r)});
    }
  }
  out.require(worst < 1e-6, "relative error " + std::to_string(worst));
  if (out.ok) out.detail << "20 metrics, dims 4-6, max relative error " << worst;
}

double g0_norm(const std::vector<double>& x, const std::vector<double>& v, int p, int q) {
  const int n = p + q;
  double s = 2 * v[0] * v[1] + x[2] * x[2] * v[0] * v[0] + 2 * v[2] * v[3];
  for (int j = 4; j < n; ++j) s += (j < 4 + (q - 2) ? 1.0 : -1.0) * v[j] * v[j];
  return s;
}

void geodesic_conservation(Outcome& out) {
  std::mt19937 rng(501);
  std::uniform_real_distribution<double> u(-1, 1);
  double drift = 0;
  for (auto [p, q] : kSignatures) {
    const auto g = build_g0(p, q);
    const int n = g.dim();
    const geodesic::GeodesicIntegrator integ(g);
    geodesic::GeodesicState s{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (auto& x : s.x) x = u(rng);
    s.x[2] = 0.5 + 0.5 * std::abs(u(rng));
    for (auto& v : s.v) v = u(rng);
    s.v[0] = 0.5 + 0.5 * std::abs(u(rng));
    s.v[1] = 0;
    s.v[1] = -g0_norm(s.x, s.v, p, q) / (2 * s.v[0]);
    const double n0 = integ.null_norm(s);
    for (const auto& st : integ.integrate(s, 1e-3, 10000)) drift = std::max(drift, std::abs(integ.null_norm(st) - n0));
  }
  out.require(drift < 1e-9, "null drift " + std::to_string(drift));

  // step halving on (1 + x3^2) g0
  const auto g0 = build_g0(2, 2);
  const Polynomial x3 = Polynomial::variable(4, 2);
  const geodesic::GeodesicIntegrator integ(g0.conformally_scaled(Polynomial::constant(4, 1) + x3 * x3));
  geodesic::GeodesicState s{{0.1, -0.2, 0.8, 0.3}, {1.0, 0.0, 0.5, 0.4}, 0.0};
  s.v[1] = -g0_norm(s.x, s.v, 2, 2) / (2 * s.v[0]);
  std::vector<std::vector<double>> ends;
  for (double h : {0.1, 0.05, 0.025, 0.0125})
    ends.push_back(integ.integrate(s, h, static_cast<int>(std::lround(1.0 / h))).back().x);
  auto diff = [&](int a, int b) {
    double m = 0;
    for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(ends[a][i] - ends[b][i]));
    return m;
  };
  std::ostringstream ratios;
  for (int k = 0; k + 2 < 4; ++k) {
    const double r = diff(k, k + 1) / diff(k + 1, k + 2);
    ratios << (k ? ", " : "") << r;
    out.require(r >= 10 && r <= 24, "step-halving ratio " + std::to_string(r));
  }
  if (out.ok) out.detail << "max drift " << drift << ", halving ratios " << ratios.str();
}

std::vector<double> sample(const std::function<double(double)>& f, double a, double h, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = f(a + i * h);
  return v;
}

void schwarzian_suite(Outcome& out) {
  const double h = 1e-3;
  const int count = 1001;
  double mob = 0;
  for (double s : geodesic::schwarzian_numeric(sample([](double s) { return (2 * s + 1) / (s + 3); }, 0, h, count), h))
    mob = std::max(mob, std::abs(s));
  out.require(mob < 1e-5, "Moebius Schwarzian " + std::to_string(mob));

  const double chain = geodesic::schwarzian_chain_rule_residual(
      sample([](double s) { return std::exp(s); }, 0, h, count), sample([](double s) { return 2 * s; }, 0, h, count), h);
  out.require(chain < 1e-4, "chain rule residual " + std::to_string(chain));

  double fit = 0;
  for (const auto& init : std::vector<geodesic::ProjectiveInit>{
           {0, 1, 1, 0}, {1, 2, 3, 1}, {-1, 0.5, 2, -0.25}})
    for (int n : {4, 6}) {
      const auto sol = geodesic::solve_projective_parameter([](double) { return 0.0; }, n, 0.0, 2.0, h, init);
      out.require(!sol.chart_boundary, "unexpected chart boundary");
      std::vector<double> z, w;
      for (const auto& smp : sol.samples) {
        z.push_back(smp.s);
        w.push_back(smp.p);
      }
      fit = std::max(fit, geodesic::fit_mobius(z, w).residual);
    }
  out.require(fit < 1e-6, "Moebius fit residual " + std::to_string(fit));
  if (out.ok) out.detail << "{Moebius,s} " << mob << ", chain rule " << chain << ", V=0 fit " << fit;
}

void holonomy(Outcome& out) {
  std::mt19937 rng(701);
  double worst = 0;
  for (int t = 0; t < 10; ++t) {
    const auto lam = testing::random_lambda(rng);
    const auto [p, q] = kSignatures[t % kSignatures.size()];
    const auto m = quotient::build_model(p, q, lam);
    const auto geos = quotient::closed_lightlike_geodesics(m);
    out.require(geos.size() == 4, "four closed geodesics");
    for (const auto& g : geos) {
      const auto hres = quotient::holonomy_multiplier(m, g);
      const double want = std::exp(3 * (g.axis == 2 ? lam.alpha : lam.beta));
      worst = std::max(worst, std::abs(hres.from_generator - hres.from_transport));
      out.require(std::abs(hres.from_generator - want) < 1e-14, "generator multiplier");
    }
  }
  out.require(worst < 1e-12, "transport disagreement " + std::to_string(worst));
  const auto sym = quotient::build_model(2, 2, {-2, -1.5, true});
  for (const auto& g : quotient::closed_lightlike_geodesics(sym)) {
    const auto hres = quotient::holonomy_multiplier(sym, g);
    out.require(hres.exact == (g.axis == 2 ? ExactScalar::e1(3) : ExactScalar::e2(3)), "symbolic multiplier");
  }
  if (out.ok) out.detail << "10 random lambda, max |generator - transport| " << worst << ", symbolic (E1^3, E2^3)";
}

void distinctness(Outcome& out) {
  std::mt19937 rng(801);
  int distinct = 0;
  for (int t = 0; t < 50; ++t) {
    const auto l1 = testing::random_lambda(rng), l2 = testing::random_lambda(rng);
    const auto [p, q] = kSignatures[t % kSignatures.size()];
    const auto a = quotient::classify_model(quotient::build_model(p, q, l1));
    const auto b = quotient::classify_model(quotient::build_model(p, q, l2));
    const auto a2 = quotient::classify_model(quotient::build_model(p, q, l1));
    const bool same_lambda = l1.alpha == l2.alpha && l1.beta == l2.beta;
    const bool same_pair = a.gamma == b.gamma && a.delta == b.delta;
    out.require(same_lambda == same_pair, "invariant pairs vs lambda");
    out.require(a.gamma == a2.gamma && a.delta == a2.delta, "equal lambda gives equal pair");
    distinct += same_pair ? 0 : 1;
  }
  if (out.ok) out.detail << "50 pairs, " << distinct << " distinct, equal lambda reproduces the pair exactly";
}

void essentiality(Outcome& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = quotient::build_model(3, 3, {-2, -1.5});
  const auto w = quotient::essentiality_witness(m, {0, 2, 4, 6, 8, 10}, 5, 40);
  std::ostringstream seq;
  for (std::size_t i = 0; i < w.rows.size(); ++i) {
    seq << (i ? ", " : "") << w.rows[i].hausdorff;
    if (i) out.require(w.rows[i].hausdorff < w.rows[i - 1].hausdorff, "strict decrease");
  }
  out.require(w.rows.size() == 6, "six rows");
  out.require(w.rows.front().hausdorff > 0.1, "initial value");
  out.require(w.rows.back().hausdorff < 0.05, "final value");
  const double dt = seconds_since(t0);
  out.require(dt < 60.0, "runtime " + std::to_string(dt) + " s");
  if (out.ok) out.detail << "d_H = " << seq.str() << ", " << dt << " s";
}

void conformal_flatness(Outcome& out) {
  for (auto [p, q] : {std::pair{2, 2}, std::pair{1, 3}, std::pair{3, 3}}) {
    const auto flat = build_flat_metric(p, q);
    const int n = flat.dim();
    const Polynomial x2 = Polynomial::variable(n, 1);
    out.require(tensor::is_conformally_flat(flat).flat, "flat metric");
    out.require(tensor::is_conformally_flat(flat.conformally_scaled(Polynomial::constant(n, 1) + x2 * x2)).flat,
                "(1 + x2^2) flat");
  }
  std::string witness;
  for (auto [p, q] : kSignatures) {
    const auto v = tensor::is_conformally_flat(build_g0(p, q));
    out.require(!v.flat, "g0 reported conformally flat");
    out.require(v.witness && !v.witness->value.is_zero(), "nonzero Weyl witness");
    if (v.witness && witness.empty()) witness = v.witness->value.to_string();
  }
  if (out.ok) out.detail << "flat and (1+x2^2) flat: true; g0: false with witness W = " << witness;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, void (*)(Outcome&)>> criteria = {
      {"curvature of g0", curvature_of_g0},
      {"conformal factors", conformal_factors},
      {"Weyl image", weyl_image},
      {"oracle equivalence", oracle_equivalence},
      {"geodesic conservation", geodesic_conservation},
      {"Schwarzian suite", schwarzian_suite},
      {"holonomy", holonomy},
      {"distinctness", distinctness},
      {"essentiality witness", essentiality},
      {"conformal-flatness control", conformal_flatness},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run(out);
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail.str("");
      out.detail << "exception: " << e.what();
    }
    failed += out.ok ? 0 : 1;
    std::printf("%s %2d %s: %s [%.2f s]\n", out.ok ? "PASS" : "FAIL", index, name.c_str(), out.detail.str().c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
