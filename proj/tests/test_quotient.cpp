#include <cmath>
#include <random>
#include <sstream>

#include "conflab/quotient.hpp"
#include "doctest.h"
#include "oracles/generators.hpp"

using namespace conflab;
using namespace conflab::quotient;
using conflab::conformal::LambdaParams;
using conflab::testing::random_lambda;

namespace {

const LambdaParams kLambda{-2, -1.5};

Point random_point(std::mt19937& rng, int n, double scale) {
  std::uniform_real_distribution<double> u(-1, 1), e(-scale, scale);
  Point x(n);
  for (auto& v : x) v = u(rng) * std::pow(10.0, e(rng));
  return x;
}

// Brute force: iterate the numeric generator entry by entry.
int brute_force_k(const QuotientModel& m, const Point& x) {
  auto norm = [&](int k) {
    double s = 0;
    for (int i = 0; i < m.dim(); ++i) s = std::max(s, std::abs(x[i] * std::pow(m.entries()[i], k)));
    return s;
  };
  int found = 1000;
  for (int k = -60; k <= 60; ++k)
    if (norm(k) < 1 && norm(k - 1) >= 1) {
      REQUIRE(found == 1000);
      found = k;
    }
  return found;
}

double rel_diff(const Point& a, const Point& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]) / std::max(1e-300, std::abs(b[i])));
  return m;
}

}  // namespace

TEST_SUITE("quotient") {
  TEST_CASE("build_model") {
    const auto m = build_model(3, 3, kLambda);
    const std::vector<double> want = {std::exp(-1.0), std::exp(-6.0), std::exp(-2.5),
                                      std::exp(-4.5), std::exp(-3.5), std::exp(-3.5)};
    REQUIRE(m.dim() == 6);
    for (int i = 0; i < 6; ++i) CHECK(m.entries()[i] == doctest::Approx(want[i]).epsilon(1e-15));
    CHECK(build_model(2, 2, kLambda).dim() == 4);
    try {
      (void)build_model(3, 3, {-1, -0.4});
      FAIL("expected InadmissibleLambda");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InadmissibleLambda);
    }
    try {
      (void)build_model(3, 2, kLambda);
      FAIL("expected InvalidSignature");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidSignature);
    }
    CHECK_THROWS_AS(build_model(2, 2, {-1.5, -2}), Error);
  }

  TEST_CASE("canonical representatives") {
    const auto m = build_model(2, 3, kLambda);
    const Point inside = {0.5, 0.1, -0.9, 0.2, 0.3};
    const auto r0 = project_point(m, inside);
    CHECK(r0.k == 0);
    CHECK(r0.point == inside);

    std::mt19937 rng(31);
    for (int t = 0; t < 1000; ++t) {
      const Point x = random_point(rng, 5, 3);
      const auto r = project_point(m, x);
      CHECK(r.k == brute_force_k(m, x));
      double norm = 0, back = 0;
      const Point prev = m.apply_power(r.point, -1);
      for (int i = 0; i < 5; ++i) {
        norm = std::max(norm, std::abs(r.point[i]));
        back = std::max(back, std::abs(prev[i]));
      }
      CHECK(norm < 1);
      CHECK(back >= 1);
    }
    CHECK_THROWS_AS(project_point(m, Point(5, 0.0)), Error);
  }

  TEST_CASE("orbit soundness and free action") {
    std::mt19937 rng(32);
    std::uniform_int_distribution<int> shift(-5, 5);
    for (auto [p, q] : std::vector<std::pair<int, int>>{{2, 2}, {3, 3}}) {
      const auto m = build_model(p, q, random_lambda(rng));
      for (int t = 0; t < 300; ++t) {
        const Point x = random_point(rng, m.dim(), 2);
        const int s = shift(rng);
        const auto a = project_point(m, x);
        const auto b = project_point(m, m.apply_power(x, s));
        CHECK(a.k == b.k + s);
        CHECK(rel_diff(b.point, a.point) < 1e-13);
        if (s != 0) {
          const Point y = m.apply_power(x, s);
          double d = 0;
          for (int i = 0; i < m.dim(); ++i) d += (y[i] - x[i]) * (y[i] - x[i]);
          CHECK(d > 0);
        }
      }
    }
  }

  TEST_CASE("quotient distance") {
    const auto m = build_model(3, 3, kLambda);
    std::mt19937 rng(33);
    for (int t = 0; t < 100; ++t) {
      const auto a = project_point(m, random_point(rng, 6, 1)).point;
      const auto b = project_point(m, random_point(rng, 6, 1)).point;
      CHECK(quotient_distance(m, a, a, 10) == 0.0);
      const auto shifted = project_point(m, m.apply_power(a, 1)).point;
      CHECK(quotient_distance(m, a, shifted, 10) < 1e-13);
      CHECK(std::abs(quotient_distance(m, a, b, 10) - quotient_distance(m, b, a, 10)) < 1e-12);
      double direct = 0;
      for (int i = 0; i < 6; ++i) direct += (a[i] - b[i]) * (a[i] - b[i]);
      CHECK(quotient_distance(m, a, b, 10) <= std::sqrt(direct));
    }
  }

  TEST_CASE("invariant leaf") {
    for (auto [p, q] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 3}}) {
      const auto m = build_model(p, q, kLambda);
      const auto v = invariant_leaf_check(m, 4);
      CHECK(v.sigma_preserved);
      CHECK(v.offset_leaves_moved);
      CHECK(v.weyl_image_is_sigma);
      CHECK(v.ok());
      CHECK(v.offset_samples == 4 * (m.dim() - 2));
    }
    // x3 = 1 goes to e^{2 alpha - beta}
    const auto m = build_model(2, 2, kLambda);
    const auto y = m.apply_power({0, 1, 1, 1}, 1);
    CHECK(std::abs(y[2] - std::exp(2 * -2.0 + 1.5)) < 1e-15);
    CHECK(m.generator().entry(1) == ExactScalar::e1(3));
    CHECK(m.generator().entry(3) == ExactScalar::e2(3));
  }

  TEST_CASE("closed lightlike geodesics") {
    const auto m = build_model(3, 3, kLambda);
    const auto geos = closed_lightlike_geodesics(m);
    REQUIRE(geos.size() == 4);
    CHECK(std::string(to_string(geos[0].tag)) == "gamma+");
    CHECK(std::string(to_string(geos[3].tag)) == "delta-");
    CHECK(geos[0].axis == 2);
    CHECK(geos[3].axis == 4);
    CHECK(geos[1].sign == -1);
    CHECK(std::abs(geos[0].multiplier.multiplier - std::exp(-6.0)) < 1e-15);
    CHECK(std::abs(geos[2].multiplier.multiplier - std::exp(-4.5)) < 1e-15);
    CHECK(geos[0].exact_multiplier == ExactScalar::e1(3));
    CHECK(geos[2].exact_multiplier == ExactScalar::e2(3));
    CHECK(axis_ray_is_closed_lightlike_geodesic(m, 2));
    CHECK(axis_ray_is_closed_lightlike_geodesic(m, 4));
    for (int axis : {1, 5, 6}) CHECK_FALSE(axis_ray_is_closed_lightlike_geodesic(m, axis));
    // the x3 axis is lightlike and closed as well but lies outside Sigma
    CHECK(axis_ray_is_closed_lightlike_geodesic(m, 3));
  }

  TEST_CASE("holonomy by two methods") {
    const auto m = build_model(2, 3, kLambda);
    for (const auto& g : closed_lightlike_geodesics(m)) {
      const auto h = holonomy_multiplier(m, g);
      const double want = g.axis == 2 ? std::exp(-6.0) : std::exp(-4.5);
      CHECK(std::abs(h.from_generator - want) < 1e-15);
      CHECK(std::abs(h.from_transport - want) < 1e-12);
    }
    const auto sym = build_model(2, 2, {-2, -1.5, true});
    const auto geos = closed_lightlike_geodesics(sym);
    CHECK(holonomy_multiplier(sym, geos[0]).exact == ExactScalar::e1(3));
    CHECK(holonomy_multiplier(sym, geos[3]).exact == ExactScalar::e2(3));

    std::mt19937 rng(34);
    for (int t = 0; t < 10; ++t) {
      const auto lam = random_lambda(rng);
      const auto mt = build_model(2, 2, lam);
      for (const auto& g : closed_lightlike_geodesics(mt)) {
        const auto h = holonomy_multiplier(mt, g);
        CHECK(std::abs(h.from_generator - h.from_transport) < 1e-12);
        CHECK(std::abs(h.from_generator - std::exp(3 * (g.axis == 2 ? lam.alpha : lam.beta))) < 1e-14);
      }
    }
  }

  TEST_CASE("classification") {
    const auto a = build_model(3, 3, kLambda);
    const auto pair = classify_model(a);
    CHECK(std::abs(pair.gamma - std::exp(-6.0)) < 1e-15);
    CHECK(std::abs(pair.delta - std::exp(-4.5)) < 1e-15);
    CHECK(pair.gamma < pair.delta);
    CHECK(models_equivalent(a, build_model(3, 3, kLambda)));
    CHECK_FALSE(models_equivalent(a, build_model(3, 3, {-2.1, -1.5})));
    CHECK_FALSE(models_equivalent(a, build_model(3, 3, {-1.9, -1.4})));
    try {
      (void)models_equivalent(a, build_model(2, 4, kLambda));
      FAIL("expected SignatureMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SignatureMismatch);
    }
    const auto s1 = build_model(2, 2, {-2, -1.5, true});
    CHECK(models_equivalent(s1, build_model(2, 2, {-2, -1.5, true})));
    CHECK_FALSE(models_equivalent(s1, build_model(2, 2, {-2.05, -1.5, true})));

    std::mt19937 rng(35);
    for (int t = 0; t < 50; ++t) {
      const auto l1 = random_lambda(rng), l2 = random_lambda(rng);
      const auto m1 = build_model(2, 2, l1), m2 = build_model(2, 2, l2);
      CHECK(models_equivalent(m1, m2) == (l1.alpha == l2.alpha && l1.beta == l2.beta));
      CHECK(models_equivalent(m1, build_model(2, 2, l1)));
      const auto p1 = classify_model(m1), p1b = classify_model(build_model(2, 2, l1));
      CHECK(p1.gamma == p1b.gamma);
      CHECK(p1.delta == p1b.delta);
    }
  }

  TEST_CASE("Hausdorff kernel: serial and parallel agree") {
    const auto m = build_model(2, 2, kLambda);
    const ShiftTable shifts(m, 12);
    std::mt19937 rng(36);
    std::vector<Point> a, b;
    for (int i = 0; i < 200; ++i) a.push_back(project_point(m, random_point(rng, 4, 1)).point);
    for (int i = 0; i < 50; ++i) b.push_back(project_point(m, random_point(rng, 4, 1)).point);
    const double par = hausdorff_distance(shifts, a, b, Execution::parallel);
    CHECK(par == hausdorff_distance(shifts, a, b, Execution::serial));
    CHECK(par == hausdorff_distance(shifts, b, a, Execution::parallel));
    CHECK(hausdorff_distance(shifts, a, a) == 0.0);
    b.push_back(a[0]);
    CHECK(hausdorff_distance(shifts, {a[0]}, b) > 0.0);
  }

  TEST_CASE("essentiality witness") {
    const auto m = build_model(3, 3, kLambda);
    const auto w = essentiality_witness(m, {0, 2, 4, 6, 8, 10}, 5, 40);
    REQUIRE(w.rows.size() == 6);
    CHECK(w.rows.front().hausdorff > 0.1);
    CHECK(w.rows.back().hausdorff < 0.05);
    for (std::size_t i = 1; i < w.rows.size(); ++i) CHECK(w.rows[i].hausdorff < w.rows[i - 1].hausdorff);
    for (const auto& r : w.rows) CHECK(r.resolution > 0);
    for (double t : {0.0, 1.0, 5.0}) CHECK(segment_self_distance(m, t) < w.rows.back().resolution);

    const auto serial = essentiality_witness(m, {0, 3}, 3, 10, Execution::serial);
    const auto par = essentiality_witness(m, {0, 3}, 3, 10, Execution::parallel);
    CHECK(serial.rows[0].hausdorff == par.rows[0].hausdorff);
    CHECK(serial.rows[1].hausdorff == par.rows[1].hausdorff);

    CHECK_THROWS_AS(essentiality_witness(m, {0, 1}, 2, 40), Error);
    CHECK_THROWS_AS(essentiality_witness(m, {1, 0}, 5, 40), Error);

    std::ostringstream os;
    write_witness_csv(os, serial);
    CHECK(os.str().rfind("t,hausdorff,resolution\n0,", 0) == 0);
  }

  TEST_CASE("witness decays for random parameters") {
    std::mt19937 rng(37);
    for (int t = 0; t < 5; ++t) {
      const auto m = build_model(2, 2, random_lambda(rng));
      const auto w = essentiality_witness(m, {0, 1.5, 3, 4.5, 6}, 5, 40);
      for (std::size_t i = 1; i < w.rows.size(); ++i) CHECK(w.rows[i].hausdorff < w.rows[i - 1].hausdorff);
    }
  }

  TEST_CASE("model JSON") {
    const auto json = model_json(build_model(2, 2, {-2, -1.5, true})).dump(0);
    CHECK(json.rfind("{\"signature\":[2,2],\"lambda\":{\"alpha\":-2,\"beta\":-1.5,\"symbolic\":true}", 0) == 0);
    CHECK(json.find("\"gamma_exact\":\"E1^3\"") != std::string::npos);
    CHECK(json.find("\"closed_geodesics\":[{\"tag\":\"gamma+\"") != std::string::npos);
  }
}
