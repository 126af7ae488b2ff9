#include <cmath>
#include <random>

#include "conflab/conformal.hpp"
#include "doctest.h"

using namespace conflab;
using namespace conflab::conformal;
using conflab::tensor::build_g0;

namespace {

const std::vector<std::pair<int, int>> kSignatures = {{2, 2}, {2, 3}, {3, 3}, {2, 4}, {3, 4}};

ExactScalar mono(const Rational& c, int a, int b) { return ExactScalar::monomial(c, a, b); }

// Entry i of phi_lambda as exponent coefficients of (alpha, beta).
std::pair<int, int> pattern(int i) {
  switch (i) {
    case 0: return {-1, 2};
    case 1: return {3, 0};
    case 2: return {2, -1};
    case 3: return {0, 3};
    default: return {1, 1};
  }
}

// Independent oracle: a diagonal map of the phi pattern where "alpha" and
// "beta" are themselves random units r E1^a E2^b and s E1^c E2^d.
DiagonalMap random_pattern_map(std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> e(-2, 2);
  const std::vector<Rational> coefs = {make_rational(1), make_rational(2), make_rational(1, 3)};
  std::uniform_int_distribution<std::size_t> pick(0, coefs.size() - 1);
  const ExactScalar u = mono(coefs[pick(rng)], e(rng), e(rng));
  const ExactScalar v = mono(coefs[pick(rng)], e(rng), e(rng));
  std::vector<ExactScalar> d;
  for (int i = 0; i < n; ++i) {
    const auto [pa, pb] = pattern(i);
    d.push_back(u.unit_pow(pa) * v.unit_pow(pb));
  }
  return DiagonalMap(std::move(d), ExpBinding{0.3, -0.2});
}

double numeric_factor(const DiagonalMap& m, const tensor::MetricSpec& g) {
  return conformal_factor(m, g).evaluate(m.binding());
}

}  // namespace

TEST_SUITE("conformal") {
  TEST_CASE("phi_lambda entries") {
    const LambdaParams lam{-2, -1.5, true};
    const auto phi6 = make_phi_lambda(lam, 6);
    CHECK(phi6.entry(4) == mono(1, 1, 1));
    CHECK(phi6.entry(5) == mono(1, 1, 1));
    const auto phi4 = make_phi_lambda(lam, 4);
    CHECK(phi4.entries() ==
          std::vector<ExactScalar>{mono(1, -1, 2), mono(1, 3, 0), mono(1, 2, -1), mono(1, 0, 3)});
    const auto id = make_phi_lambda({0, 0}, 5).numeric_entries();
    for (double d : id) CHECK(d == 1.0);
    CHECK_THROWS_AS(make_phi_lambda(lam, 3), Error);

    const auto num = make_phi_lambda({-2, -1.5}, 6).numeric_entries();
    const std::vector<double> expected = {std::exp(-1.0), std::exp(-6.0), std::exp(-2.5),
                                          std::exp(-4.5), std::exp(-3.5), std::exp(-3.5)};
    for (int i = 0; i < 6; ++i) CHECK(num[i] == doctest::Approx(expected[i]).epsilon(1e-15));
  }

  TEST_CASE("lambda admissibility") {
    const auto ok = validate_lambda({-2, -1.5});
    CHECK(ok.admissible);
    CHECK(ok.exponents_negative);
    const std::array<double, 5> e = {-1, -6, -2.5, -4.5, -3.5};
    CHECK(ok.exponents == e);
    CHECK_FALSE(validate_lambda({-1, -0.4}).admissible);
    CHECK_FALSE(validate_lambda({-1.5, -2}).admissible);
    CHECK_FALSE(validate_lambda({0, 0}).admissible);

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-4, 1);
    int admitted = 0;
    for (int t = 0; t < 2000; ++t) {
      const double a = u(rng), b = u(rng);
      const bool brute = a < b && b < a / 2 && a / 2 < 0;
      const auto v = validate_lambda({a, b});
      CHECK(v.admissible == brute);
      if (!brute) continue;
      ++admitted;
      for (double d : make_phi_lambda({a, b}, 7).numeric_entries()) {
        CHECK(d > 0.0);
        CHECK(d < 1.0);
      }
    }
    CHECK(admitted > 50);
  }

  TEST_CASE("pullback of g0 by phi_lambda is exact") {
    for (auto [p, q] : kSignatures) {
      const auto g = build_g0(p, q);
      const int n = g.dim();
      const auto phi = make_phi_lambda({-2, -1.5, true}, n);
      const auto pulled = pullback_components(phi, g);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) CHECK(pulled[i * n + j] == g(i, j) * mono(1, 2, 2));
      const Polynomial x3 = Polynomial::variable(n, 2);
      CHECK(pulled[0] == x3 * x3 * mono(1, 2, 2));
      CHECK(conformal_factor(phi, g) == mono(1, 2, 2));
      CHECK(pullback_metric(phi, g).components() == pulled);
    }
  }

  TEST_CASE("identity and non-conformal maps") {
    const auto g = build_g0(3, 3);
    const auto id = DiagonalMap::identity(6);
    CHECK(pullback_components(id, g) == g.components());
    CHECK(conformal_factor(id, g) == ExactScalar(1));

    std::vector<ExactScalar> d(6, ExactScalar(1));
    d[0] = ExactScalar(2);
    try {
      (void)conformal_factor(DiagonalMap(d), g);
      FAIL("expected NotConformal");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotConformal);
      CHECK(std::string(e.what()).find("(1,2)") != std::string::npos);
    }
    CHECK_THROWS_AS(DiagonalMap({ExactScalar(-1), ExactScalar(1), ExactScalar(1), ExactScalar(1)}), Error);
    CHECK_THROWS_AS(DiagonalMap({ExactScalar(1) + ExactScalar::e1(), ExactScalar(1), ExactScalar(1),
                                 ExactScalar(1)}),
                    Error);
    CHECK_THROWS_AS(pullback_components(DiagonalMap::identity(4), g), Error);
  }

  TEST_CASE("essential flow") {
    for (int n : {4, 6, 7}) {
      const auto g0 = build_g0(2, n - 2);
      for (double d : make_essential_flow(0, n).numeric_entries()) CHECK(d == 1.0);
      for (double t : {0.5, 1.0, 2.0}) {
        const auto flow = make_essential_flow(t, n);
        CHECK(std::abs(numeric_factor(flow, g0) - std::exp(-3 * t)) < 1e-12);
        const auto num = flow.numeric_entries();
        CHECK(std::abs(num[0] - std::exp(-1.5 * t)) < 1e-12);
        CHECK(std::abs(num[1] - std::exp(-1.5 * t)) < 1e-12);
        CHECK(num[2] == 1.0);
        CHECK(std::abs(num[3] - std::exp(-3 * t)) < 1e-12);
        for (int j = 4; j < n; ++j) CHECK(std::abs(num[j] - std::exp(-1.5 * t)) < 1e-12);
      }
    }
    const int n = 6;
    for (double t : {0.25, 1.0, 3.0})
      for (double s : {0.5, -1.0, 2.0}) {
        const auto lhs = compose_numeric(make_essential_flow(t, n), make_essential_flow(s, n));
        CHECK(max_entry_difference(lhs, make_essential_flow(t + s, n).numeric_entries()) < 1e-12);
        const auto phi = make_phi_lambda({-2, -1.5}, n);
        CHECK(max_entry_difference(compose_numeric(make_essential_flow(t, n), phi),
                                   compose_numeric(phi, make_essential_flow(t, n))) < 1e-12);
      }
    // numeric pullback at t = 1 against e^-3 g0 at sample points
    const auto g0 = build_g0(3, 3);
    const auto flow = make_essential_flow(1.0, 6);
    const auto pulled = pullback_components(flow, g0);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int t = 0; t < 5; ++t) {
      std::vector<double> x(6);
      for (auto& v : x) v = u(rng);
      for (int k = 0; k < 36; ++k)
        CHECK(std::abs(pulled[k].evaluate(x, flow.binding()) - std::exp(-3.0) * g0.components()[k].evaluate(x)) <
              1e-12);
    }
  }

  TEST_CASE("diagonal conformal maps have the phi_lambda pattern") {
    std::mt19937 rng(77);
    const auto g = build_g0(2, 4);
    int conformal = 0, rejected = 0;
    for (int t = 0; t < 200; ++t) {
      DiagonalMap m = random_pattern_map(rng, 6);
      if (t % 2 == 1) {
        // perturb one entry by a random unit
        std::vector<ExactScalar> d = m.entries();
        std::uniform_int_distribution<int> idx(0, 5), e(-1, 1);
        const ExactScalar bump = mono(make_rational(1 + idx(rng) % 2, 1), e(rng), e(rng));
        d[idx(rng)] *= bump;
        m = DiagonalMap(d, m.binding());
      }
      bool is_conformal = true;
      try {
        (void)conformal_factor(m, g);
      } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::NotConformal);
        is_conformal = false;
      }
      const auto lam = recover_lambda(m);
      CHECK(is_conformal == lam.has_value());
      if (!lam) {
        ++rejected;
        continue;
      }
      ++conformal;
      const auto rebuilt = make_phi_lambda(*lam, 6).numeric_entries();
      const auto actual = m.numeric_entries();
      for (int i = 0; i < 6; ++i) CHECK(std::abs(rebuilt[i] - actual[i]) <= 1e-12 * std::max(1.0, actual[i]));
    }
    CHECK(conformal >= 100);
    CHECK(rejected > 20);
  }

  TEST_CASE("conformal factor is multiplicative") {
    std::mt19937 rng(13);
    const auto g = build_g0(3, 4);
    for (int t = 0; t < 30; ++t) {
      const auto a = random_pattern_map(rng, 7);
      const auto b = random_pattern_map(rng, 7);
      CHECK(conformal_factor(compose(a, b), g) == conformal_factor(a, g) * conformal_factor(b, g));
      CHECK(conformal_factor(a.inverse(), g) == conformal_factor(a, g).unit_inverse());
      CHECK(conformal_factor(a.pow(3), g) == conformal_factor(a, g).unit_pow(3));
    }
    const auto phi = make_phi_lambda({-2, -1.5}, 7);
    CHECK_THROWS_AS(compose(phi, make_essential_flow(1, 7)), Error);
  }
}
