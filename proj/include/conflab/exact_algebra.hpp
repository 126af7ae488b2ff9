#pragma once

// Exact arithmetic kernel.
//
//   ExactScalar      finite sums  sum c * E1^m * E2^n,  c rational, m,n integers,
//                    where E1 = e^alpha and E2 = e^beta are kept symbolic.
//   Polynomial       multivariate polynomial in x1..xn over ExactScalar.
//   RationalFunction reduced fraction of two polynomials, canonical so that
//                    equality is structural equality.
//
// All values are immutable in practice (operators return new values) and safe
// to share across threads.

#include <compare>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "conflab/error.hpp"

namespace conflab {

using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
std::string to_string(const Rational& r);

/// Laurent exponents of (E1, E2).
struct ExpPair {
  int e1 = 0;
  int e2 = 0;
  auto operator<=>(const ExpPair&) const = default;
};

/// Numeric values of log E1 and log E2 used when specializing to floating point.
struct ExpBinding {
  double alpha = 0.0;
  double beta = 0.0;
  bool operator==(const ExpBinding&) const = default;
};

class ExactScalar {
 public:
  using Terms = std::map<ExpPair, Rational>;

  ExactScalar() = default;
  ExactScalar(const Rational& c);  // NOLINT: rationals embed implicitly
  ExactScalar(long c);             // NOLINT

  static ExactScalar monomial(const Rational& c, int e1, int e2);
  static ExactScalar e1(int power = 1) { return monomial(1, power, 0); }
  static ExactScalar e2(int power = 1) { return monomial(1, 0, power); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Zero or a single (0,0) term.
  bool is_rational() const;
  Rational rational_value() const;
  /// Exactly one term: c * E1^m * E2^n with c != 0. These are the units of the ring.
  bool is_unit() const { return terms_.size() == 1; }
  ExactScalar unit_inverse() const;
  ExactScalar unit_pow(int k) const;
  /// Largest term under the (e1, e2) lexicographic order.
  std::pair<ExpPair, Rational> leading_term() const;

  ExactScalar operator-() const;
  ExactScalar& operator+=(const ExactScalar& o);
  ExactScalar& operator-=(const ExactScalar& o);
  ExactScalar& operator*=(const ExactScalar& o);
  friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
  friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
  friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b);
  bool operator==(const ExactScalar& o) const { return terms_ == o.terms_; }

  /// sum c * exp(m*alpha + n*beta). Throws Overflow when a term leaves the double range.
  double evaluate(const ExpBinding& at) const;

  std::string to_string() const;

 private:
  void add_term(const ExpPair& e, const Rational& c);
  Terms terms_;
};

using Monomial = std::vector<int>;

/// Graded lexicographic order, x1 most significant.
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

class Polynomial {
 public:
  using Terms = std::map<Monomial, ExactScalar, GrlexLess>;

  explicit Polynomial(int nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(int nvars, const ExactScalar& c);
  /// x_{index+1}; index is zero-based.
  static Polynomial variable(int nvars, int index);

  int nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  ExactScalar constant_value() const;
  int total_degree() const;
  int degree_in(int var) const;
  bool has_rational_coefficients() const;
  /// Largest term under grlex. Precondition: nonzero.
  const std::pair<const Monomial, ExactScalar>& leading_term() const;

  void add_term(const Monomial& m, const ExactScalar& c);

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const ExactScalar& c);
  friend Polynomial operator*(const ExactScalar& c, const Polynomial& a) { return a * c; }
  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  Polynomial pow(int k) const;
  Polynomial derivative(int var) const;
  /// x_i -> scale[i] * x_i.
  Polynomial scale_variables(std::span<const ExactScalar> scale) const;

  ExactScalar evaluate(std::span<const Rational> point) const;
  double evaluate(std::span<const double> point, const ExpBinding& at = {}) const;

  std::string to_string() const;

 private:
  int nvars_;
  Terms terms_;
};

class RationalFunction {
 public:
  explicit RationalFunction(int nvars = 0);
  RationalFunction(Polynomial numerator);  // NOLINT: polynomials embed implicitly
  /// Reduces to canonical form. Throws DivisionByZeroFunction if den is zero.
  RationalFunction(Polynomial numerator, Polynomial denominator);
  /// numerator / base^power in canonical form; the gcd work is done against
  /// base rather than its power.
  static RationalFunction over_power(Polynomial numerator, const Polynomial& base, int power);

  int nvars() const { return num_.nvars(); }
  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  /// Denominator is exactly 1.
  bool is_polynomial() const;

  RationalFunction operator-() const;
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
  bool operator==(const RationalFunction& o) const { return num_ == o.num_ && den_ == o.den_; }

  RationalFunction derivative(int var) const;

  /// Throws PoleAtPoint if the denominator vanishes, NonRationalValue if the
  /// denominator value is not a unit of the scalar ring.
  ExactScalar evaluate(std::span<const Rational> point) const;
  double evaluate(std::span<const double> point, const ExpBinding& at = {},
                  double pole_tolerance = 0.0) const;

  std::string to_string() const;

 private:
  struct Unreduced {};
  RationalFunction(Polynomial numerator, Polynomial denominator, Unreduced)
      : num_(std::move(numerator)), den_(std::move(denominator)) {}
  Polynomial num_;
  Polynomial den_;
};

/// gcd over the Laurent ring Q[E1^+-1, E2^+-1][x1..xn], normalized so that its
/// leading coefficient's leading term is 1.
Polynomial polynomial_gcd(const Polynomial& a, const Polynomial& b);
/// Exact quotient a / b. Throws InvalidArgument when b does not divide a.
Polynomial polynomial_exact_divide(const Polynomial& a, const Polynomial& b);

}  // namespace conflab
