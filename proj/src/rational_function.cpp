#include <cmath>

#include "conflab/exact_algebra.hpp"

namespace conflab {

namespace {

ExactScalar leading_unit(const Polynomial& den) {
  const auto [e, c] = den.leading_term().second.leading_term();
  return ExactScalar::monomial(c, e.e1, e.e2);
}

}  // namespace

RationalFunction::RationalFunction(int nvars)
    : num_(nvars), den_(Polynomial::constant(nvars, 1)) {}

RationalFunction::RationalFunction(Polynomial numerator)
    : num_(std::move(numerator)), den_(Polynomial::constant(num_.nvars(), 1)) {}

RationalFunction::RationalFunction(Polynomial numerator, Polynomial denominator) {
  if (numerator.nvars() != denominator.nvars())
    throw Error(ErrorCode::DimensionMismatch, "numerator/denominator variable counts");
  if (denominator.is_zero())
    throw Error(ErrorCode::DivisionByZeroFunction, "denominator is the zero polynomial");
  const int n = numerator.nvars();
  if (numerator.is_zero()) {
    num_ = Polynomial(n);
    den_ = Polynomial::constant(n, 1);
    return;
  }
  if (denominator.is_constant() && denominator.constant_value().is_unit()) {
    num_ = numerator * denominator.constant_value().unit_inverse();
    den_ = Polynomial::constant(n, 1);
    return;
  }
  const Polynomial g = polynomial_gcd(numerator, denominator);
  if (!(g.is_constant() && g.constant_value().is_unit())) {
    numerator = polynomial_exact_divide(numerator, g);
    denominator = polynomial_exact_divide(denominator, g);
  }
  const ExactScalar u = leading_unit(denominator).unit_inverse();
  num_ = numerator * u;
  den_ = denominator * u;
}

RationalFunction RationalFunction::over_power(Polynomial numerator, const Polynomial& base, int power) {
  const int n = numerator.nvars();
  if (base.nvars() != n) throw Error(ErrorCode::DimensionMismatch, "numerator/denominator variable counts");
  if (base.is_zero()) throw Error(ErrorCode::DivisionByZeroFunction, "denominator is the zero polynomial");
  if (numerator.is_zero()) return RationalFunction(n);
  if (base.is_constant() && base.constant_value().is_unit())
    return RationalFunction(std::move(numerator), base.pow(power));
  Polynomial removed = Polynomial::constant(n, 1);
  for (int step = 0; step < power; ++step) {
    const Polynomial h = polynomial_gcd(numerator, base);
    if (h.is_constant() && h.constant_value().is_unit()) break;
    numerator = polynomial_exact_divide(numerator, h);
    removed = removed * h;
  }
  Polynomial denominator = polynomial_exact_divide(base.pow(power), removed);
  const ExactScalar u = leading_unit(denominator).unit_inverse();
  return {numerator * u, denominator * u, Unreduced{}};
}

bool RationalFunction::is_polynomial() const {
  return den_.is_constant() && den_.constant_value() == ExactScalar(1);
}

RationalFunction RationalFunction::operator-() const { return {-num_, den_, Unreduced{}}; }

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) {
    if (a.is_polynomial()) return {a.num_ + b.num_, a.den_, RationalFunction::Unreduced{}};
    return {a.num_ + b.num_, a.den_};
  }
  return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero() || b.is_zero()) return RationalFunction(a.nvars());
  if (a.is_polynomial() && b.is_polynomial())
    return {a.num_ * b.num_, a.den_, RationalFunction::Unreduced{}};
  return {a.num_ * b.num_, a.den_ * b.den_};
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZeroFunction, "division by the zero function");
  return {a.num_ * b.den_, a.den_ * b.num_};
}

RationalFunction RationalFunction::derivative(int var) const {
  if (is_polynomial()) return {num_.derivative(var), den_, Unreduced{}};
  return {num_.derivative(var) * den_ - num_ * den_.derivative(var), den_ * den_};
}

ExactScalar RationalFunction::evaluate(std::span<const Rational> point) const {
  const ExactScalar d = den_.evaluate(point);
  if (d.is_zero()) throw Error(ErrorCode::PoleAtPoint, "denominator " + den_.to_string() + " vanishes");
  if (!d.is_unit())
    throw Error(ErrorCode::NonRationalValue, "denominator value " + d.to_string() + " is not a unit");
  return num_.evaluate(point) * d.unit_inverse();
}

double RationalFunction::evaluate(std::span<const double> point, const ExpBinding& at,
                                  double pole_tolerance) const {
  const double d = den_.evaluate(point, at);
  if (d == 0.0 || std::abs(d) <= pole_tolerance)
    throw Error(ErrorCode::PoleAtPoint, "denominator " + den_.to_string() + " vanishes");
  return num_.evaluate(point, at) / d;
}

std::string RationalFunction::to_string() const {
  if (is_polynomial()) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

}  // namespace conflab
