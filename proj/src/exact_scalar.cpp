#include <cmath>
#include <limits>
#include <sstream>

#include "conflab/exact_algebra.hpp"

namespace conflab {

Rational make_rational(long num, long den) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

ExactScalar::ExactScalar(const Rational& c) {
  if (c != 0) terms_.emplace(ExpPair{}, c);
}

ExactScalar::ExactScalar(long c) : ExactScalar(Rational(c)) {}

ExactScalar ExactScalar::monomial(const Rational& c, int e1, int e2) {
  ExactScalar s;
  if (c != 0) s.terms_.emplace(ExpPair{e1, e2}, c);
  return s;
}

bool ExactScalar::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == ExpPair{});
}

Rational ExactScalar::rational_value() const {
  if (terms_.empty()) return 0;
  if (!is_rational()) throw Error(ErrorCode::NonRationalValue, to_string());
  return terms_.begin()->second;
}

ExactScalar ExactScalar::unit_inverse() const {
  if (!is_unit()) throw Error(ErrorCode::InvalidArgument, "not a unit: " + to_string());
  const auto& [e, c] = *terms_.begin();
  return monomial(1 / c, -e.e1, -e.e2);
}

ExactScalar ExactScalar::unit_pow(int k) const {
  if (!is_unit()) throw Error(ErrorCode::InvalidArgument, "not a unit: " + to_string());
  const auto& [e, c] = *terms_.begin();
  Rational base = k >= 0 ? c : Rational(1 / c);
  Rational out = 1;
  for (int i = 0; i < std::abs(k); ++i) out *= base;
  return monomial(out, e.e1 * k, e.e2 * k);
}

std::pair<ExpPair, Rational> ExactScalar::leading_term() const {
  if (terms_.empty()) throw Error(ErrorCode::InvalidArgument, "zero has no leading term");
  return *terms_.rbegin();
}

void ExactScalar::add_term(const ExpPair& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

ExactScalar ExactScalar::operator-() const {
  ExactScalar out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
  ExactScalar out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) out.add_term({ea.e1 + eb.e1, ea.e2 + eb.e2}, ca * cb);
  return out;
}

ExactScalar& ExactScalar::operator*=(const ExactScalar& o) { return *this = *this * o; }

double ExactScalar::evaluate(const ExpBinding& at) const {
  static const double kMaxExponent = std::log(std::numeric_limits<double>::max());
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    const double exponent = e.e1 * at.alpha + e.e2 * at.beta;
    if (!std::isfinite(exponent) || exponent > kMaxExponent)
      throw Error(ErrorCode::Overflow, "exponent " + std::to_string(exponent) + " in " + to_string());
    sum += c.get_d() * std::exp(exponent);
  }
  return sum;
}

std::string ExactScalar::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    const bool bare = e == ExpPair{};
    if (bare || mag != 1) {
      os << mag.get_str();
      if (!bare) os << "*";
    }
    bool need_star = false;
    auto factor = [&](const char* name, int k) {
      if (k == 0) return;
      if (need_star) os << "*";
      os << name;
      if (k != 1) os << "^" << k;
      need_star = true;
    };
    factor("E1", e.e1);
    factor("E2", e.e2);
  }
  return os.str();
}

}  // namespace conflab
