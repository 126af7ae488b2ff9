#include <algorithm>
#include <cmath>
#include <cstdint>
#include <tuple>
#include <unordered_map>
#include <numeric>
#include <sstream>

#include "conflab/exact_algebra.hpp"

namespace conflab {

namespace {

int degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

void require_same_nvars(int a, int b) {
  if (a != b)
    throw Error(ErrorCode::DimensionMismatch,
                "polynomials in " + std::to_string(a) + " and " + std::to_string(b) + " variables");
}

}  // namespace

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
  const int da = degree(a);
  const int db = degree(b);
  if (da != db) return da < db;
  return a < b;
}

Polynomial Polynomial::constant(int nvars, const ExactScalar& c) {
  Polynomial p(nvars);
  p.add_term(Monomial(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
  if (index < 0 || index >= nvars)
    throw Error(ErrorCode::DimensionMismatch, "variable index " + std::to_string(index));
  Polynomial p(nvars);
  Monomial m(nvars, 0);
  m[index] = 1;
  p.add_term(m, 1);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && degree(terms_.begin()->first) == 0);
}

ExactScalar Polynomial::constant_value() const {
  if (terms_.empty()) return {};
  if (!is_constant()) throw Error(ErrorCode::InvalidArgument, "not constant: " + to_string());
  return terms_.begin()->second;
}

int Polynomial::total_degree() const {
  if (terms_.empty()) return -1;
  return degree(terms_.rbegin()->first);
}

int Polynomial::degree_in(int var) const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m[var]);
  return d;
}

bool Polynomial::has_rational_coefficients() const {
  for (const auto& [m, c] : terms_)
    if (!c.is_rational()) return false;
  return true;
}

const std::pair<const Monomial, ExactScalar>& Polynomial::leading_term() const {
  if (terms_.empty()) throw Error(ErrorCode::InvalidArgument, "zero polynomial has no leading term");
  return *terms_.rbegin();
}

void Polynomial::add_term(const Monomial& m, const ExactScalar& c) {
  if (static_cast<int>(m.size()) != nvars_)
    throw Error(ErrorCode::DimensionMismatch, "monomial length");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  require_same_nvars(nvars_, o.nvars_);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  require_same_nvars(nvars_, o.nvars_);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

namespace {

// Exponent vectors with at most 8 entries below 256 pack into one word whose
// integer order is the lexicographic order of the vectors.
bool packable(int nvars, int degree_bound) { return nvars <= 8 && degree_bound < 256; }

std::uint64_t pack(const Monomial& m) {
  std::uint64_t k = 0;
  for (int e : m) k = (k << 8) | static_cast<std::uint64_t>(e);
  return k;
}

Monomial unpack(std::uint64_t k, int nvars) {
  Monomial m(nvars);
  for (int i = nvars - 1; i >= 0; --i) {
    m[i] = static_cast<int>(k & 0xff);
    k >>= 8;
  }
  return m;
}

template <typename Coeff, typename Get>
void multiply_packed(const Polynomial::Terms& a, const Polynomial::Terms& b, int nvars, Get get,
                     Polynomial::Terms& out) {
  std::vector<std::pair<std::uint64_t, const Coeff*>> pb;
  pb.reserve(b.size());
  for (const auto& [m, c] : b) pb.emplace_back(pack(m), &get(c));
  std::unordered_map<std::uint64_t, Coeff> acc;
  acc.reserve(a.size() * b.size());
  Coeff tmp;
  for (const auto& [ma, ca] : a) {
    const std::uint64_t ka = pack(ma);
    const Coeff& cva = get(ca);
    for (const auto& [kb, cvb] : pb) {
      tmp = cva * *cvb;
      auto [it, inserted] = acc.try_emplace(ka + kb, tmp);
      if (!inserted) it->second += tmp;
    }
  }
  std::vector<std::tuple<int, std::uint64_t, Coeff*>> sorted;
  sorted.reserve(acc.size());
  for (auto& [k, c] : acc) {
    if (c == Coeff(0)) continue;
    int deg = 0;
    for (std::uint64_t t = k; t; t >>= 8) deg += static_cast<int>(t & 0xff);
    sorted.emplace_back(deg, k, &c);
  }
  std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
    return std::get<0>(x) != std::get<0>(y) ? std::get<0>(x) < std::get<0>(y) : std::get<1>(x) < std::get<1>(y);
  });
  for (const auto& [deg, k, c] : sorted) out.emplace_hint(out.end(), unpack(k, nvars), ExactScalar(std::move(*c)));
}

}  // namespace

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  require_same_nvars(a.nvars_, b.nvars_);
  Polynomial out(a.nvars_);
  if (a.is_zero() || b.is_zero()) return out;
  const int bound = a.total_degree() + b.total_degree();
  if (a.terms_.size() * b.terms_.size() > 16 && packable(a.nvars_, bound)) {
    if (a.has_rational_coefficients() && b.has_rational_coefficients()) {
      // Rational coefficients are stored as the single (0,0) term.
      multiply_packed<Rational>(a.terms_, b.terms_, a.nvars_,
                                [](const ExactScalar& c) -> const Rational& { return c.terms().begin()->second; },
                                out.terms_);
    } else {
      multiply_packed<ExactScalar>(a.terms_, b.terms_, a.nvars_,
                                   [](const ExactScalar& c) -> const ExactScalar& { return c; }, out.terms_);
    }
    return out;
  }
  Monomial m(a.nvars_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      for (int i = 0; i < a.nvars_; ++i) m[i] = ma[i] + mb[i];
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

Polynomial operator*(const Polynomial& a, const ExactScalar& c) {
  Polynomial out(a.nvars_);
  if (c.is_zero()) return out;
  for (const auto& [m, ca] : a.terms_) out.add_term(m, ca * c);
  return out;
}

Polynomial Polynomial::pow(int k) const {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "negative polynomial power");
  Polynomial out = constant(nvars_, 1);
  Polynomial base = *this;
  while (k > 0) {
    if (k & 1) out = out * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return out;
}

Polynomial Polynomial::derivative(int var) const {
  if (var < 0 || var >= nvars_) throw Error(ErrorCode::DimensionMismatch, "derivative variable");
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[var] == 0) continue;
    Monomial dm = m;
    --dm[var];
    out.add_term(dm, c * ExactScalar(static_cast<long>(m[var])));
  }
  return out;
}

Polynomial Polynomial::scale_variables(std::span<const ExactScalar> scale) const {
  require_same_nvars(nvars_, static_cast<int>(scale.size()));
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) {
    ExactScalar coef = c;
    for (int i = 0; i < nvars_; ++i)
      for (int e = 0; e < m[i]; ++e) coef *= scale[i];
    out.add_term(m, coef);
  }
  return out;
}

ExactScalar Polynomial::evaluate(std::span<const Rational> point) const {
  require_same_nvars(nvars_, static_cast<int>(point.size()));
  ExactScalar sum;
  for (const auto& [m, c] : terms_) {
    Rational v = 1;
    for (int i = 0; i < nvars_; ++i)
      for (int e = 0; e < m[i]; ++e) v *= point[i];
    sum += c * ExactScalar(v);
  }
  return sum;
}

double Polynomial::evaluate(std::span<const double> point, const ExpBinding& at) const {
  require_same_nvars(nvars_, static_cast<int>(point.size()));
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double v = c.evaluate(at);
    for (int i = 0; i < nvars_; ++i)
      for (int e = 0; e < m[i]; ++e) v *= point[i];
    sum += v;
  }
  return sum;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    const bool bare = degree(m) == 0;
    std::string coef;
    bool negative = false;
    if (c.is_rational()) {
      Rational r = c.rational_value();
      negative = r < 0;
      Rational mag = abs(r);
      if (bare || mag != 1) coef = mag.get_str();
    } else if (c.terms().size() == 1) {
      const auto& [e, r] = *c.terms().begin();
      negative = r < 0;
      coef = (negative ? -c : c).to_string();
    } else {
      coef = "(" + c.to_string() + ")";
    }
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    os << coef;
    bool need_star = !coef.empty();
    for (int i = 0; i < nvars_; ++i) {
      if (m[i] == 0) continue;
      if (need_star) os << "*";
      os << "x" << (i + 1);
      if (m[i] != 1) os << "^" << m[i];
      need_star = true;
    }
  }
  return os.str();
}

}  // namespace conflab
