// Multivariate gcd over Q, extended to the Laurent ring Q[E1^+-1, E2^+-1][x]
// by treating E1, E2 as two extra polynomial variables after shifting their
// exponents to be nonnegative (the shift is a unit and does not affect gcds).

#include <algorithm>
#include <optional>

#include "conflab/exact_algebra.hpp"

namespace conflab {
namespace {

struct FlatPoly {
  int nvars = 0;
  std::map<Monomial, Rational, GrlexLess> terms;

  bool is_zero() const { return terms.empty(); }
  bool is_constant() const {
    return terms.empty() ||
           (terms.size() == 1 &&
            std::all_of(terms.begin()->first.begin(), terms.begin()->first.end(),
                        [](int e) { return e == 0; }));
  }
  void add(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }
};

FlatPoly one(int nvars) {
  FlatPoly p{nvars, {}};
  p.add(Monomial(nvars, 0), 1);
  return p;
}

FlatPoly mul(const FlatPoly& a, const FlatPoly& b) {
  FlatPoly out{a.nvars, {}};
  Monomial m(a.nvars);
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      for (int i = 0; i < a.nvars; ++i) m[i] = ma[i] + mb[i];
      out.add(m, ca * cb);
    }
  return out;
}

FlatPoly sub(const FlatPoly& a, const FlatPoly& b) {
  FlatPoly out = a;
  for (const auto& [m, c] : b.terms) out.add(m, -c);
  return out;
}

FlatPoly scale(const FlatPoly& a, const Rational& c) {
  FlatPoly out{a.nvars, {}};
  for (const auto& [m, ca] : a.terms) out.add(m, ca * c);
  return out;
}

FlatPoly monic(const FlatPoly& a) {
  if (a.is_zero()) return a;
  return scale(a, 1 / a.terms.rbegin()->second);
}

int degree_in(const FlatPoly& p, int v) {
  int d = -1;
  for (const auto& [m, c] : p.terms) d = std::max(d, m[v]);
  return d;
}

/// Coefficient of x_v^k, as a polynomial free of x_v.
FlatPoly coefficient(const FlatPoly& p, int v, int k) {
  FlatPoly out{p.nvars, {}};
  for (const auto& [m, c] : p.terms) {
    if (m[v] != k) continue;
    Monomial mm = m;
    mm[v] = 0;
    out.add(mm, c);
  }
  return out;
}

std::map<int, FlatPoly> coefficients(const FlatPoly& p, int v) {
  std::map<int, FlatPoly> out;
  for (const auto& [m, c] : p.terms) {
    Monomial mm = m;
    mm[v] = 0;
    auto [it, _] = out.try_emplace(m[v], FlatPoly{p.nvars, {}});
    it->second.add(mm, c);
  }
  return out;
}

FlatPoly times_power(const FlatPoly& p, int v, int k) {
  FlatPoly out{p.nvars, {}};
  for (const auto& [m, c] : p.terms) {
    Monomial mm = m;
    mm[v] += k;
    out.terms.emplace(std::move(mm), c);
  }
  return out;
}

std::optional<FlatPoly> try_divide(const FlatPoly& a, const FlatPoly& b) {
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZeroFunction, "exact division by zero");
  FlatPoly q{a.nvars, {}};
  FlatPoly r = a;
  const auto& [mb, cb] = *b.terms.rbegin();
  while (!r.is_zero()) {
    const auto& [mr, cr] = *r.terms.rbegin();
    Monomial t(a.nvars);
    for (int i = 0; i < a.nvars; ++i) {
      t[i] = mr[i] - mb[i];
      if (t[i] < 0) return std::nullopt;
    }
    const Rational f = cr / cb;
    q.add(t, f);
    for (const auto& [m, c] : b.terms) {
      Monomial mm(a.nvars);
      for (int i = 0; i < a.nvars; ++i) mm[i] = m[i] + t[i];
      r.add(mm, -f * c);
    }
  }
  return q;
}

FlatPoly divide(const FlatPoly& a, const FlatPoly& b) {
  auto q = try_divide(a, b);
  if (!q) throw Error(ErrorCode::InvalidArgument, "inexact polynomial division");
  return *q;
}

std::vector<bool> present_variables(const FlatPoly& p) {
  std::vector<bool> out(p.nvars, false);
  for (const auto& [m, c] : p.terms)
    for (int i = 0; i < p.nvars; ++i)
      if (m[i] > 0) out[i] = true;
  return out;
}

FlatPoly gcd(const FlatPoly& a, const FlatPoly& b);

FlatPoly content_in(const FlatPoly& p, int v) {
  FlatPoly g{p.nvars, {}};
  for (const auto& [k, c] : coefficients(p, v)) {
    g = gcd(g, c);
    if (g.is_constant()) return one(p.nvars);
  }
  return g;
}

FlatPoly primitive_part(const FlatPoly& p, int v) { return divide(p, content_in(p, v)); }

/// Pseudo-remainder of a by b with respect to x_v, without the final
/// leading-coefficient power (irrelevant up to content).
FlatPoly pseudo_remainder(const FlatPoly& a, const FlatPoly& b, int v) {
  const int db = degree_in(b, v);
  const FlatPoly lcb = coefficient(b, v, db);
  FlatPoly r = a;
  int dr = degree_in(r, v);
  while (!r.is_zero() && dr >= db) {
    const FlatPoly lcr = coefficient(r, v, dr);
    r = sub(mul(lcb, r), mul(times_power(lcr, v, dr - db), b));
    dr = degree_in(r, v);
  }
  return r;
}

// Heuristic gcd over Z: evaluate the last live variable at a large integer,
// recurse, and lift the integer gcd back by its symmetric xi-adic expansion.
// A candidate is accepted only if it divides both inputs, which together with
// the size of xi makes it the gcd.

mpz_class integer_content(const FlatPoly& p) {
  mpz_class c = 0;
  for (const auto& [m, r] : p.terms) c = gcd(c, mpz_class(r.get_num()));
  return c;
}

FlatPoly clear_denominators(const FlatPoly& p) {
  mpz_class l = 1;
  for (const auto& [m, r] : p.terms) l = lcm(l, mpz_class(r.get_den()));
  FlatPoly out = scale(p, Rational(l));
  const mpz_class c = integer_content(out);
  return c == 0 ? out : scale(out, Rational(1, 1) / Rational(c));
}

mpz_class max_norm(const FlatPoly& p) {
  mpz_class b = 0;
  for (const auto& [m, r] : p.terms) b = std::max(b, mpz_class(abs(r.get_num())));
  return b;
}

FlatPoly evaluate_at(const FlatPoly& p, int v, const mpz_class& xi) {
  std::vector<mpz_class> powers{1};
  FlatPoly out{p.nvars, {}};
  for (const auto& [m, r] : p.terms) {
    while (static_cast<int>(powers.size()) <= m[v]) powers.push_back(powers.back() * xi);
    Monomial mm = m;
    mm[v] = 0;
    out.add(mm, r * Rational(powers[m[v]]));
  }
  return out;
}

FlatPoly lift_xi_adic(FlatPoly h, int v, const mpz_class& xi) {
  FlatPoly out{h.nvars, {}};
  const mpz_class half = xi / 2;
  for (int i = 0; !h.is_zero(); ++i) {
    FlatPoly digit{h.nvars, {}};
    for (const auto& [m, r] : h.terms) {
      mpz_class d = r.get_num() % xi;
      if (d < 0) d += xi;
      if (d > half) d -= xi;
      digit.add(m, Rational(d));
    }
    for (const auto& [m, r] : digit.terms) {
      Monomial mm = m;
      mm[v] = i;
      out.add(mm, r);
    }
    h = scale(sub(h, digit), Rational(1) / Rational(xi));
  }
  return out;
}

std::optional<FlatPoly> heuristic_gcd(const FlatPoly& a, const FlatPoly& b, int budget) {
  const mpz_class ca = integer_content(a), cb = integer_content(b);
  const mpz_class c = gcd(ca, cb);
  const FlatPoly f = scale(a, Rational(1) / Rational(ca));
  const FlatPoly g = scale(b, Rational(1) / Rational(cb));
  int v = -1;
  {
    const auto pf = present_variables(f), pg = present_variables(g);
    for (int i = 0; i < f.nvars; ++i)
      if (pf[i] || pg[i]) v = i;
  }
  if (v < 0) return scale(one(a.nvars), Rational(c));
  mpz_class xi = 2 * std::min(max_norm(f), max_norm(g)) + 29;
  for (int attempt = 0; attempt < 6 && budget > 0; ++attempt, --budget) {
    const FlatPoly ff = evaluate_at(f, v, xi), gg = evaluate_at(g, v, xi);
    if (!ff.is_zero() && !gg.is_zero()) {
      if (auto h = heuristic_gcd(ff, gg, budget)) {
        FlatPoly cand = lift_xi_adic(*h, v, xi);
        const mpz_class cc = integer_content(cand);
        if (cc != 0) {
          cand = scale(cand, Rational(1) / Rational(cc));
          if (try_divide(f, cand) && try_divide(g, cand)) return scale(cand, Rational(c));
        }
      }
    }
    xi = xi * 73794 / 27011;
  }
  return std::nullopt;
}

FlatPoly gcd(const FlatPoly& a, const FlatPoly& b) {
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  if (a.is_constant() || b.is_constant()) return one(a.nvars);
  if (try_divide(a, b)) return monic(b);
  if (try_divide(b, a)) return monic(a);
  if (auto h = heuristic_gcd(clear_denominators(a), clear_denominators(b), 12)) return monic(*h);

  const auto va = present_variables(a);
  const auto vb = present_variables(b);
  for (int v = 0; v < a.nvars; ++v) {
    if (va[v] && !vb[v]) return gcd(content_in(a, v), b);
    if (vb[v] && !va[v]) return gcd(a, content_in(b, v));
  }

  int v = -1;
  int best = 0;
  for (int i = 0; i < a.nvars; ++i) {
    if (!va[i]) continue;
    const int d = std::max(degree_in(a, i), degree_in(b, i));
    if (v < 0 || d < best) {
      v = i;
      best = d;
    }
  }

  const FlatPoly ca = content_in(a, v);
  const FlatPoly cb = content_in(b, v);
  const FlatPoly c = gcd(ca, cb);
  FlatPoly pa = divide(a, ca);
  FlatPoly pb = divide(b, cb);
  if (degree_in(pa, v) < degree_in(pb, v)) std::swap(pa, pb);

  FlatPoly g;
  while (true) {
    FlatPoly r = pseudo_remainder(pa, pb, v);
    if (r.is_zero()) {
      g = pb;
      break;
    }
    if (degree_in(r, v) == 0) {
      g = one(a.nvars);
      break;
    }
    pa = std::move(pb);
    pb = primitive_part(r, v);
  }
  return monic(mul(c, primitive_part(g, v)));
}

struct Flattened {
  FlatPoly poly;
  ExpPair shift;
};

Flattened flatten(const Polynomial& p) {
  const int n = p.nvars();
  ExpPair lo{0, 0};
  bool first = true;
  for (const auto& [m, c] : p.terms())
    for (const auto& [e, r] : c.terms()) {
      if (first) {
        lo = e;
        first = false;
      }
      lo.e1 = std::min(lo.e1, e.e1);
      lo.e2 = std::min(lo.e2, e.e2);
    }
  Flattened out{FlatPoly{n + 2, {}}, lo};
  Monomial fm(n + 2);
  for (const auto& [m, c] : p.terms())
    for (const auto& [e, r] : c.terms()) {
      std::copy(m.begin(), m.end(), fm.begin());
      fm[n] = e.e1 - lo.e1;
      fm[n + 1] = e.e2 - lo.e2;
      out.poly.add(fm, r);
    }
  return out;
}

Polynomial unflatten(const FlatPoly& f, ExpPair shift) {
  const int n = f.nvars - 2;
  Polynomial out(n);
  for (const auto& [fm, r] : f.terms) {
    Monomial m(fm.begin(), fm.begin() + n);
    out.add_term(m, ExactScalar::monomial(r, fm[n] + shift.e1, fm[n + 1] + shift.e2));
  }
  return out;
}

Polynomial normalize_unit(const Polynomial& p) {
  if (p.is_zero()) return p;
  const auto [e, c] = p.leading_term().second.leading_term();
  return p * ExactScalar::monomial(1 / c, -e.e1, -e.e2);
}

}  // namespace

Polynomial polynomial_gcd(const Polynomial& a, const Polynomial& b) {
  if (a.nvars() != b.nvars()) throw Error(ErrorCode::DimensionMismatch, "gcd operands");
  const auto fa = flatten(a);
  const auto fb = flatten(b);
  return normalize_unit(unflatten(gcd(fa.poly, fb.poly), {}));
}

Polynomial polynomial_exact_divide(const Polynomial& a, const Polynomial& b) {
  if (a.nvars() != b.nvars()) throw Error(ErrorCode::DimensionMismatch, "division operands");
  const auto fa = flatten(a);
  const auto fb = flatten(b);
  return unflatten(divide(fa.poly, fb.poly),
                   {fa.shift.e1 - fb.shift.e1, fa.shift.e2 - fb.shift.e2});
}

}  // namespace conflab
