#pragma once

#include "polynomial.hpp"

namespace polysmith {

Polynomial gcd(const Polynomial& a, const Polynomial& b);

namespace detail {

inline Polynomial lc_in(const Polynomial& p, std::size_t v) { return univar_view(p, v).back(); }

inline Polynomial var_power(const VarSet& vs, std::size_t v, unsigned e) {
  return Polynomial::monomial(vs, Monomial::var(v, e), Coefficient(1));
}

// lc_v(b)^(deg a - deg b + 1) * a mod b, viewing both as polynomials in v.
inline Polynomial prem(const Polynomial& a, const Polynomial& b, std::size_t v) {
  unsigned db = b.degree_in(v);
  Polynomial lb = lc_in(b, v);
  Polynomial r = a;
  int e = int(a.degree_in(v)) - int(db) + 1;
  while (!r.is_zero() && r.degree_in(v) >= db) {
    unsigned s = r.degree_in(v) - db;
    Polynomial lr = lc_in(r, v);
    r = lb * r - lr * var_power(a.varset(), v, s) * b;
    --e;
  }
  if (e > 0) r = r * pow(lb, unsigned(e));
  return r;
}

inline Polynomial content_in(const Polynomial& p, std::size_t v) {
  auto cs = univar_view(p, v);
  std::sort(cs.begin(), cs.end(), [](const Polynomial& x, const Polynomial& y) { return x.size() < y.size(); });
  Polynomial g(p.varset());
  for (auto& c : cs) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_nonzero_constant()) return g;
  }
  return g;
}

inline Polynomial primitive_in(const Polynomial& p, std::size_t v) {
  return exact_divide(p, content_in(p, v));
}

// Subresultant remainder sequence on polynomials primitive in v.
inline Polynomial subresultant_gcd(Polynomial a, Polynomial b, std::size_t v) {
  const VarSet& vs = a.varset();
  if (a.degree_in(v) < b.degree_in(v)) std::swap(a, b);
  Polynomial g(vs, 1), h(vs, 1);
  while (true) {
    unsigned d = a.degree_in(v) - b.degree_in(v);
    Polynomial r = prem(a, b, v);
    if (r.is_zero()) return primitive_in(b, v);
    if (r.degree_in(v) == 0) return Polynomial(vs, 1);
    a = std::move(b);
    b = exact_divide(r, g * pow(h, d));
    g = lc_in(a, v);
    if (d == 1) {
      h = g;
    } else if (d > 1) {
      h = exact_divide(pow(g, d), pow(h, d - 1));
    }
  }
}

}  // namespace detail

// Normalized so the lex-leading coefficient is 1; gcd(0, 0) = 0.
inline Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  a.check_same(b);
  const VarSet& vs = a.varset();
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  if (a.is_constant() || b.is_constant()) return Polynomial(vs, 1);
  if (a.size() == 1 && b.size() == 1) {
    Monomial m;
    for (std::size_t i = 0; i < kMaxVars; ++i)
      m.e[i] = std::min(a.leading().m.e[i], b.leading().m.e[i]);
    return Polynomial::monomial(vs, m, Coefficient(1));
  }
  std::size_t v = vs.size();
  for (std::size_t i = 0; i < vs.size(); ++i)
    if (a.depends_on(i) || b.depends_on(i)) {
      v = i;
      break;
    }
  if (!a.depends_on(v)) return gcd(a, detail::content_in(b, v));
  if (!b.depends_on(v)) return gcd(detail::content_in(a, v), b);
  Polynomial ca = detail::content_in(a, v), cb = detail::content_in(b, v);
  Polynomial pa = exact_divide(a, ca), pb = exact_divide(b, cb);
  Polynomial c = gcd(ca, cb);
  return monic(c * detail::subresultant_gcd(pa, pb, v));
}

// gcd over a list with an early exit at 1; cheap divisibility probe first.
inline Polynomial gcd_all(const std::vector<Polynomial>& ps, const VarSet& vs) {
  std::vector<const Polynomial*> order;
  for (auto& p : ps)
    if (!p.is_zero()) order.push_back(&p);
  std::sort(order.begin(), order.end(), [](const Polynomial* x, const Polynomial* y) {
    if (x->total_degree() != y->total_degree()) return x->total_degree() < y->total_degree();
    return x->size() < y->size();
  });
  Polynomial g(vs);
  for (auto* p : order) {
    if (p->is_nonzero_constant()) return Polynomial(vs, 1);
    if (!g.is_zero() && divides(g, *p)) continue;
    g = gcd(g, *p);
    if (g.is_nonzero_constant()) return g;
  }
  return g;
}

}  // namespace polysmith
