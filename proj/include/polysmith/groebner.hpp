#pragma once

#include <vector>

#include "polynomial.hpp"

namespace polysmith {

class IdealGens {
 public:
  explicit IdealGens(const std::vector<Polynomial>& gens) {
    for (auto& g : gens) {
      if (!gens_.empty()) gens_.front().check_same(g);
      if (!g.is_zero()) gens_.push_back(g);
    }
    if (gens_.empty()) throw UsageError("ideal generators are all zero");
  }
  const std::vector<Polynomial>& generators() const { return gens_; }
  const VarSet& varset() const { return gens_.front().varset(); }

 private:
  std::vector<Polynomial> gens_;
};

struct ReducedGB {
  std::vector<Polynomial> basis;
  MonomialOrder order;

  bool is_unit() const { return basis.size() == 1 && basis[0].is_nonzero_constant(); }
};

namespace detail {

struct ZTerm {
  Monomial m;
  mpz_class c;
};
using ZPoly = std::vector<ZTerm>;

inline void make_primitive(ZPoly& p) {
  if (p.empty()) return;
  mpz_class g = 0;
  for (auto& t : p) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.c.get_mpz_t());
    if (g == 1) break;
  }
  if (p.front().c < 0) g = -g;
  if (g != 1)
    for (auto& t : p) mpz_divexact(t.c.get_mpz_t(), t.c.get_mpz_t(), g.get_mpz_t());
}

inline ZPoly to_zpoly(const Polynomial& p, const MonomialOrder& ord) {
  mpz_class den = 1;
  for (auto& t : p.terms()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.c.get_den_mpz_t());
  ZPoly z;
  z.reserve(p.size());
  for (auto& t : p.terms()) {
    mpz_class c = t.c.get_num() * (den / t.c.get_den());
    z.push_back({t.m, std::move(c)});
  }
  std::sort(z.begin(), z.end(), [&](const ZTerm& a, const ZTerm& b) { return ord.greater(a.m, b.m); });
  make_primitive(z);
  return z;
}

inline Polynomial from_zpoly(const ZPoly& z, const VarSet& vs) {
  std::vector<Term> ts;
  if (z.empty()) return Polynomial(vs);
  Coefficient lead(z.front().c);
  for (auto& t : z) ts.push_back({t.m, Coefficient(t.c) / lead});
  return Polynomial::from_terms(vs, std::move(ts));
}

// fa*f + gb*m*g, both order-sorted.
inline ZPoly combine(const ZPoly& f, const mpz_class& fa, const ZPoly& g, const mpz_class& gb, const Monomial& m,
                     const MonomialOrder& ord) {
  ZPoly r;
  r.reserve(f.size() + g.size());
  std::size_t i = 0, j = 0;
  while (i < f.size() || j < g.size()) {
    if (j == g.size()) {
      r.push_back({f[i].m, f[i].c * fa});
      ++i;
      continue;
    }
    Monomial gm = g[j].m * m;
    int cmp = i == f.size() ? -1 : ord.compare(f[i].m, gm);
    if (cmp > 0) {
      r.push_back({f[i].m, f[i].c * fa});
      ++i;
    } else if (cmp < 0) {
      r.push_back({gm, g[j].c * gb});
      ++j;
    } else {
      mpz_class s = f[i].c * fa + g[j].c * gb;
      if (s != 0) r.push_back({gm, std::move(s)});
      ++i;
      ++j;
    }
  }
  return r;
}

inline const ZPoly* find_reducer(const Monomial& m, const std::vector<ZPoly>& polys,
                                 const std::vector<std::size_t>& active) {
  for (auto i : active)
    if (polys[i].front().m.divides(m)) return &polys[i];
  return nullptr;
}

// Fraction-free reduction. With full = false only the leading term is
// reduced away.
inline ZPoly reduce(ZPoly f, const std::vector<ZPoly>& polys, const std::vector<std::size_t>& active,
                    const MonomialOrder& ord, bool full) {
  ZPoly rem;
  std::size_t steps = 0;
  while (!f.empty()) {
    const ZPoly* g = find_reducer(f.front().m, polys, active);
    if (!g) {
      if (!full) break;
      rem.push_back(std::move(f.front()));
      f.erase(f.begin());
      continue;
    }
    mpz_class a = f.front().c, b = g->front().c, gg;
    mpz_gcd(gg.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_class fa = b / gg, gb = -(a / gg);
    Monomial m = f.front().m / g->front().m;
    f = combine(f, fa, *g, gb, m, ord);
    if (fa != 1)
      for (auto& t : rem) t.c *= fa;
    if (++steps % 16 == 0) {
      // Content shared by remainder and working part can be removed jointly.
      ZPoly both = rem;
      both.insert(both.end(), f.begin(), f.end());
      if (!both.empty()) {
        mpz_class c = 0;
        for (auto& t : both) mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), t.c.get_mpz_t());
        if (c > 1) {
          for (auto& t : rem) mpz_divexact(t.c.get_mpz_t(), t.c.get_mpz_t(), c.get_mpz_t());
          for (auto& t : f) mpz_divexact(t.c.get_mpz_t(), t.c.get_mpz_t(), c.get_mpz_t());
        }
      }
    }
  }
  rem.insert(rem.end(), f.begin(), f.end());
  make_primitive(rem);
  return rem;
}

inline ZPoly spoly(const ZPoly& f, const ZPoly& g, const MonomialOrder& ord) {
  Monomial l = f.front().m.lcm(g.front().m);
  mpz_class a = f.front().c, b = g.front().c, gg;
  mpz_gcd(gg.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  ZPoly fs = combine({}, 0, f, b / gg, l / f.front().m, ord);
  ZPoly r = combine(fs, 1, g, -(a / gg), l / g.front().m, ord);
  make_primitive(r);
  return r;
}

inline bool is_unit_poly(const ZPoly& p) { return p.size() == 1 && p.front().m.is_one(); }

struct Pair {
  std::size_t i, j;
  Monomial lcm;
};

struct BuchbergerState {
  MonomialOrder ord;
  std::vector<ZPoly> polys;
  std::vector<std::size_t> active;
  std::vector<Pair> pairs;
  bool unit = false;

  // Gebauer–Möller update with the new element h = polys.back().
  void update() {
    std::size_t h = polys.size() - 1;
    const Monomial& lh = polys[h].front().m;
    std::vector<Pair> c, d;
    for (auto g : active) c.push_back({h, g, lh.lcm(polys[g].front().m)});
    for (std::size_t a = 0; a < c.size(); ++a) {
      bool coprime = lh.coprime(polys[c[a].j].front().m);
      bool dominated = false;
      if (!coprime) {
        for (std::size_t b = a + 1; b < c.size() && !dominated; ++b)
          if (c[b].lcm.divides(c[a].lcm)) dominated = true;
        for (auto& p : d)
          if (!dominated && p.lcm.divides(c[a].lcm)) dominated = true;
      }
      if (coprime || !dominated) d.push_back(c[a]);
    }
    std::vector<Pair> kept;
    for (auto& p : pairs) {
      bool drop = lh.divides(p.lcm) && lh.lcm(polys[p.i].front().m) != p.lcm &&
                  lh.lcm(polys[p.j].front().m) != p.lcm;
      if (!drop) kept.push_back(p);
    }
    for (auto& p : d)
      if (!lh.coprime(polys[p.j].front().m)) kept.push_back(p);
    pairs = std::move(kept);
    std::vector<std::size_t> na;
    for (auto g : active)
      if (!lh.divides(polys[g].front().m)) na.push_back(g);
    na.push_back(h);
    active = std::move(na);
  }

  void add(ZPoly p) {
    if (p.empty()) return;
    if (is_unit_poly(p)) unit = true;
    polys.push_back(std::move(p));
    update();
  }

  void run(bool stop_at_unit) {
    while (!pairs.empty() && !(stop_at_unit && unit)) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < pairs.size(); ++k)
        if (ord.compare(pairs[k].lcm, pairs[best].lcm) < 0) best = k;
      Pair p = pairs[best];
      pairs.erase(pairs.begin() + long(best));
      ZPoly s = spoly(polys[p.i], polys[p.j], ord);
      s = reduce(std::move(s), polys, active, ord, false);
      add(std::move(s));
    }
  }
};

inline BuchbergerState start(const IdealGens& gens, const MonomialOrder& ord, bool stop_at_unit) {
  BuchbergerState st{ord, {}, {}, {}, false};
  std::vector<ZPoly> zs;
  for (auto& g : gens.generators()) zs.push_back(to_zpoly(g, ord));
  std::sort(zs.begin(), zs.end(), [&](const ZPoly& a, const ZPoly& b) { return ord.compare(a.front().m, b.front().m) < 0; });
  for (auto& z : zs) {
    if (is_unit_poly(z)) st.unit = true;
    if (stop_at_unit && st.unit) return st;
    st.add(reduce(std::move(z), st.polys, st.active, ord, false));
  }
  return st;
}

}  // namespace detail

// Leading term of p under ord.
inline Term leading_term(const Polynomial& p, const MonomialOrder& ord) {
  if (p.is_zero()) throw UsageError("leading term of zero polynomial");
  const Term* best = &p.terms().front();
  for (auto& t : p.terms())
    if (ord.greater(t.m, best->m)) best = &t;
  return *best;
}

inline ReducedGB buchberger_reduced(const IdealGens& gens, const MonomialOrder& ord = MonomialOrder::lex()) {
  auto st = detail::start(gens, ord, false);
  st.run(false);
  const VarSet& vs = gens.varset();
  if (st.unit) return {{Polynomial(vs, 1)}, ord};
  // Active leading monomials are already minimal; interreduce tails.
  std::vector<detail::ZPoly> red;
  for (auto i : st.active) {
    std::vector<std::size_t> others;
    for (auto j : st.active)
      if (j != i) others.push_back(j);
    red.push_back(detail::reduce(detail::ZPoly(st.polys[i]), st.polys, others, ord, true));
  }
  std::vector<Polynomial> out;
  for (auto& z : red) out.push_back(detail::from_zpoly(z, vs));
  std::sort(out.begin(), out.end(), [&](const Polynomial& a, const Polynomial& b) {
    return ord.greater(leading_term(a, ord).m, leading_term(b, ord).m);
  });
  return {std::move(out), ord};
}

inline bool is_unit_ideal(const IdealGens& gens, const MonomialOrder& ord = MonomialOrder::lex()) {
  for (auto& g : gens.generators())
    if (g.is_nonzero_constant()) return true;
  auto st = detail::start(gens, ord, true);
  if (st.unit) return true;
  st.run(true);
  return st.unit;
}

inline Polynomial normal_form(const Polynomial& p, const ReducedGB& gb) {
  return divrem_multi(p, gb.basis, gb.order).remainder;
}

inline Polynomial s_polynomial(const Polynomial& f, const Polynomial& g, const MonomialOrder& ord) {
  Term lf = leading_term(f, ord), lg = leading_term(g, ord);
  Monomial l = lf.m.lcm(lg.m);
  return f.shifted(l / lf.m).scaled(1 / lf.c) - g.shifted(l / lg.m).scaled(1 / lg.c);
}

}  // namespace polysmith
