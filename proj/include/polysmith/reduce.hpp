#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "criteria.hpp"
#include "polymatrix.hpp"
#include "qlinalg.hpp"

namespace polysmith {

struct ElementaryOp {
  enum class Kind { RowSwap, ColSwap, RowScale, ColScale, RowAdd, ColAdd };
  Kind kind;
  std::size_t i = 0, j = 0;  // RowAdd: row i += multiplier * row j; ColAdd: col i += multiplier * col j
  Polynomial multiplier;

  // Matrix E with op(M) = E·M for row ops and M·E for column ops.
  PolyMatrix matrix(const VarSet& vs, std::size_t n) const {
    PolyMatrix e = PolyMatrix::identity(vs, n);
    switch (kind) {
      case Kind::RowSwap:
      case Kind::ColSwap:
        e(i, i) = e(j, j) = Polynomial(vs);
        e(i, j) = e(j, i) = Polynomial(vs, 1);
        break;
      case Kind::RowScale:
      case Kind::ColScale:
        if (!multiplier.is_nonzero_constant()) throw UsageError("scaling needs a nonzero constant");
        e(i, i) = multiplier;
        break;
      case Kind::RowAdd: e(i, j) = multiplier; break;
      case Kind::ColAdd: e(j, i) = multiplier; break;
    }
    return e;
  }

  bool is_row() const { return kind == Kind::RowSwap || kind == Kind::RowScale || kind == Kind::RowAdd; }

  std::string describe() const {
    const char* names[] = {"row-swap", "col-swap", "row-scale", "col-scale", "row-add", "col-add"};
    std::string s = std::string(names[int(kind)]) + " " + std::to_string(i + 1);
    if (kind != Kind::RowScale && kind != Kind::ColScale) s += " " + std::to_string(j + 1);
    if (kind != Kind::RowSwap && kind != Kind::ColSwap) s += " by " + multiplier.to_string();
    return s;
  }
};

struct TraceStep {
  std::string description;
  PolyMatrix left, right, state;  // left · F · right = state
};

struct ReductionTrace {
  std::vector<TraceStep> steps;
  std::optional<Witness> result;
  std::optional<FailureKind> failure;
  std::string detail;
  std::string orientation = "U*F*V=S";
};

// v - f with f free of v.
struct LinearFactor {
  std::size_t var = 0;
  Polynomial f;
  Polynomial poly;
};

inline LinearFactor linear_factor(const Polynomial& p) {
  const VarSet& vs = p.varset();
  for (std::size_t v = 0; v < vs.size(); ++v) {
    if (p.degree_in(v) != 1) continue;
    auto cs = univar_view(p, v);
    if (!cs[1].is_nonzero_constant()) continue;
    return {v, cs[0].scaled(-1 / cs[1].lc()), p};
  }
  throw UsageError("'" + p.to_string() + "' is not linear with constant coefficient in any variable");
}

// Rows of a normalized fraction-field kernel of F with v -> f substituted.
inline PolyMatrix zlp_annihilator(const PolyMatrix& f, const std::map<std::size_t, Polynomial>& sub) {
  PolyMatrix f1 = substitute(f, sub);
  PolyMatrix w = left_kernel_fracfield(f1);
  if (!is_zlp(w)) throw ReductionFailure(FailureKind::KernelNotZlp, "kernel basis is not zero left prime");
  return w;
}

namespace detail {

inline std::vector<Monomial> monomials_up_to(const std::vector<std::size_t>& vars, unsigned d) {
  std::vector<Monomial> out{Monomial{}};
  for (auto v : vars) {
    std::vector<Monomial> next;
    for (auto& m : out)
      for (unsigned e = 0; m.degree() + e <= d; ++e) {
        Monomial t = m;
        t.e[v] = static_cast<std::uint16_t>(e);
        next.push_back(t);
      }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a > b;
  });
  return out;
}

// Fill row `solved` of u so det(u) = 1, entry j a multiple of mult(solved, j)
// with cofactor degree <= d.
inline bool solve_row(PolyMatrix& u, std::size_t solved, const PolyMatrix& mult,
                      const std::vector<std::size_t>& vars, unsigned d) {
  const VarSet& vs = u.varset();
  std::size_t l = u.cols();
  std::vector<Polynomial> basis;
  std::vector<std::pair<std::size_t, Monomial>> unknowns;
  auto monos = monomials_up_to(vars, d);
  for (std::size_t j = 0; j < l; ++j) {
    PolyMatrix t = u;
    for (std::size_t c = 0; c < l; ++c) t(solved, c) = Polynomial(vs, c == j ? 1 : 0);
    Polynomial cof = determinant(t);
    if (cof.is_zero()) continue;
    Polynomial base = mult(solved, j) * cof;
    for (auto& m : monos) {
      basis.push_back(base.shifted(m));
      unknowns.push_back({j, m});
    }
  }
  if (basis.empty()) return false;
  std::vector<Monomial> eqs;
  for (auto& b : basis)
    for (auto& t : b.terms()) eqs.push_back(t.m);
  eqs.push_back(Monomial{});
  std::sort(eqs.begin(), eqs.end(), std::greater<>());
  eqs.erase(std::unique(eqs.begin(), eqs.end()), eqs.end());
  QMatrix a(eqs.size(), std::vector<Coefficient>(basis.size(), 0));
  std::vector<Coefficient> rhs(eqs.size(), 0);
  for (std::size_t c = 0; c < basis.size(); ++c)
    for (auto& t : basis[c].terms()) {
      auto it = std::lower_bound(eqs.begin(), eqs.end(), t.m, std::greater<>());
      a[std::size_t(it - eqs.begin())][c] = t.c;
    }
  rhs[std::size_t(std::lower_bound(eqs.begin(), eqs.end(), Monomial{}, std::greater<>()) - eqs.begin())] = 1;
  auto x = qla::solve(a, rhs);
  if (!x) return false;
  for (std::size_t c = 0; c < l; ++c) u(solved, c) = Polynomial(vs);
  for (std::size_t c = 0; c < unknowns.size(); ++c) {
    if ((*x)[c] == 0) continue;
    auto& [j, m] = unknowns[c];
    u(solved, j) += mult(solved, j) * Polynomial::monomial(vs, m, (*x)[c]);
  }
  return true;
}

inline bool permutations_of(std::vector<std::size_t> pool, std::size_t count,
                            const std::function<bool(const std::vector<std::size_t>&)>& f) {
  for (auto& subset : all_combinations(pool.size(), count)) {
    std::vector<std::size_t> pick;
    for (auto s : subset) pick.push_back(pool[s]);
    do {
      if (f(pick)) return true;
    } while (std::next_permutation(pick.begin(), pick.end()));
  }
  return false;
}

}  // namespace detail

// Unimodular U whose last rows are W. Entry (i, j) of the complement rows must
// be a multiple of mult(i, j) when mult is given.
inline PolyMatrix unimodular_completion(const PolyMatrix& w, unsigned degree_bound = 3,
                                        const std::optional<PolyMatrix>& mult = std::nullopt) {
  const VarSet& vs = w.varset();
  std::size_t l = w.cols(), m = w.rows();
  if (m > l) throw UsageError("completion needs rows <= cols");
  std::size_t k = l - m;
  if (mult && (mult->rows() != k || mult->cols() != l)) throw UsageError("constraint matrix has the wrong shape");
  PolyMatrix mm(vs, k, l);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < l; ++j) mm(i, j) = mult ? (*mult)(i, j) : Polynomial(vs, 1);
  auto allowed = [&](std::size_t i, std::size_t j) { return mm(i, j).is_nonzero_constant(); };

  PolyMatrix u(vs, l, l);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < l; ++j) u(k + i, j) = w(i, j);
  if (k == 0) {
    if (is_unimodular(u)) return u;
    throw ReductionFailure(FailureKind::CompletionNotFound, "square input is not unimodular");
  }

  // Unit complement rows opposite a constant maximal minor, last columns first.
  auto sets = detail::all_combinations(l, m);
  std::reverse(sets.begin(), sets.end());
  for (auto& cs : sets) {
    if (!determinant(w.submatrix(detail::all_combinations(m, m).front(), cs)).is_nonzero_constant()) continue;
    std::vector<std::size_t> comp;
    for (std::size_t j = 0; j < l; ++j)
      if (std::find(cs.begin(), cs.end(), j) == cs.end()) comp.push_back(j);
    bool found = false;
    do {
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i) ok = allowed(i, comp[i]);
      if (ok) {
        found = true;
        break;
      }
    } while (std::next_permutation(comp.begin(), comp.end()));
    if (!found) continue;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < l; ++j) u(i, j) = Polynomial(vs, j == comp[i] ? 1 : 0);
    return u;
  }

  // One complement row by undetermined coefficients, the others unit rows.
  std::vector<std::size_t> vars;
  for (std::size_t v = 0; v < vs.size(); ++v) {
    bool used = false;
    for (auto& p : w.entries()) used = used || p.depends_on(v);
    for (auto& p : mm.entries()) used = used || p.depends_on(v);
    if (used) vars.push_back(v);
  }
  std::vector<std::size_t> cols(l);
  std::iota(cols.begin(), cols.end(), 0);
  for (unsigned d = 0; d <= degree_bound; ++d)
    for (std::size_t solved = k; solved-- > 0;) {
      bool ok = detail::permutations_of(cols, k - 1, [&](const std::vector<std::size_t>& pick) {
        std::size_t p = 0;
        for (std::size_t i = 0; i < k; ++i) {
          if (i == solved) continue;
          if (!allowed(i, pick[p])) return false;
          for (std::size_t j = 0; j < l; ++j) u(i, j) = Polynomial(vs, j == pick[p] ? 1 : 0);
          ++p;
        }
        return detail::solve_row(u, solved, mm, vars, d);
      });
      if (ok) {
        if (!is_unimodular(u)) throw InternalConsistencyError("completion is not unimodular");
        return u;
      }
    }
  throw ReductionFailure(FailureKind::CompletionNotFound,
                         "no completion found up to degree " + std::to_string(degree_bound));
}

struct Extraction {
  PolyMatrix U, G;
};

// U·F = diag(I_k, p·I)·G with U unimodular.
inline Extraction extract_factor(const PolyMatrix& f, const Polynomial& factor, std::size_t k,
                                 unsigned degree_bound = 3, const std::optional<PolyMatrix>& mult = std::nullopt) {
  if (!f.square()) throw UsageError("extraction needs a square matrix");
  if (k == 0 || k >= f.rows()) throw UsageError("extraction level out of range");
  LinearFactor lf = linear_factor(factor);
  std::map<std::size_t, Polynomial> sub{{lf.var, lf.f}};
  std::size_t r = rank(substitute(f, sub));
  if (r != k)
    throw InternalConsistencyError("rank after substituting " + f.varset().name(lf.var) + " -> " + lf.f.to_string() +
                                   " is " + std::to_string(r) + ", expected " + std::to_string(k));
  PolyMatrix w = zlp_annihilator(f, sub);
  PolyMatrix u = unimodular_completion(w, degree_bound, mult);
  PolyMatrix ug = u * f;
  for (std::size_t i = k; i < f.rows(); ++i)
    for (std::size_t j = 0; j < f.cols(); ++j) {
      try {
        ug(i, j) = exact_divide(ug(i, j), factor);
      } catch (const DivisibilityError&) {
        throw InternalConsistencyError("annihilated row " + std::to_string(i + 1) + " is not divisible by " +
                                       factor.to_string());
      }
    }
  return {u, ug};
}

struct FoldResult {
  std::vector<ElementaryOp> ops;
  PolyMatrix left, right, C;  // left · B · right = C
};

namespace detail {

inline std::optional<FoldResult> fold_lower(const PolyMatrix& b, bool by_rows) {
  const VarSet& vs = b.varset();
  std::size_t n = b.rows();
  FoldResult r{{}, PolyMatrix::identity(vs, n), PolyMatrix::identity(vs, n), b};
  PolyMatrix& c = r.C;
  auto step = [&](ElementaryOp op) {
    PolyMatrix e = op.matrix(vs, n);
    if (op.is_row()) {
      c = e * c;
      r.left = e * r.left;
    } else {
      c = c * e;
      r.right = r.right * e;
    }
    r.ops.push_back(std::move(op));
  };
  if (by_rows) {
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = j + 1; i < n; ++i) {
        if (c(i, j).is_zero()) continue;
        if (c(j, j).is_zero() || !divides(c(j, j), c(i, j))) return std::nullopt;
        step({ElementaryOp::Kind::RowAdd, i, j, -exact_divide(c(i, j), c(j, j))});
      }
  } else {
    for (std::size_t i = n; i-- > 0;)
      for (std::size_t j = 0; j < i; ++j) {
        if (c(i, j).is_zero()) continue;
        if (c(i, i).is_zero() || !divides(c(i, i), c(i, j))) return std::nullopt;
        step({ElementaryOp::Kind::ColAdd, j, i, -exact_divide(c(i, j), c(i, i))});
      }
  }
  return r;
}

}  // namespace detail

// Clears the off-diagonal part of a triangular B by row or column additions
// whose multipliers are exact quotients by diagonal pivots.
inline FoldResult fold_diagonal(const PolyMatrix& b) {
  if (!b.square()) throw UsageError("fold needs a square matrix");
  std::size_t n = b.rows();
  bool lower = true, upper = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (b(i, j).is_zero()) continue;
      if (j > i) lower = false;
      if (j < i) upper = false;
    }
  if (!lower && !upper) throw ShapeError("matrix is not triangular");
  PolyMatrix t = lower ? b : b.transpose();
  std::optional<FoldResult> r = detail::fold_lower(t, true);
  if (!r) r = detail::fold_lower(t, false);
  if (!r) throw ShapeError("off-diagonal entries are not divisible by the diagonal pivots");
  if (lower) return *r;
  FoldResult out{{}, r->right.transpose(), r->left.transpose(), r->C};
  for (auto op : r->ops) {
    op.kind = op.is_row() ? ElementaryOp::Kind::ColAdd : ElementaryOp::Kind::RowAdd;
    out.ops.push_back(op);
  }
  return out;
}

// Rational roots of a univariate polynomial, with multiplicity, ascending.
inline std::optional<std::vector<Coefficient>> rational_roots(const Polynomial& p, std::size_t v, Polynomial* rest) {
  const VarSet& vs = p.varset();
  std::vector<Coefficient> roots;
  Polynomial q = p;
  Polynomial x = Polynomial::variable(vs, v);
  while (!q.is_constant() && q.constant_term() == 0) {
    roots.push_back(0);
    q = exact_divide(q, x);
  }
  auto divisors = [](mpz_class n) -> std::optional<std::vector<mpz_class>> {
    n = abs(n);
    std::vector<mpz_class> small, large;
    unsigned long steps = 0;
    for (mpz_class d = 1; d * d <= n; ++d) {
      if (++steps > 2000000) return std::nullopt;
      if (n % d == 0) {
        small.push_back(d);
        if (d * d != n) large.push_back(n / d);
      }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
  };
  bool progress = true;
  while (progress && q.total_degree() > 0) {
    progress = false;
    auto cs = univar_view(q, v);
    mpz_class den = 1;
    for (auto& c : cs) {
      Coefficient k = c.constant_term();
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), k.get_den_mpz_t());
    }
    mpz_class a0 = Coefficient(cs.front().constant_term() * den).get_num();
    mpz_class ad = Coefficient(cs.back().constant_term() * den).get_num();
    auto dn = divisors(a0), dd = divisors(ad);
    if (!dn || !dd) return std::nullopt;
    std::vector<Coefficient> cands;
    for (auto& r : *dn)
      for (auto& s : *dd) {
        Coefficient c(r, s);
        c.canonicalize();
        cands.push_back(-c);
        cands.push_back(c);
      }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    std::vector<Coefficient> point(vs.size(), 0);
    for (auto& c : cands) {
      point[v] = c;
      if (evaluate(q, point) == 0) {
        roots.push_back(c);
        q = exact_divide(q, x - Polynomial(vs, c));
        progress = true;
        break;
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  if (rest) *rest = q;
  return roots;
}

namespace detail {

inline PolyMatrix diag_of(const std::vector<Polynomial>& d) { return PolyMatrix::diagonal(d); }

// Splits t into extraction factors: linear tail factors first, then chain
// factors from the last variable backwards.
inline std::vector<Polynomial> split_level(const Polynomial& t, const DetShape& shape, std::string* why) {
  const VarSet& vs = t.varset();
  Polynomial rem = t;
  std::vector<Polynomial> chain;
  for (auto it = shape.chain.rbegin(); it != shape.chain.rend(); ++it) {
    Polynomial c = it->factor();
    if (divides(c, rem)) {
      rem = exact_divide(rem, c);
      chain.push_back(c);
    }
  }
  std::vector<Polynomial> out;
  if (!rem.is_constant()) {
    auto used = rem.variables();
    if (used.size() != 1) {
      *why = "level factor " + rem.to_string() + " is not univariate";
      return {};
    }
    Polynomial left(vs);
    auto roots = rational_roots(rem, used.front(), &left);
    if (!roots || !left.is_constant()) {
      *why = "tail factor " + (roots ? left : rem).to_string() + " has no rational linear splitting";
      return {};
    }
    for (auto& r : *roots) out.push_back(Polynomial::variable(vs, used.front()) - Polynomial(vs, r));
  }
  out.insert(out.end(), chain.begin(), chain.end());
  return out;
}

inline ReductionTrace fail(ReductionTrace tr, FailureKind k, const std::string& why) {
  tr.failure = k;
  tr.detail = why;
  return tr;
}

// Row additions row_i += q·row_j that keep Δ·U·Δ⁻¹ polynomial, applied to
// cancel terms of G under a term-over-position degrevlex order. Returns the
// accumulated unimodular U.
inline PolyMatrix shrink_rows(PolyMatrix& g, const std::vector<Polynomial>& delta) {
  const VarSet& vs = g.varset();
  std::size_t l = g.rows();
  MonomialOrder ord = MonomialOrder::degrevlex();
  PolyMatrix u = PolyMatrix::identity(vs, l);
  auto lead = [&](const std::vector<Polynomial>& row, std::size_t& col) -> Term {
    std::optional<Term> best;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c].is_zero()) continue;
      Term t = leading_term(row[c], ord);
      if (!best || ord.greater(t.m, best->m)) {
        best = t;
        col = c;
      }
    }
    return *best;
  };
  for (std::size_t guard = 0; guard < 200; ++guard) {
    bool changed = false;
    for (std::size_t i = 0; i < l && !changed; ++i)
      for (std::size_t j = 0; j < l && !changed; ++j) {
        if (i == j) continue;
        Polynomial mult = j > i ? exact_divide(delta[j], delta[i]) : Polynomial(vs, 1);
        std::vector<Polynomial> src = g.row(j);
        for (auto& p : src) p *= mult;
        std::size_t col = 0;
        Term lt = lead(src, col);
        for (auto& t : g(i, col).terms()) {
          if (!lt.m.divides(t.m)) continue;
          Polynomial q = Polynomial::monomial(vs, t.m / lt.m, -t.c / lt.c);
          // Only accept when the row strictly shrinks in total size.
          std::vector<Polynomial> nr = g.row(i);
          std::size_t before = 0, after = 0;
          for (std::size_t c = 0; c < l; ++c) {
            before += nr[c].size();
            nr[c] += q * src[c];
            after += nr[c].size();
          }
          unsigned dbefore = 0, dafter = 0;
          for (std::size_t c = 0; c < l; ++c) {
            dbefore = std::max(dbefore, g(i, c).total_degree());
            dafter = std::max(dafter, nr[c].total_degree());
          }
          if (dafter > dbefore || (dafter == dbefore && after >= before)) continue;
          for (std::size_t c = 0; c < l; ++c) {
            g(i, c) = nr[c];
            u(i, c) += q * mult * u(j, c);
          }
          changed = true;
          break;
        }
      }
    if (!changed) break;
  }
  return u;
}

// Δ·U·Δ⁻¹, polynomial when U respects the divisibility pattern of Δ.
inline PolyMatrix conjugate(const PolyMatrix& u, const std::vector<Polynomial>& delta) {
  PolyMatrix c(u.varset(), u.rows(), u.cols());
  for (std::size_t i = 0; i < u.rows(); ++i)
    for (std::size_t j = 0; j < u.cols(); ++j) c(i, j) = exact_divide(delta[i] * u(i, j), delta[j]);
  return c;
}

inline ReductionTrace reduce_chain(const PolyMatrix& f, const DetShape& shape, unsigned bound) {
  const VarSet& vs = f.varset();
  std::size_t l = f.rows();
  ReductionTrace tr;
  PolyMatrix id = PolyMatrix::identity(vs, l);
  auto phi = theoretical_smith(f).factors;

  bool smith_already = f.is_diagonal();
  for (std::size_t i = 0; i < l && smith_already; ++i)
    smith_already = !f(i, i).is_zero() && monic(f(i, i)) == phi[i];
  if (smith_already) {
    std::vector<Polynomial> scale;
    for (std::size_t i = 0; i < l; ++i) scale.push_back(Polynomial(vs, 1 / f(i, i).lc()));
    PolyMatrix u = PolyMatrix::diagonal(scale);
    tr.result = Witness{u, id, u * f};
    return tr;
  }

  std::vector<Polynomial> delta(l, phi[0]);
  PolyMatrix g = f.map([&](const Polynomial& p) { return exact_divide(p, phi[0]); });
  PolyMatrix linv = id;
  if (!phi[0].is_nonzero_constant()) tr.steps.push_back({"factor out d_1 = " + phi[0].to_string(), linv, id, f});
  auto shrink = [&] {
    PolyMatrix r = shrink_rows(g, delta);
    if (r == id) return;
    linv = conjugate(r, delta) * linv;
    tr.steps.push_back({"reduce cofactor rows", linv, id, diag_of(delta) * g});
  };
  shrink();

  for (std::size_t k = 1; k < l; ++k) {
    Polynomial t = exact_divide(phi[k], phi[k - 1]);
    if (t.is_constant()) continue;
    std::string why;
    auto factors = split_level(t, shape, &why);
    if (factors.empty()) return fail(tr, FailureKind::UnsupportedShape, why);
    for (auto& p : factors) {
      PolyMatrix mult(vs, k, l);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < l; ++j)
          mult(i, j) = j > i ? exact_divide(delta[j], delta[i]) : Polynomial(vs, 1);
      Extraction ex;
      try {
        ex = extract_factor(g, p, k, bound, mult);
      } catch (const ReductionFailure& e) {
        return fail(tr, e.kind(), "extracting " + p.to_string() + " at level " + std::to_string(k) + ": " + e.what());
      }
      linv = conjugate(ex.U, delta) * linv;
      for (std::size_t j = k; j < l; ++j) delta[j] *= p;
      g = ex.G;
      tr.steps.push_back({"extract " + p.to_string() + " from rows " + std::to_string(k + 1) + ".." +
                              std::to_string(l),
                          linv, id, diag_of(delta) * g});
      shrink();
    }
  }
  if (!is_unimodular(g)) throw InternalConsistencyError("cofactor is not unimodular after all extractions");
  PolyMatrix v = inverse_unimodular(g);
  PolyMatrix s = diag_of(delta);
  tr.steps.push_back({"invert unimodular cofactor", linv, v, s});
  tr.result = Witness{linv, v, s};
  return tr;
}

inline void normalize_result(ReductionTrace& tr) {
  if (!tr.result) return;
  Witness& w = *tr.result;
  bool monic_already = true;
  for (std::size_t i = 0; i < w.S.rows(); ++i)
    if (!w.S(i, i).is_zero() && w.S(i, i).lc() != 1) monic_already = false;
  if (monic_already) return;
  std::vector<Polynomial> scale;
  for (std::size_t i = 0; i < w.S.rows(); ++i)
    scale.push_back(Polynomial(w.S.varset(), w.S(i, i).is_zero() ? Coefficient(1) : 1 / w.S(i, i).lc()));
  PolyMatrix d = PolyMatrix::diagonal(scale);
  w.U = d * w.U;
  w.S = d * w.S;
  tr.steps.push_back({"normalize diagonal to monic", w.U, w.V, w.S});
}

}  // namespace detail

inline ReductionTrace reduce_to_smith(const PolyMatrix& f, const DetShape& shape, unsigned degree_bound = 3) {
  const VarSet& vs = f.varset();
  ReductionTrace tr;
  if (!f.square()) return detail::fail(tr, FailureKind::UnsupportedShape, "witnesses are built for square matrices only");
  std::size_t r = rank(f);
  if (r == 0) {
    PolyMatrix id = PolyMatrix::identity(vs, f.rows());
    tr.result = Witness{id, id, f};
    return tr;
  }
  if (r < f.rows()) return detail::fail(tr, FailureKind::UnsupportedShape, "witnesses are built for full-rank matrices only");

  if (shape.kind == ShapeKind::Unsupported) return detail::fail(tr, FailureKind::UnsupportedShape, shape.reason);
  if (shape.kind == ShapeKind::Linear) {
    Automorphism phi = build_automorphism(shape.forms, vs);
    PolyMatrix ft = apply_automorphism(phi, f, Direction::Inverse);
    DetShape inner = detect_chain_shape(determinant(ft), vs);
    if (inner.kind != ShapeKind::Chain) throw InternalConsistencyError("conjugated determinant lost its chain shape");
    ReductionTrace t = detail::reduce_chain(ft, inner, degree_bound);
    tr.steps.push_back({"conjugate by inverse automorphism", PolyMatrix::identity(vs, f.rows()),
                        PolyMatrix::identity(vs, f.rows()), f});
    for (auto& s : t.steps)
      tr.steps.push_back({s.description + " (mapped back)", apply_automorphism(phi, s.left, Direction::Forward),
                          apply_automorphism(phi, s.right, Direction::Forward),
                          apply_automorphism(phi, s.state, Direction::Forward)});
    tr.failure = t.failure;
    tr.detail = t.detail;
    if (t.result)
      tr.result = Witness{apply_automorphism(phi, t.result->U, Direction::Forward),
                          apply_automorphism(phi, t.result->V, Direction::Forward),
                          apply_automorphism(phi, t.result->S, Direction::Forward)};
  } else {
    tr = detail::reduce_chain(f, shape, degree_bound);
  }
  if (!tr.result) return tr;
  detail::normalize_result(tr);
  if (!verify_witness(f, tr.result->U, tr.result->V, tr.result->S))
    throw InternalConsistencyError("constructed witnesses do not verify");
  auto phi = theoretical_smith(f).factors;
  for (std::size_t i = 0; i < phi.size(); ++i)
    if (!(tr.result->S(i, i) == phi[i])) throw InternalConsistencyError("diagonal differs from the invariant factors");
  return tr;
}

}  // namespace polysmith
