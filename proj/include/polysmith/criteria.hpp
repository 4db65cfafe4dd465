#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polymatrix.hpp"
#include "qlinalg.hpp"

namespace polysmith {

// a_1 z_1 + ... + a_{n-1} z_{n-1} + b; the last variable never appears.
struct LinearForm {
  std::vector<Coefficient> coeffs;
  Coefficient constant = 0;

  bool operator==(const LinearForm&) const = default;

  Polynomial to_polynomial(const VarSet& vs) const {
    if (coeffs.size() + 1 != vs.size()) throw UsageError("linear form has the wrong number of coefficients");
    Polynomial p(vs, constant);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      if (coeffs[i] != 0) p += Polynomial::monomial(vs, Monomial::var(i), coeffs[i]);
    return p;
  }

  static LinearForm from_polynomial(const Polynomial& p) {
    const VarSet& vs = p.varset();
    if (vs.size() < 2) throw UsageError("linear forms need at least two variables");
    LinearForm g;
    g.coeffs.assign(vs.size() - 1, 0);
    for (auto& t : p.terms()) {
      unsigned d = t.m.degree();
      if (d == 0) {
        g.constant = t.c;
      } else if (d == 1) {
        std::size_t v = 0;
        while (t.m.e[v] == 0) ++v;
        if (v == vs.size() - 1)
          throw UsageError("linear form may not involve the last variable '" + vs.name(v) + "'");
        g.coeffs[v] = t.c;
      } else {
        throw UsageError("'" + p.to_string() + "' is not of degree <= 1");
      }
    }
    bool any = false;
    for (auto& c : g.coeffs) any = any || c != 0;
    if (!any) throw UsageError("linear form '" + p.to_string() + "' has no variable part");
    return g;
  }
};

// z_var - f with f free of z_0..z_var.
struct ChainFactor {
  std::size_t var = 0;
  Polynomial f;

  Polynomial factor() const { return Polynomial::variable(f.varset(), var) - f; }
};

enum class ShapeKind { Chain, Linear, UnivariateDr, Unsupported };

inline const char* shape_name(ShapeKind k) {
  switch (k) {
    case ShapeKind::Chain: return "chain";
    case ShapeKind::Linear: return "linear";
    case ShapeKind::UnivariateDr: return "univariate-dr";
    case ShapeKind::Unsupported: return "unsupported";
  }
  return "?";
}

struct DetShape {
  ShapeKind kind = ShapeKind::Unsupported;
  std::vector<ChainFactor> chain;
  std::vector<LinearForm> forms;
  Polynomial tail;
  std::size_t tail_var = 0;
  std::string reason;
};

namespace detail {

inline bool univariate_in(const Polynomial& p, std::size_t v) {
  for (std::size_t i = 0; i < p.varset().size(); ++i)
    if (i != v && p.depends_on(i)) return false;
  return true;
}

inline DetShape unsupported(std::string why) {
  DetShape s;
  s.kind = ShapeKind::Unsupported;
  s.reason = std::move(why);
  return s;
}

}  // namespace detail

inline DetShape detect_chain_shape(const Polynomial& p, const VarSet& vs) {
  if (p.is_zero()) throw UsageError("shape of the zero polynomial");
  std::size_t n = vs.size();
  DetShape s;
  s.kind = ShapeKind::Chain;
  s.tail_var = n - 1;
  Polynomial rest = p;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!rest.depends_on(i)) continue;
    if (rest.degree_in(i) > 1)
      return detail::unsupported("degree " + std::to_string(rest.degree_in(i)) + " in '" + vs.name(i) + "'");
    auto cs = univar_view(rest, i);
    Polynomial f(vs);
    try {
      f = -exact_divide(cs[0], cs[1]);
    } catch (const DivisibilityError&) {
      return detail::unsupported("no factor linear in '" + vs.name(i) + "'");
    }
    for (std::size_t j = 0; j <= i; ++j)
      if (f.depends_on(j)) return detail::unsupported("factor in '" + vs.name(i) + "' involves an earlier variable");
    s.chain.push_back({i, f});
    rest = cs[1];
  }
  if (!detail::univariate_in(rest, n - 1))
    return detail::unsupported("residual " + rest.to_string() + " is not univariate in '" + vs.name(n - 1) + "'");
  s.tail = rest;
  return s;
}

// Accepts p = c * g_1...g_m * h for a nonzero constant c. Without an explicit
// h the cofactor of the forms becomes the tail.
inline DetShape verify_linear_shape(const Polynomial& p, const std::vector<LinearForm>& g,
                                    const std::optional<Polynomial>& h = std::nullopt) {
  const VarSet& vs = p.varset();
  std::size_t n = vs.size();
  if (g.empty() || g.size() + 1 > n)
    throw UsageError("expected between 1 and " + std::to_string(n - 1) + " linear forms, got " +
                     std::to_string(g.size()));
  QMatrix rows;
  for (auto& f : g) rows.push_back(f.coeffs);
  for (auto& r : rows)
    if (r.size() + 1 != n) throw UsageError("linear form has the wrong number of coefficients");
  if (qla::rank(rows) < g.size()) return detail::unsupported("linear forms are dependent");
  Polynomial prod(vs, 1);
  for (auto& f : g) prod *= f.to_polynomial(vs);
  Polynomial tail(vs);
  try {
    tail = exact_divide(p, prod);
  } catch (const DivisibilityError&) {
    return detail::unsupported("product of the linear forms does not divide " + p.to_string());
  }
  if (h) {
    if (h->is_zero() || !divides(*h, tail) || !exact_divide(tail, *h).is_constant())
      return detail::unsupported("tail does not match");
    tail = *h;
  }
  if (!detail::univariate_in(tail, n - 1))
    return detail::unsupported("tail " + tail.to_string() + " is not univariate in '" + vs.name(n - 1) + "'");
  DetShape s;
  s.kind = ShapeKind::Linear;
  s.forms = g;
  s.tail = tail;
  s.tail_var = n - 1;
  return s;
}

inline DetShape detect_univariate_shape(const Polynomial& p) {
  const VarSet& vs = p.varset();
  auto used = p.variables();
  if (used.size() > 1) return detail::unsupported(p.to_string() + " involves more than one variable");
  DetShape s;
  s.kind = ShapeKind::UnivariateDr;
  s.tail = p;
  s.tail_var = used.empty() ? vs.size() - 1 : used.front();
  return s;
}

// Ring automorphism z_i -> g_i (i < n), z_n -> z_n as an affine map on
// (z_1, ..., z_n, 1).
struct Automorphism {
  QMatrix A, A_inv;
  VarSet vs;

  Polynomial image(std::size_t var, bool inverse) const {
    const QMatrix& m = inverse ? A_inv : A;
    std::size_t n = vs.size();
    Polynomial p(vs, m[var][n]);
    for (std::size_t j = 0; j < n; ++j)
      if (m[var][j] != 0) p += Polynomial::monomial(vs, Monomial::var(j), m[var][j]);
    return p;
  }

  std::map<std::size_t, Polynomial> assignment(bool inverse) const {
    std::map<std::size_t, Polynomial> a;
    for (std::size_t i = 0; i < vs.size(); ++i) a.emplace(i, image(i, inverse));
    return a;
  }
};

enum class Direction { Forward, Inverse };

// Fewer than n-1 forms are padded with standard basis rows outside their span.
inline Automorphism build_automorphism(const std::vector<LinearForm>& g, const VarSet& vs) {
  std::size_t n = vs.size();
  if (g.size() + 1 > n) throw UsageError("too many linear forms");
  QMatrix rows;
  for (auto& f : g) {
    if (f.coeffs.size() + 1 != n) throw UsageError("linear form has the wrong number of coefficients");
    rows.push_back(f.coeffs);
  }
  if (qla::rank(rows) < rows.size()) throw IndependenceError("linear forms are dependent");
  std::vector<Coefficient> consts;
  for (auto& f : g) consts.push_back(f.constant);
  auto unit = [&](std::size_t i) {
    std::vector<Coefficient> e(n - 1, 0);
    e[i] = 1;
    return e;
  };
  while (rows.size() + 1 < n) {
    std::size_t i = rows.size();
    std::vector<std::size_t> tries{i};
    for (std::size_t j = 0; j + 1 < n; ++j)
      if (j != i) tries.push_back(j);
    for (auto j : tries) {
      auto cand = rows;
      cand.push_back(unit(j));
      if (qla::rank(cand) == cand.size()) {
        rows = std::move(cand);
        consts.push_back(0);
        break;
      }
    }
  }
  Automorphism phi;
  phi.vs = vs;
  phi.A = qla::identity(n + 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 0; j + 1 < n; ++j) phi.A[i][j] = rows[i][j];
    phi.A[i][n - 1] = 0;
    phi.A[i][n] = consts[i];
  }
  auto inv = qla::inverse(phi.A);
  if (!inv) throw IndependenceError("automorphism matrix is singular");
  phi.A_inv = *inv;
  return phi;
}

inline Polynomial apply_automorphism(const Automorphism& phi, const Polynomial& p, Direction d) {
  return substitute(p, phi.assignment(d == Direction::Inverse));
}

inline PolyMatrix apply_automorphism(const Automorphism& phi, const PolyMatrix& f, Direction d) {
  return substitute(f, phi.assignment(d == Direction::Inverse));
}

enum class Verdict { Equivalent, NotEquivalent, UndecidableShape };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Equivalent: return "equivalent";
    case Verdict::NotEquivalent: return "not-equivalent";
    case Verdict::UndecidableShape: return "undecidable-shape";
  }
  return "?";
}

struct KDiagnostic {
  std::size_t k = 0;
  Polynomial dk;
  std::optional<bool> unit;  // not computed for unsupported shapes
};

struct Witness {
  PolyMatrix U, V, S;
};

struct EquivalenceReport {
  DetShape shape;
  std::size_t rank = 0, rows = 0, cols = 0;
  Polynomial classified;
  std::vector<KDiagnostic> per_k;
  Verdict verdict = Verdict::UndecidableShape;
  std::string theorem;
  std::optional<Witness> witnesses;
};

// Theorem labels: chain-single (one chain factor), chain, linear-forms,
// univariate-dr, each with a -rectangular suffix when d_r stands in for det.
inline EquivalenceReport check_equivalence(const PolyMatrix& f, const std::vector<LinearForm>& hints = {},
                                           const MonomialOrder& ord = MonomialOrder::lex()) {
  EquivalenceReport rep;
  rep.rows = f.rows();
  rep.cols = f.cols();
  rep.rank = rank(f);
  const VarSet& vs = f.varset();
  if (rep.rank == 0) {
    rep.classified = Polynomial(vs);
    rep.shape = detail::unsupported("zero matrix");
    rep.verdict = Verdict::Equivalent;
    rep.theorem = "zero-matrix";
    return rep;
  }
  bool full_square = f.square() && rep.rank == f.rows();
  std::vector<MinorReport> minors;
  for (std::size_t k = 1; k <= rep.rank; ++k) minors.push_back(minor_report(f, k));
  rep.classified = minors.back().dk;

  DetShape shape;
  std::string label;
  if (!hints.empty() && vs.size() >= 2) {
    shape = verify_linear_shape(rep.classified, hints);
    label = "linear-forms";
  }
  if (shape.kind == ShapeKind::Unsupported) {
    std::string prev = shape.reason;
    shape = detect_chain_shape(rep.classified, vs);
    label = shape.chain.size() == 1 ? "chain-single" : "chain";
    if (shape.kind == ShapeKind::Unsupported && !prev.empty()) shape.reason = prev + "; " + shape.reason;
  }
  if (shape.kind == ShapeKind::Unsupported) {
    DetShape u = detect_univariate_shape(rep.classified);
    if (u.kind == ShapeKind::UnivariateDr) {
      shape = u;
      label = "univariate-dr";
    }
  }
  rep.shape = shape;
  if (shape.kind == ShapeKind::Unsupported) {
    rep.verdict = Verdict::UndecidableShape;
    rep.theorem = "none";
    for (auto& m : minors) rep.per_k.push_back({m.k, m.dk, std::nullopt});
    return rep;
  }
  rep.theorem = label + (full_square ? "" : "-rectangular");
  bool all = true;
  for (auto& m : minors) {
    bool u = jk_is_unit(m, ord);
    rep.per_k.push_back({m.k, m.dk, u});
    all = all && u;
  }
  rep.verdict = all ? Verdict::Equivalent : Verdict::NotEquivalent;
  return rep;
}

// U·F·V = S, or F = U·S·V when factored is set.
inline bool verify_witness(const PolyMatrix& f, const PolyMatrix& u, const PolyMatrix& v, const PolyMatrix& s,
                           bool factored = false) {
  if (!u.square() || !v.square()) throw UsageError("witness matrices must be square");
  if (factored) {
    if (u.rows() != f.rows() || v.cols() != f.cols() || s.rows() != u.cols() || s.cols() != v.rows())
      throw UsageError("witness dimensions do not match");
    return is_unimodular(u) && is_unimodular(v) && u * s * v == f;
  }
  if (u.cols() != f.rows() || v.rows() != f.cols() || s.rows() != u.rows() || s.cols() != v.cols())
    throw UsageError("witness dimensions do not match");
  return is_unimodular(u) && is_unimodular(v) && u * f * v == s;
}

}  // namespace polysmith
