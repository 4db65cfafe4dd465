#pragma once

#include <functional>
#include <numeric>
#include <vector>

#include "gcd.hpp"
#include "groebner.hpp"
#include "polynomial.hpp"

namespace polysmith {

class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(VarSet vs, std::size_t rows, std::size_t cols)
      : vs_(std::move(vs)), rows_(rows), cols_(cols), a_(rows * cols, Polynomial(vs_)) {}

  static PolyMatrix identity(const VarSet& vs, std::size_t n) {
    PolyMatrix m(vs, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Polynomial(vs, 1);
    return m;
  }
  static PolyMatrix diagonal(const std::vector<Polynomial>& d) {
    if (d.empty()) throw UsageError("empty diagonal");
    PolyMatrix m(d.front().varset(), d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  static PolyMatrix from_rows(const VarSet& vs, const std::vector<std::vector<Polynomial>>& rows) {
    if (rows.empty()) throw UsageError("matrix needs at least one row");
    PolyMatrix m(vs, rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw UsageError("ragged rows");
      for (std::size_t j = 0; j < m.cols_; ++j) {
        if (!(rows[i][j].varset() == vs)) throw UsageError("entry over a different variable set");
        m(i, j) = rows[i][j];
      }
    }
    return m;
  }

  const VarSet& varset() const { return vs_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Polynomial& operator()(std::size_t i, std::size_t j) { return a_.at(i * cols_ + j); }
  const Polynomial& operator()(std::size_t i, std::size_t j) const { return a_.at(i * cols_ + j); }

  std::vector<Polynomial> row(std::size_t i) const {
    return std::vector<Polynomial>(a_.begin() + long(i * cols_), a_.begin() + long((i + 1) * cols_));
  }

  PolyMatrix transpose() const {
    PolyMatrix t(vs_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  PolyMatrix submatrix(const std::vector<std::size_t>& r, const std::vector<std::size_t>& c) const {
    PolyMatrix s(vs_, r.size(), c.size());
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j) s(i, j) = (*this)(r[i], c[j]);
    return s;
  }

  PolyMatrix map(const std::function<Polynomial(const Polynomial&)>& f) const {
    PolyMatrix m(vs_, rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = f(a_[k]);
    return m;
  }

  bool is_zero() const {
    for (auto& p : a_)
      if (!p.is_zero()) return false;
    return true;
  }
  bool is_diagonal() const {
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (i != j && !(*this)(i, j).is_zero()) return false;
    return true;
  }

  bool operator==(const PolyMatrix& o) const {
    return vs_ == o.vs_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  const std::vector<Polynomial>& entries() const { return a_; }

 private:
  VarSet vs_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Polynomial> a_;
};

inline PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols() != b.rows()) throw UsageError("dimension mismatch in matrix product");
  if (!(a.varset() == b.varset())) throw UsageError("matrices over different variable sets");
  PolyMatrix c(a.varset(), a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      std::vector<Term> acc;
      for (std::size_t k = 0; k < a.cols(); ++k) {
        if (a(i, k).is_zero() || b(k, j).is_zero()) continue;
        Polynomial p = a(i, k) * b(k, j);
        acc.insert(acc.end(), p.terms().begin(), p.terms().end());
      }
      c(i, j) = Polynomial::from_terms(a.varset(), std::move(acc));
    }
  return c;
}

inline PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw UsageError("dimension mismatch in matrix sum");
  PolyMatrix c(a.varset(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

inline PolyMatrix substitute(const PolyMatrix& m, const std::map<std::size_t, Polynomial>& assign) {
  return m.map([&](const Polynomial& p) { return substitute(p, assign); });
}

inline std::ostream& operator<<(std::ostream& os, const PolyMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << "[";
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
    os << "]\n";
  }
  return os;
}

namespace detail {

inline Polynomial laplace(const PolyMatrix& m) {
  std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  std::size_t best = 0, zeros = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t z = 0;
    for (std::size_t j = 0; j < n; ++j) z += m(i, j).is_zero();
    if (z > zeros) {
      best = i;
      zeros = z;
    }
  }
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < n; ++i)
    if (i != best) rows.push_back(i);
  Polynomial det(m.varset());
  for (std::size_t j = 0; j < n; ++j) {
    if (m(best, j).is_zero()) continue;
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < n; ++c)
      if (c != j) cols.push_back(c);
    Polynomial t = m(best, j) * laplace(m.submatrix(rows, cols));
    det = ((best + j) % 2) ? det - t : det + t;
  }
  return det;
}

inline Polynomial bareiss(PolyMatrix m) {
  std::size_t n = m.rows();
  const VarSet& vs = m.varset();
  Polynomial prev(vs, 1);
  bool neg = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k).is_zero()) {
      std::size_t p = k + 1;
      while (p < n && m(p, k).is_zero()) ++p;
      if (p == n) return Polynomial(vs);
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      neg = !neg;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        m(i, j) = exact_divide(m(k, k) * m(i, j) - m(i, k) * m(k, j), prev);
      m(i, k) = Polynomial(vs);
    }
    prev = m(k, k);
  }
  return neg ? -m(n - 1, n - 1) : m(n - 1, n - 1);
}

inline void combinations(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> c(k);
  std::iota(c.begin(), c.end(), 0);
  if (k > n) return;
  while (true) {
    f(c);
    std::size_t i = k;
    while (i > 0 && c[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

inline std::vector<std::vector<std::size_t>> all_combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  combinations(n, k, [&](const std::vector<std::size_t>& c) { out.push_back(c); });
  return out;
}

}  // namespace detail

inline Polynomial determinant(const PolyMatrix& m) {
  if (!m.square()) throw UsageError("determinant of a non-square matrix");
  std::size_t n = m.rows();
  if (n == 0) return Polynomial(m.varset(), 1);
  std::size_t zeros = 0;
  for (auto& p : m.entries()) zeros += p.is_zero();
  if (n <= 3 || 2 * zeros >= n * n) return detail::laplace(m);
  return detail::bareiss(m);
}

// Adjugate; adj(M)*M = det(M)*I.
inline PolyMatrix adjugate(const PolyMatrix& m) {
  if (!m.square()) throw UsageError("adjugate of a non-square matrix");
  std::size_t n = m.rows();
  PolyMatrix adj(m.varset(), n, n);
  if (n == 1) {
    adj(0, 0) = Polynomial(m.varset(), 1);
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::size_t> r, c;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j) r.push_back(k);
        if (k != i) c.push_back(k);
      }
      Polynomial d = determinant(m.submatrix(r, c));
      adj(i, j) = ((i + j) % 2) ? -d : d;
    }
  return adj;
}

inline bool is_unimodular(const PolyMatrix& m) {
  if (!m.square()) throw UsageError("unimodularity of a non-square matrix");
  return determinant(m).is_nonzero_constant();
}

// Inverse of a unimodular matrix; throws if det is not a nonzero constant.
inline PolyMatrix inverse_unimodular(const PolyMatrix& m) {
  Polynomial d = determinant(m);
  if (!d.is_nonzero_constant()) throw UsageError("matrix is not unimodular");
  Coefficient inv = 1 / d.lc();
  return adjugate(m).map([&](const Polynomial& p) { return p.scaled(inv); });
}

struct MinorReport {
  std::size_t k = 0;
  std::vector<Polynomial> minors;
  Polynomial dk;
  std::vector<Polynomial> reduced;
};

// Minors enumerated with row index sets outer, column index sets inner,
// both lexicographic.
inline std::vector<Polynomial> minors(const PolyMatrix& f, std::size_t k) {
  if (k < 1 || k > std::min(f.rows(), f.cols())) throw UsageError("minor order out of range");
  auto rs = detail::all_combinations(f.rows(), k);
  auto cs = detail::all_combinations(f.cols(), k);
  std::vector<Polynomial> out;
  out.reserve(rs.size() * cs.size());
  for (auto& r : rs)
    for (auto& c : cs) out.push_back(determinant(f.submatrix(r, c)));
  return out;
}

inline MinorReport minor_report(const PolyMatrix& f, std::size_t k) {
  MinorReport rep;
  rep.k = k;
  rep.minors = minors(f, k);
  rep.dk = gcd_all(rep.minors, f.varset());
  for (auto& u : rep.minors)
    rep.reduced.push_back(rep.dk.is_zero() ? Polynomial(f.varset()) : exact_divide(u, rep.dk));
  return rep;
}

inline Polynomial dk(const PolyMatrix& f, std::size_t k) {
  if (k == 0) return Polynomial(f.varset(), 1);
  return minor_report(f, k).dk;
}

inline bool jk_is_unit(const MinorReport& rep, const MonomialOrder& ord = MonomialOrder::lex()) {
  if (rep.dk.is_zero()) throw RankError("all " + std::to_string(rep.k) + "x" + std::to_string(rep.k) + " minors vanish");
  return is_unit_ideal(IdealGens(rep.reduced), ord);
}

inline bool jk_is_unit(const PolyMatrix& f, std::size_t k, const MonomialOrder& ord = MonomialOrder::lex()) {
  return jk_is_unit(minor_report(f, k), ord);
}

struct EchelonInfo {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_rows;  // original row indices
  std::vector<std::size_t> pivot_cols;
};

// Fraction-free row echelon form over the polynomial ring.
inline EchelonInfo echelon(const PolyMatrix& f) {
  PolyMatrix m = f;
  const VarSet& vs = f.varset();
  std::vector<std::size_t> perm(f.rows());
  std::iota(perm.begin(), perm.end(), 0);
  EchelonInfo info;
  Polynomial prev(vs, 1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < f.cols() && r < f.rows(); ++c) {
    std::size_t p = r;
    while (p < f.rows() && m(p, c).is_zero()) ++p;
    if (p == f.rows()) continue;
    if (p != r) {
      for (std::size_t j = 0; j < f.cols(); ++j) std::swap(m(r, j), m(p, j));
      std::swap(perm[r], perm[p]);
    }
    for (std::size_t i = r + 1; i < f.rows(); ++i) {
      for (std::size_t j = c + 1; j < f.cols(); ++j)
        m(i, j) = exact_divide(m(r, c) * m(i, j) - m(i, c) * m(r, j), prev);
      m(i, c) = Polynomial(vs);
    }
    prev = m(r, c);
    info.pivot_rows.push_back(perm[r]);
    info.pivot_cols.push_back(c);
    ++r;
  }
  info.rank = r;
  return info;
}

inline std::size_t rank(const PolyMatrix& f) {
  EchelonInfo e = echelon(f);
  if (e.rank > 0) {
    auto rows = e.pivot_rows;
    std::sort(rows.begin(), rows.end());
    if (determinant(f.submatrix(rows, e.pivot_cols)).is_zero())
      throw InternalConsistencyError("rank pivot minor vanishes");
  }
  return e.rank;
}

struct InvariantFactorList {
  std::vector<Polynomial> factors;
  std::size_t rank = 0;
  std::size_t rows = 0, cols = 0;
};

inline InvariantFactorList theoretical_smith(const PolyMatrix& f) {
  InvariantFactorList out;
  out.rows = f.rows();
  out.cols = f.cols();
  out.rank = rank(f);
  Polynomial prev(f.varset(), 1);
  for (std::size_t i = 1; i <= out.rank; ++i) {
    Polynomial d = dk(f, i);
    Polynomial phi;
    try {
      phi = monic(exact_divide(d, prev));
    } catch (const DivisibilityError&) {
      throw InternalConsistencyError("d_" + std::to_string(i - 1) + " does not divide d_" + std::to_string(i));
    }
    if (!out.factors.empty() && !divides(out.factors.back(), phi))
      throw InternalConsistencyError("invariant factor chain broken at position " + std::to_string(i));
    out.factors.push_back(phi);
    prev = d;
  }
  return out;
}

// Maximal minors generate the unit ideal.
inline bool is_zlp(const PolyMatrix& w, const MonomialOrder& ord = MonomialOrder::lex()) {
  if (w.rows() > w.cols()) throw UsageError("ZLP test needs rows <= cols");
  auto ms = minors(w, w.rows());
  bool any = false;
  for (auto& m : ms) {
    if (m.is_nonzero_constant()) return true;
    any = any || !m.is_zero();
  }
  if (!any) throw RankError("matrix does not have full row rank");
  return is_unit_ideal(IdealGens(ms), ord);
}

inline bool is_zrp(const PolyMatrix& w, const MonomialOrder& ord = MonomialOrder::lex()) {
  return is_zlp(w.transpose(), ord);
}

namespace detail {

// Divide a row by the gcd of its entries and clear denominators so the
// integer content is 1 and the first nonzero entry leads positively.
inline std::vector<Polynomial> primitive_row(std::vector<Polynomial> row) {
  const VarSet& vs = row.front().varset();
  Polynomial g = gcd_all(row, vs);
  if (g.is_zero()) return row;
  for (auto& p : row) p = exact_divide(p, g);
  mpz_class den = 1, num = 0;
  for (auto& p : row)
    for (auto& t : p.terms()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.c.get_den_mpz_t());
  for (auto& p : row)
    for (auto& t : p.terms()) {
      mpz_class v = t.c.get_num() * (den / t.c.get_den());
      mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), v.get_mpz_t());
    }
  Coefficient scale(den, num);
  scale.canonicalize();
  for (auto& p : row)
    if (!p.is_zero()) {
      if (p.lc() < 0) scale = -scale;
      break;
    }
  for (auto& p : row) p = p.scaled(scale);
  return row;
}

struct PivotMinor {
  std::vector<std::size_t> rows, cols;
  Polynomial det;
};

// Nonzero r×r minors ordered: constants first, then by total degree, term
// count, and enumeration order.
inline std::vector<PivotMinor> pivot_candidates(const PolyMatrix& f, std::size_t r) {
  std::vector<PivotMinor> out;
  for (auto& rs : all_combinations(f.rows(), r))
    for (auto& cs : all_combinations(f.cols(), r)) {
      Polynomial d = determinant(f.submatrix(rs, cs));
      if (!d.is_zero()) out.push_back({rs, cs, d});
    }
  std::stable_sort(out.begin(), out.end(), [](const PivotMinor& a, const PivotMinor& b) {
    bool ca = a.det.is_constant(), cb = b.det.is_constant();
    if (ca != cb) return ca;
    if (a.det.total_degree() != b.det.total_degree()) return a.det.total_degree() < b.det.total_degree();
    return a.det.size() < b.det.size();
  });
  return out;
}

// Cramer-rule kernel rows built on one pivot minor.
inline PolyMatrix kernel_from_pivot(const PolyMatrix& f, const PivotMinor& pm) {
  const VarSet& vs = f.varset();
  std::size_t l = f.rows();
  PolyMatrix adj = adjugate(f.submatrix(pm.rows, pm.cols));
  std::vector<std::vector<Polynomial>> rows;
  for (std::size_t i = 0; i < l; ++i) {
    if (std::find(pm.rows.begin(), pm.rows.end(), i) != pm.rows.end()) continue;
    std::vector<Polynomial> w(l, Polynomial(vs));
    w[i] = pm.det;
    for (std::size_t a = 0; a < pm.rows.size(); ++a) {
      Polynomial s(vs);
      for (std::size_t b = 0; b < pm.cols.size(); ++b) s += f(i, pm.cols[b]) * adj(b, a);
      w[pm.rows[a]] = -s;
    }
    rows.push_back(primitive_row(std::move(w)));
  }
  return PolyMatrix::from_rows(vs, rows);
}

}  // namespace detail

inline PolyMatrix left_kernel_fracfield(const PolyMatrix& f) {
  std::size_t r = rank(f);
  if (r == f.rows()) throw EmptyKernelError("matrix has full row rank");
  if (r == 0) return PolyMatrix::identity(f.varset(), f.rows());
  auto cands = detail::pivot_candidates(f, r);
  return detail::kernel_from_pivot(f, cands.front());
}

}  // namespace polysmith
