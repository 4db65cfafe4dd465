#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace polysmith {

using Coefficient = mpq_class;

inline constexpr std::size_t kMaxVars = 8;

class VarSet {
 public:
  VarSet() : names_(std::make_shared<const std::vector<std::string>>()) {}

  explicit VarSet(std::vector<std::string> names) {
    if (names.size() > kMaxVars)
      throw UsageError("at most " + std::to_string(kMaxVars) + " variables are supported");
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i].empty()) throw UsageError("empty variable name");
      for (std::size_t j = 0; j < i; ++j)
        if (names[i] == names[j]) throw UsageError("duplicate variable '" + names[i] + "'");
    }
    names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
  }

  std::size_t size() const { return names_->size(); }
  const std::string& name(std::size_t i) const { return names_->at(i); }
  const std::vector<std::string>& names() const { return *names_; }

  std::optional<std::size_t> index_of(const std::string& n) const {
    for (std::size_t i = 0; i < names_->size(); ++i)
      if ((*names_)[i] == n) return i;
    return std::nullopt;
  }

  bool operator==(const VarSet& o) const {
    return names_ == o.names_ || *names_ == *o.names_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> names_;
};

// Exponent vector. Slots past the ambient VarSet size stay zero, so
// comparisons never need to know n.
struct Monomial {
  std::array<std::uint16_t, kMaxVars> e{};

  static Monomial var(std::size_t i, unsigned power = 1) {
    Monomial m;
    m.e[i] = static_cast<std::uint16_t>(power);
    return m;
  }

  unsigned degree() const {
    unsigned d = 0;
    for (auto x : e) d += x;
    return d;
  }
  bool is_one() const {
    for (auto x : e)
      if (x) return false;
    return true;
  }
  bool divides(const Monomial& o) const {
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (e[i] > o.e[i]) return false;
    return true;
  }
  Monomial operator*(const Monomial& o) const {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      unsigned s = unsigned(e[i]) + o.e[i];
      if (s > 0xFFFFu) throw UsageError("exponent overflow");
      r.e[i] = static_cast<std::uint16_t>(s);
    }
    return r;
  }
  // Caller guarantees o divides *this.
  Monomial operator/(const Monomial& o) const {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) r.e[i] = static_cast<std::uint16_t>(e[i] - o.e[i]);
    return r;
  }
  Monomial lcm(const Monomial& o) const {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) r.e[i] = std::max(e[i], o.e[i]);
    return r;
  }
  bool coprime(const Monomial& o) const {
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (e[i] && o.e[i]) return false;
    return true;
  }
  auto operator<=>(const Monomial&) const = default;
};

class MonomialOrder {
 public:
  enum class Kind { Lex, DegRevLex };

  MonomialOrder() = default;
  MonomialOrder(Kind k, std::vector<std::size_t> priority = {}) : kind_(k), perm_(std::move(priority)) {
    std::vector<bool> seen(kMaxVars, false);
    for (auto p : perm_) {
      if (p >= kMaxVars || seen[p]) throw UsageError("bad variable priority sequence");
      seen[p] = true;
    }
  }
  static MonomialOrder lex() { return MonomialOrder(Kind::Lex); }
  static MonomialOrder degrevlex() { return MonomialOrder(Kind::DegRevLex); }

  Kind kind() const { return kind_; }
  const std::vector<std::size_t>& priority() const { return perm_; }

  // <0, 0, >0 like strcmp; larger means earlier in term order.
  int compare(const Monomial& a, const Monomial& b) const {
    if (kind_ == Kind::DegRevLex) {
      unsigned da = a.degree(), db = b.degree();
      if (da != db) return da < db ? -1 : 1;
      std::size_t n = perm_.empty() ? kMaxVars : perm_.size();
      for (std::size_t k = n; k-- > 0;) {
        std::size_t i = perm_.empty() ? k : perm_[k];
        if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? 1 : -1;
      }
      return 0;
    }
    if (perm_.empty()) {
      auto c = a <=> b;
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    for (std::size_t i : perm_)
      if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? -1 : 1;
    return 0;
  }
  bool greater(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }

  std::string name() const { return kind_ == Kind::Lex ? "lex" : "degrevlex"; }

 private:
  Kind kind_ = Kind::Lex;
  std::vector<std::size_t> perm_;
};

struct Term {
  Monomial m;
  Coefficient c;
};

class Polynomial;
Polynomial operator*(const Polynomial& a, const Polynomial& b);

// Sparse polynomial over Q; terms kept strictly decreasing in lex order on the
// declared variables.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(VarSet vs) : vs_(std::move(vs)) {}
  Polynomial(VarSet vs, const Coefficient& c) : vs_(std::move(vs)) {
    if (c != 0) terms_.push_back({Monomial{}, c});
  }
  Polynomial(VarSet vs, long c) : Polynomial(std::move(vs), Coefficient(c)) {}

  static Polynomial variable(const VarSet& vs, std::size_t i) {
    if (i >= vs.size()) throw UsageError("variable index out of range");
    Polynomial p(vs);
    p.terms_.push_back({Monomial::var(i), Coefficient(1)});
    return p;
  }
  static Polynomial variable(const VarSet& vs, const std::string& name) {
    auto i = vs.index_of(name);
    if (!i) throw UsageError("unknown variable '" + name + "'");
    return variable(vs, *i);
  }
  static Polynomial monomial(const VarSet& vs, const Monomial& m, const Coefficient& c) {
    Polynomial p(vs);
    if (c != 0) p.terms_.push_back({m, c});
    return p;
  }
  // Sorts and merges arbitrary terms into canonical form.
  static Polynomial from_terms(const VarSet& vs, std::vector<Term> ts) {
    std::sort(ts.begin(), ts.end(), [](const Term& a, const Term& b) { return a.m > b.m; });
    Polynomial p(vs);
    for (auto& t : ts) {
      if (!p.terms_.empty() && p.terms_.back().m == t.m) {
        p.terms_.back().c += t.c;
        if (p.terms_.back().c == 0) p.terms_.pop_back();
      } else if (t.c != 0) {
        p.terms_.push_back(std::move(t));
      }
    }
    return p;
  }
  // Terms already strictly decreasing with nonzero coefficients.
  static Polynomial from_sorted(const VarSet& vs, std::vector<Term> ts) {
    Polynomial p(vs);
    p.terms_ = std::move(ts);
    return p;
  }

  const VarSet& varset() const { return vs_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].m.is_one()); }
  bool is_nonzero_constant() const { return terms_.size() == 1 && terms_[0].m.is_one(); }
  Coefficient constant_term() const {
    if (!terms_.empty() && terms_.back().m.is_one()) return terms_.back().c;
    return 0;
  }
  const Term& leading() const {
    if (terms_.empty()) throw UsageError("leading term of zero polynomial");
    return terms_.front();
  }
  const Coefficient& lc() const { return leading().c; }

  unsigned total_degree() const {
    unsigned d = 0;
    for (auto& t : terms_) d = std::max(d, t.m.degree());
    return d;
  }
  unsigned degree_in(std::size_t v) const {
    unsigned d = 0;
    for (auto& t : terms_) d = std::max<unsigned>(d, t.m.e[v]);
    return d;
  }
  bool depends_on(std::size_t v) const {
    for (auto& t : terms_)
      if (t.m.e[v]) return true;
    return false;
  }
  std::vector<std::size_t> variables() const {
    std::vector<std::size_t> r;
    for (std::size_t v = 0; v < vs_.size(); ++v)
      if (depends_on(v)) r.push_back(v);
    return r;
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& t : r.terms_) t.c = -t.c;
    return r;
  }

  Polynomial& operator+=(const Polynomial& o) { return *this = add_scaled(o, Coefficient(1), Monomial{}); }
  Polynomial& operator-=(const Polynomial& o) { return *this = add_scaled(o, Coefficient(-1), Monomial{}); }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial scaled(const Coefficient& c) const {
    if (c == 0) return Polynomial(vs_);
    Polynomial r = *this;
    for (auto& t : r.terms_) t.c *= c;
    return r;
  }
  Polynomial shifted(const Monomial& m) const {
    Polynomial r = *this;
    for (auto& t : r.terms_) t.m = t.m * m;
    return r;
  }

  // *this + c*m*o via a single merge; lex order is preserved by shifting.
  Polynomial add_scaled(const Polynomial& o, const Coefficient& c, const Monomial& m) const {
    check_same(o);
    Polynomial r(vs_);
    if (c == 0 || o.is_zero()) {
      r.terms_ = terms_;
      return r;
    }
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
      if (j == o.terms_.size()) {
        r.terms_.push_back(terms_[i++]);
        continue;
      }
      Monomial om = o.terms_[j].m * m;
      if (i == terms_.size() || om > terms_[i].m) {
        r.terms_.push_back({om, o.terms_[j].c * c});
        ++j;
      } else if (terms_[i].m > om) {
        r.terms_.push_back(terms_[i++]);
      } else {
        Coefficient s = terms_[i].c + o.terms_[j].c * c;
        if (s != 0) r.terms_.push_back({om, std::move(s)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  void check_same(const Polynomial& o) const {
    if (!(vs_ == o.vs_)) throw UsageError("polynomials over different variable sets");
  }

  bool operator==(const Polynomial& o) const {
    if (!(vs_ == o.vs_) || terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
      if (terms_[i].m != o.terms_[i].m || terms_[i].c != o.terms_[i].c) return false;
    return true;
  }

  std::string to_string() const;

 private:
  VarSet vs_;
  std::vector<Term> terms_;
};

inline Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  return a.add_scaled(b, Coefficient(1), Monomial{});
}
inline Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  return a.add_scaled(b, Coefficient(-1), Monomial{});
}

inline Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_same(b);
  if (a.is_zero() || b.is_zero()) return Polynomial(a.varset());
  if (b.size() == 1) return a.shifted(b.leading().m).scaled(b.leading().c);
  if (a.size() == 1) return b.shifted(a.leading().m).scaled(a.leading().c);
  std::vector<Term> prod;
  prod.reserve(a.size() * b.size());
  for (auto& s : a.terms())
    for (auto& t : b.terms()) prod.push_back({s.m * t.m, s.c * t.c});
  return Polynomial::from_terms(a.varset(), std::move(prod));
}

inline Polynomial operator*(const Coefficient& c, const Polynomial& p) { return p.scaled(c); }

inline Polynomial pow(const Polynomial& p, unsigned e) {
  Polynomial r(p.varset(), 1), b = p;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

// Single-divisor division in lex order. Returns (quotient, remainder).
inline std::pair<Polynomial, Polynomial> divrem(const Polynomial& p, const Polynomial& q) {
  p.check_same(q);
  if (q.is_zero()) throw UsageError("division by zero polynomial");
  const VarSet& vs = p.varset();
  std::vector<Term> quot;
  std::vector<Term> rem;
  Polynomial r = p;
  const Term& lq = q.leading();
  while (!r.is_zero()) {
    const Term& lt = r.leading();
    if (lq.m.divides(lt.m)) {
      Monomial m = lt.m / lq.m;
      Coefficient c = lt.c / lq.c;
      quot.push_back({m, c});
      r = r.add_scaled(q, -c, m);
    } else {
      rem.push_back(lt);
      r = Polynomial::from_sorted(vs, std::vector<Term>(r.terms().begin() + 1, r.terms().end()));
    }
  }
  return {Polynomial::from_sorted(vs, std::move(quot)), Polynomial::from_sorted(vs, std::move(rem))};
}

inline Polynomial exact_divide(const Polynomial& p, const Polynomial& q) {
  p.check_same(q);
  if (q.is_zero()) throw DivisibilityError("division by zero polynomial");
  if (q.is_nonzero_constant()) return p.scaled(1 / q.lc());
  std::vector<Term> quot;
  Polynomial r = p;
  const Term& lq = q.leading();
  while (!r.is_zero()) {
    const Term& lt = r.leading();
    if (!lq.m.divides(lt.m)) throw DivisibilityError("inexact division: " + q.to_string() + " does not divide");
    Monomial m = lt.m / lq.m;
    Coefficient c = lt.c / lq.c;
    quot.push_back({m, c});
    r = r.add_scaled(q, -c, m);
  }
  return Polynomial::from_sorted(p.varset(), std::move(quot));
}

inline bool divides(const Polynomial& q, const Polynomial& p) {
  if (q.is_zero()) return p.is_zero();
  try {
    exact_divide(p, q);
    return true;
  } catch (const DivisibilityError&) {
    return false;
  }
}

// Scale so the lex-leading coefficient is 1 (zero stays zero).
inline Polynomial monic(const Polynomial& p) {
  if (p.is_zero()) return p;
  return p.scaled(1 / p.lc());
}

// Multivariate division by a list of divisors under an arbitrary order.
struct DivisionResult {
  std::vector<Polynomial> quotients;
  Polynomial remainder;
};

namespace detail {

inline std::vector<Term> sorted_terms(const Polynomial& p, const MonomialOrder& ord) {
  std::vector<Term> ts = p.terms();
  if (!(ord.kind() == MonomialOrder::Kind::Lex && ord.priority().empty()))
    std::sort(ts.begin(), ts.end(), [&](const Term& a, const Term& b) { return ord.greater(a.m, b.m); });
  return ts;
}

// a + c*m*b on order-sorted term vectors.
inline std::vector<Term> add_scaled(const std::vector<Term>& a, const std::vector<Term>& b, const Coefficient& c,
                                    const Monomial& m, const MonomialOrder& ord) {
  std::vector<Term> r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size()) {
      r.push_back(a[i++]);
      continue;
    }
    Monomial bm = b[j].m * m;
    int cmp = i == a.size() ? -1 : ord.compare(a[i].m, bm);
    if (cmp < 0) {
      r.push_back({bm, b[j].c * c});
      ++j;
    } else if (cmp > 0) {
      r.push_back(a[i++]);
    } else {
      Coefficient s = a[i].c + b[j].c * c;
      if (s != 0) r.push_back({bm, std::move(s)});
      ++i;
      ++j;
    }
  }
  return r;
}

}  // namespace detail

inline DivisionResult divrem_multi(const Polynomial& p, const std::vector<Polynomial>& divisors,
                                   const MonomialOrder& ord = MonomialOrder::lex()) {
  if (divisors.empty()) throw UsageError("divrem_multi needs at least one divisor");
  const VarSet& vs = p.varset();
  std::vector<std::vector<Term>> ds;
  for (auto& d : divisors) {
    p.check_same(d);
    if (d.is_zero()) throw UsageError("zero divisor");
    ds.push_back(detail::sorted_terms(d, ord));
  }
  std::vector<std::vector<Term>> qs(divisors.size());
  std::vector<Term> rem;
  std::vector<Term> r = detail::sorted_terms(p, ord);
  while (!r.empty()) {
    const Term lt = r.front();
    bool reduced = false;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const Term& ld = ds[i].front();
      if (ld.m.divides(lt.m)) {
        Monomial m = lt.m / ld.m;
        Coefficient c = lt.c / ld.c;
        qs[i].push_back({m, c});
        r = detail::add_scaled(r, ds[i], -c, m, ord);
        reduced = true;
        break;
      }
    }
    if (!reduced) {
      rem.push_back(lt);
      r.erase(r.begin());
    }
  }
  DivisionResult out;
  for (auto& q : qs) out.quotients.push_back(Polynomial::from_terms(vs, std::move(q)));
  out.remainder = Polynomial::from_terms(vs, std::move(rem));
  return out;
}

inline std::vector<Polynomial> univar_view(const Polynomial& p, std::size_t v) {
  const VarSet& vs = p.varset();
  if (v >= vs.size()) throw UsageError("variable index out of range");
  if (p.is_zero()) return {Polynomial(vs)};
  std::vector<std::vector<Term>> buckets(p.degree_in(v) + 1);
  for (auto& t : p.terms()) {
    Term s = t;
    s.m.e[v] = 0;
    buckets[t.m.e[v]].push_back(std::move(s));
  }
  std::vector<Polynomial> out;
  // Zeroing one exponent keeps lex order within a bucket.
  for (auto& b : buckets) out.push_back(Polynomial::from_sorted(vs, std::move(b)));
  return out;
}

inline Polynomial substitute(const Polynomial& p, const std::map<std::size_t, Polynomial>& assign) {
  const VarSet& vs = p.varset();
  for (auto& [v, q] : assign) {
    if (v >= vs.size()) throw UsageError("substitution for unknown variable");
    p.check_same(q);
  }
  if (assign.empty()) return p;
  std::map<std::pair<std::size_t, unsigned>, Polynomial> powers;
  auto power = [&](std::size_t v, unsigned e) -> const Polynomial& {
    auto it = powers.find({v, e});
    if (it != powers.end()) return it->second;
    unsigned k = e;
    while (k > 1 && !powers.count({v, k - 1})) --k;
    if (k == 1) powers.emplace(std::make_pair(v, 1u), assign.at(v));
    for (unsigned j = std::max(k, 2u); j <= e; ++j)
      powers.emplace(std::make_pair(v, j), powers.at({v, j - 1}) * assign.at(v));
    return powers.at({v, e});
  };
  std::vector<Term> acc;
  for (auto& t : p.terms()) {
    Monomial rest = t.m;
    Polynomial factor(vs, t.c);
    for (auto& [v, q] : assign) {
      if (t.m.e[v] == 0) continue;
      rest.e[v] = 0;
      factor = factor * power(v, t.m.e[v]);
    }
    for (auto& s : factor.terms()) acc.push_back({s.m * rest, s.c});
  }
  return Polynomial::from_terms(vs, std::move(acc));
}

inline Polynomial substitute(const Polynomial& p, const std::map<std::string, Polynomial>& assign) {
  std::map<std::size_t, Polynomial> byidx;
  for (auto& [name, q] : assign) {
    auto i = p.varset().index_of(name);
    if (!i) throw UsageError("unknown variable '" + name + "'");
    byidx.emplace(*i, q);
  }
  return substitute(p, byidx);
}

inline Coefficient evaluate(const Polynomial& p, const std::vector<Coefficient>& point) {
  if (point.size() != p.varset().size()) throw UsageError("evaluation point has wrong length");
  Coefficient sum = 0;
  for (auto& t : p.terms()) {
    Coefficient v = t.c;
    for (std::size_t i = 0; i < point.size(); ++i)
      for (unsigned k = 0; k < t.m.e[i]; ++k) v *= point[i];
    sum += v;
  }
  return sum;
}

inline std::string coefficient_to_string(const Coefficient& c) {
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto& t : terms_) {
    Coefficient c = t.c;
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    Coefficient a = abs(c);
    std::string mono;
    for (std::size_t i = 0; i < vs_.size(); ++i) {
      if (!t.m.e[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += vs_.name(i);
      if (t.m.e[i] > 1) mono += "^" + std::to_string(t.m.e[i]);
    }
    if (mono.empty()) {
      out += coefficient_to_string(a);
    } else if (a == 1) {
      out += mono;
    } else {
      out += coefficient_to_string(a) + "*" + mono;
    }
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

}  // namespace polysmith
