#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "polysmith/polysmith.hpp"

namespace polysmith::testing {

inline std::string data_path(const std::string& name) { return std::string(POLYSMITH_DATA_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline PolyMatrix load_fixture(const std::string& name) { return parse_matrix(read_file(data_path(name))); }

inline VarSet xyz() {
  static const VarSet vs({"x", "y", "z"});
  return vs;
}

inline Polynomial P(const std::string& s, const VarSet& vs = xyz()) { return parse_polynomial(s, vs); }

inline PolyMatrix M(const std::vector<std::vector<std::string>>& rows, const VarSet& vs = xyz()) {
  std::vector<std::vector<Polynomial>> out;
  for (auto& r : rows) {
    out.emplace_back();
    for (auto& e : r) out.back().push_back(P(e, vs));
  }
  return PolyMatrix::from_rows(vs, out);
}

class Random {
 public:
  explicit Random(std::uint32_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  // Up to `terms` terms of total degree <= deg over the variables in `vars`.
  Polynomial poly(const VarSet& vs, unsigned deg, std::size_t terms, std::vector<std::size_t> vars = {}) {
    if (vars.empty())
      for (std::size_t i = 0; i < vs.size(); ++i) vars.push_back(i);
    std::vector<Term> ts;
    for (std::size_t t = 0; t < terms; ++t) {
      Monomial m;
      unsigned d = unsigned(integer(0, int(deg)));
      for (unsigned k = 0; k < d; ++k) m.e[vars[std::size_t(integer(0, int(vars.size()) - 1))]]++;
      ts.push_back({m, Coefficient(integer(-3, 3))});
    }
    return Polynomial::from_terms(vs, std::move(ts));
  }

  PolyMatrix matrix(const VarSet& vs, std::size_t r, std::size_t c, unsigned deg, std::size_t terms) {
    PolyMatrix m(vs, r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = poly(vs, deg, terms);
    return m;
  }

  // Product of `ops` elementary additions and swaps; multipliers of degree <= deg.
  PolyMatrix unimodular(const VarSet& vs, std::size_t n, std::size_t ops, unsigned deg) {
    PolyMatrix u = PolyMatrix::identity(vs, n);
    for (std::size_t k = 0; k < ops; ++k) {
      std::size_t i = std::size_t(integer(0, int(n) - 1)), j = std::size_t(integer(0, int(n) - 2));
      if (j >= i) ++j;
      ElementaryOp op;
      int kind = integer(0, 5);
      if (kind == 0) {
        op = {ElementaryOp::Kind::RowSwap, i, j, Polynomial(vs)};
      } else if (kind == 1) {
        op = {ElementaryOp::Kind::RowScale, i, i, Polynomial(vs, integer(1, 2) * (integer(0, 1) ? 1 : -1))};
      } else {
        Polynomial q = poly(vs, deg, 2);
        if (q.is_zero()) q = Polynomial(vs, 1);
        op = {ElementaryOp::Kind::RowAdd, i, j, q};
      }
      u = op.matrix(vs, n) * u;
    }
    return u;
  }

  Coefficient small_root() { return Coefficient(integer(-3, 3)); }

  std::mt19937& engine() { return rng_; }

 private:
  std::mt19937 rng_;
};

// S0 = diag(1, t1, t1·t2·γ) with t1, t2 products of (z - c) and γ a product of
// chain factors (x - f(y, z)) and (y - g(z)).
struct ChainInstance {
  PolyMatrix S0, U0, V0, F;
};

inline ChainInstance chain_instance(Random& rnd, std::size_t ops = 4) {
  VarSet vs = xyz();
  Polynomial z = Polynomial::variable(vs, 2);
  auto linear_tail = [&](int count) {
    Polynomial t(vs, 1);
    for (int i = 0; i < count; ++i) t *= z - Polynomial(vs, rnd.small_root());
    return t;
  };
  Polynomial t1 = linear_tail(rnd.integer(0, 1));
  Polynomial t2 = linear_tail(rnd.integer(0, 2));
  Polynomial gamma(vs, 1);
  if (rnd.integer(0, 3) > 0) gamma *= Polynomial::variable(vs, 0) - rnd.poly(vs, 2, 2, {1, 2});
  if (rnd.integer(0, 3) > 0) gamma *= Polynomial::variable(vs, 1) - rnd.poly(vs, 2, 2, {2});
  ChainInstance in;
  in.S0 = PolyMatrix::diagonal({Polynomial(vs, 1), t1, t1 * t2 * gamma});
  in.U0 = rnd.unimodular(vs, 3, std::size_t(rnd.integer(1, int(ops))), 1);
  in.V0 = rnd.unimodular(vs, 3, std::size_t(rnd.integer(1, int(ops))), 1).transpose();
  in.F = in.U0 * in.S0 * in.V0;
  return in;
}

// Step matrices kept as reference data for the 3x3 chain fixture, plus the fold
// matrices that actually satisfy the reference fold identities.
struct ChainFixtureSteps {
  PolyMatrix F = load_fixture("example3_1.mat");
  PolyMatrix U1 = M({{"y + z - x", "-1", "1"}, {"x", "1", "0"}, {"-1", "0", "0"}});
  PolyMatrix U2 = M({{"1", "0", "0"}, {"-y", "1", "0"}, {"-x", "0", "1"}});
  PolyMatrix U3 = M({{"1", "0", "0"}, {"-x", "1", "0"}, {"-z", "0", "1"}});
  PolyMatrix U4 = M({{"1", "0", "0"}, {"-y", "1", "0"}, {"y*(y + z)", "-y - z", "1"}});
  PolyMatrix G2reference = M({{"0", "0", "-1"},
                     {"-1", "x", "-x - y"},
                     {"-y*z^2 - z^3 - y^2 - y*z", "x*y*z^2 + x*z^3 - y*z^3 + x*y^2 + x*y*z + x*z^2 - y^2*z + x*y",
                      "-y*z^4 + x*z^3 - y^2*z^2 + x*y*z - z"}});
  PolyMatrix G3reference = M({{"0", "0", "-1"}, {"-1", "x", "-y"}, {"-y - z", "(y + z)*x - y*z + x", "(-y*z + x)*z"}});
  PolyMatrix G4 = M({{"0", "0", "-1"}, {"-1", "x", "0"}, {"0", "1", "z"}});
  PolyMatrix Uprime = M({{"1", "0", "0"}, {"-y*z - 1", "1", "0"}, {"-x*z - 1", "0", "1"}});
  PolyMatrix Pfold = M({{"1", "0", "0"}, {"x*z + 1", "1", "0"}, {"z^3 - z", "0", "1"}});
  PolyMatrix Qfold = M({{"1", "0", "0"},
                        {"y*z + 1", "z + 1", "0"},
                        {"0", "(y + z)*(z^2 - 1)*(y + z^2)", "(y + z)*(z^2 - 1)*(y + z^2)*(x - y*z)"}});
  PolyMatrix UprimeFixed = M({{"1", "0", "0"}, {"-y*z - y", "1", "0"}, {"-x*z - x", "0", "1"}});
  PolyMatrix PfoldFixed = M({{"1", "0", "0"}, {"x*z + x", "1", "0"}, {"z^3 - z", "0", "1"}});
  PolyMatrix QfoldFixed = M({{"1", "0", "0"}, {"y*z + y", "1", "0"}, {"0", "(y + z)*(y + z^2)*(z - 1)", "1"}});

  static PolyMatrix D(const std::string& a, const std::string& b, const std::string& c) {
    return PolyMatrix::diagonal({P(a), P(b), P(c)});
  }
  // Rows k.. of U·G divided exactly by p.
  static PolyMatrix divide_rows(const PolyMatrix& ug, std::size_t k, const Polynomial& p) {
    PolyMatrix g = ug;
    for (std::size_t i = k; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) = exact_divide(g(i, j), p);
    return g;
  }
  PolyMatrix G1() const { return divide_rows(U1 * F, 1, P("z + 1")); }
  PolyMatrix G2() const { return divide_rows(U2 * G1(), 2, P("z - 1")); }
  PolyMatrix G3() const { return divide_rows(U3 * G2(), 2, P("y + z^2")); }
  PolyMatrix G4computed() const { return divide_rows(U4 * G3(), 2, P("x - y*z")); }
  // The matrices the three folds act on.
  PolyMatrix fold_a() const { return D("1", "z + 1", "z + 1") * inverse_unimodular(U2) * D("1", "1", "z - 1"); }
  PolyMatrix fold_p() const { return D("1", "z + 1", "z^2 - 1") * inverse_unimodular(U3) * D("1", "1", "y + z^2"); }
  PolyMatrix fold_q() const {
    return D("1", "z + 1", "(z^2 - 1)*(y + z^2)") * inverse_unimodular(U4) * D("1", "1", "x - y*z");
  }
  PolyMatrix smith() const { return D("1", "z + 1", "(x - y*z)*(y + z^2)*(z^2 - 1)"); }
};

}  // namespace polysmith::testing
