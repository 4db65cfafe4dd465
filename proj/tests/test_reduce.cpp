#include <gtest/gtest.h>

#include "support.hpp"

using namespace polysmith;
using namespace polysmith::testing;

namespace {

const ChainFixtureSteps& steps() {
  static const ChainFixtureSteps s;
  return s;
}

PolyMatrix row_of(const PolyMatrix& m, std::size_t i) { return m.submatrix({i}, {0, 1, 2}); }

bool parallel_rows(const PolyMatrix& a, const PolyMatrix& b) {
  PolyMatrix two(a.varset(), 2, a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    two(0, j) = a(0, j);
    two(1, j) = b(0, j);
  }
  return rank(two) == 1;
}

void expect_extraction(const PolyMatrix& f, const Extraction& ex, std::size_t k, const Polynomial& p) {
  std::size_t n = f.rows();
  std::vector<Polynomial> d(n, Polynomial(f.varset(), 1));
  for (std::size_t i = k; i < n; ++i) d[i] = p;
  EXPECT_TRUE(is_unimodular(ex.U));
  EXPECT_EQ(ex.U * f, PolyMatrix::diagonal(d) * ex.G);
  Polynomial lhs = determinant(ex.G) * determinant(PolyMatrix::diagonal(d));
  EXPECT_EQ(lhs, determinant(ex.U) * determinant(f));
}

void expect_replay(const PolyMatrix& f, const ReductionTrace& tr) {
  for (auto& s : tr.steps) {
    EXPECT_EQ(s.left * f * s.right, s.state) << s.description;
    EXPECT_TRUE(is_unimodular(s.left)) << s.description;
    EXPECT_TRUE(is_unimodular(s.right)) << s.description;
  }
}

}  // namespace

TEST(ElementaryOp, MatricesAreUnimodular) {
  using K = ElementaryOp::Kind;
  for (K k : {K::RowSwap, K::ColSwap, K::RowScale, K::ColScale, K::RowAdd, K::ColAdd}) {
    Polynomial m = (k == K::RowScale || k == K::ColScale) ? P("-2") : P("x*y + 1");
    ElementaryOp op{k, 0, 2, m};
    EXPECT_TRUE(is_unimodular(op.matrix(xyz(), 3))) << op.describe();
  }
  EXPECT_THROW((ElementaryOp{K::RowScale, 0, 0, P("x")}.matrix(xyz(), 2)), UsageError);
}

TEST(ElementaryOp, AddConventions) {
  PolyMatrix b = M({{"1", "2"}, {"3", "4"}});
  ElementaryOp r{ElementaryOp::Kind::RowAdd, 1, 0, P("x")};
  EXPECT_EQ(r.matrix(xyz(), 2) * b, M({{"1", "2"}, {"3 + x", "4 + 2*x"}}));
  ElementaryOp c{ElementaryOp::Kind::ColAdd, 1, 0, P("x")};
  EXPECT_EQ(b * c.matrix(xyz(), 2), M({{"1", "2 + x"}, {"3", "4 + 3*x"}}));
}

TEST(LinearFactor, Recognition) {
  LinearFactor a = linear_factor(P("x - y*z"));
  EXPECT_EQ(a.var, 0u);
  EXPECT_EQ(a.f, P("y*z"));
  LinearFactor b = linear_factor(P("2*z + 2"));
  EXPECT_EQ(b.var, 2u);
  EXPECT_EQ(b.f, P("-1"));
  EXPECT_THROW(linear_factor(P("x^2 + y^2")), UsageError);
}

TEST(RationalRoots, SplitsTail) {
  Polynomial rest;
  auto roots = rational_roots(P("z^3 + z^2 - z - 1"), 2, &rest);
  ASSERT_TRUE(roots);
  Polynomial prod = rest;
  for (auto& r : *roots) prod *= P("z") - Polynomial(xyz(), r);
  EXPECT_EQ(prod, P("z^3 + z^2 - z - 1"));
  EXPECT_TRUE(rest.is_constant());
  EXPECT_EQ(roots->size(), 3u);
}

TEST(RationalRoots, IrreducibleLeftover) {
  Polynomial rest;
  auto roots = rational_roots(P("(2*z - 1)*(z^2 + 1)"), 2, &rest);
  ASSERT_TRUE(roots);
  ASSERT_EQ(roots->size(), 1u);
  EXPECT_EQ((*roots)[0], Coefficient(1, 2));
  EXPECT_EQ(monic(rest), P("z^2 + 1"));
}

TEST(ZlpAnnihilator, BezoutPair) {
  VarSet xs({"x"});
  PolyMatrix w = zlp_annihilator(M({{"x"}, {"1 - x"}}, xs), {});
  EXPECT_EQ(w, M({{"x - 1", "x"}}, xs));
  EXPECT_TRUE(is_zlp(w));
  EXPECT_EQ(P("x", xs) - P("x - 1", xs), P("1", xs));
}

TEST(ZlpAnnihilator, UnitColumn) {
  VarSet xs({"x"});
  EXPECT_EQ(zlp_annihilator(M({{"1"}, {"0"}}, xs), {}), M({{"0", "1"}}, xs));
}

TEST(ZlpAnnihilator, NotZlpIsTypedFailure) {
  // Kernel of (y, x)ᵀ is spanned by (x, -y), which vanishes at the origin.
  try {
    zlp_annihilator(M({{"y"}, {"x"}}), {});
    FAIL();
  } catch (const ReductionFailure& e) {
    EXPECT_EQ(e.kind(), FailureKind::KernelNotZlp);
  }
}

TEST(ZlpAnnihilator, FixtureSecondChainFactor) {
  const auto& s = steps();
  std::map<std::size_t, Polynomial> sub{{1, P("-z^2")}};
  PolyMatrix g2 = substitute(s.G2(), sub);
  PolyMatrix w = zlp_annihilator(s.G2(), sub);
  ASSERT_EQ(w.rows(), 1u);
  EXPECT_TRUE((w * g2).is_zero());
  EXPECT_TRUE((row_of(s.U3, 2) * g2).is_zero());
  EXPECT_TRUE(parallel_rows(w, row_of(s.U3, 2)));
}

TEST(Completion, UnitRow) {
  VarSet xs({"x"});
  EXPECT_EQ(unimodular_completion(M({{"0", "1"}}, xs)), PolyMatrix::identity(xs, 2));
}

TEST(Completion, BezoutRow) {
  VarSet xs({"x"});
  PolyMatrix u = unimodular_completion(M({{"x - 1", "x"}}, xs));
  EXPECT_EQ(u, M({{"1", "1"}, {"x - 1", "x"}}, xs));
  EXPECT_EQ(determinant(u), P("1", xs));
}

TEST(Completion, FixtureRowsCompleteAtDegreeOne) {
  PolyMatrix w = steps().U1.submatrix({1, 2}, {0, 1, 2});
  PolyMatrix u = unimodular_completion(w, 1);
  EXPECT_TRUE(is_unimodular(u));
  EXPECT_EQ(u.submatrix({1, 2}, {0, 1, 2}), w);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_LE(u(0, j).total_degree(), 1u);
  EXPECT_TRUE(is_unimodular(steps().U1));
}

TEST(Completion, RespectsConstraintMatrix) {
  PolyMatrix w = M({{"x", "1", "y"}});
  PolyMatrix mult = M({{"1", "z", "z"}, {"z", "1", "1"}});
  PolyMatrix u = unimodular_completion(w, 2, mult);
  EXPECT_TRUE(is_unimodular(u));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_TRUE(divides(mult(i, j), u(i, j))) << i << "," << j;
}

TEST(Completion, NotFoundWithinBound) {
  VarSet xs({"x"});
  try {
    unimodular_completion(M({{"x", "x - 1"}}, xs), 0, M({{"x", "x"}}, xs));
    FAIL();
  } catch (const ReductionFailure& e) {
    EXPECT_EQ(e.kind(), FailureKind::CompletionNotFound);
  }
}

TEST(ExtractFactor, FirstLevelOnFixture) {
  const auto& s = steps();
  Extraction ex = extract_factor(s.F, P("z + 1"), 1);
  expect_extraction(s.F, ex, 1, P("z + 1"));
  // The reference step matrix satisfies the same identity.
  EXPECT_EQ(s.U1 * s.F, ChainFixtureSteps::D("1", "z + 1", "z + 1") * s.G1());
  // Both annihilate F at z = -1 in the same row space.
  std::map<std::size_t, Polynomial> sub{{2, P("-1")}};
  PolyMatrix f1 = substitute(s.F, sub);
  EXPECT_TRUE((ex.U.submatrix({1, 2}, {0, 1, 2}) * f1).is_zero());
  EXPECT_TRUE((s.U1.submatrix({1, 2}, {0, 1, 2}) * f1).is_zero());
}

TEST(ExtractFactor, ChainFactorsOnReferenceIntermediates) {
  const auto& s = steps();
  PolyMatrix g2 = s.G2(), g3 = s.G3();
  expect_extraction(g2, extract_factor(g2, P("y + z^2"), 2), 2, P("y + z^2"));
  expect_extraction(g3, extract_factor(g3, P("x - y*z"), 2), 2, P("x - y*z"));
  EXPECT_EQ(s.G4computed(), s.G4);
}

TEST(ExtractFactor, RejectsWrongRank) {
  PolyMatrix f = PolyMatrix::diagonal({P("1"), P("z + 1"), P("z + 1")});
  EXPECT_THROW(extract_factor(f, P("z + 1"), 2), InternalConsistencyError);
  EXPECT_THROW(extract_factor(f, P("z + 1"), 0), UsageError);
}

TEST(FoldDiagonal, AlreadyDiagonal) {
  PolyMatrix b = PolyMatrix::diagonal({P("1"), P("z + 1"), P("x")});
  FoldResult r = fold_diagonal(b);
  EXPECT_TRUE(r.ops.empty());
  EXPECT_EQ(r.C, b);
}

TEST(FoldDiagonal, FirstFoldOnFixture) {
  const auto& s = steps();
  PolyMatrix a = s.fold_a();
  FoldResult r = fold_diagonal(a);
  EXPECT_EQ(r.C, ChainFixtureSteps::D("1", "z + 1", "(z + 1)*(z - 1)"));
  EXPECT_EQ(r.left * a * r.right, r.C);
  EXPECT_EQ(r.right, PolyMatrix::identity(xyz(), 3));
  EXPECT_EQ(r.left, s.UprimeFixed);
  EXPECT_NE(s.Uprime * a, r.C);
}

TEST(FoldDiagonal, SecondAndThirdFolds) {
  const auto& s = steps();
  FoldResult rp = fold_diagonal(s.fold_p());
  EXPECT_EQ(rp.C, ChainFixtureSteps::D("1", "z + 1", "(z^2 - 1)*(y + z^2)"));
  EXPECT_EQ(inverse_unimodular(rp.left), s.PfoldFixed);
  FoldResult rq = fold_diagonal(s.fold_q());
  EXPECT_EQ(rq.C, s.smith());
  EXPECT_EQ(inverse_unimodular(rq.left), s.QfoldFixed);
  EXPECT_EQ(s.fold_q(), s.QfoldFixed * s.smith());
}

TEST(FoldDiagonal, UpperTriangularUsesColumns) {
  PolyMatrix b = M({{"z + 1", "x*(z + 1)"}, {"0", "y"}});
  FoldResult r = fold_diagonal(b);
  EXPECT_EQ(r.C, M({{"z + 1", "0"}, {"0", "y"}}));
  EXPECT_EQ(r.left * b * r.right, r.C);
  for (auto& op : r.ops) EXPECT_FALSE(op.is_row());
}

TEST(FoldDiagonal, ShapeErrors) {
  EXPECT_THROW(fold_diagonal(M({{"x", "1"}, {"1", "x"}})), ShapeError);
  EXPECT_THROW(fold_diagonal(M({{"x", "0"}, {"y", "z"}})), ShapeError);
}

TEST(ReduceToSmith, ChainFixture) {
  const auto& s = steps();
  auto rep = check_equivalence(s.F, {}, MonomialOrder::degrevlex());
  ReductionTrace tr = reduce_to_smith(s.F, rep.shape);
  ASSERT_TRUE(tr.result) << tr.detail;
  EXPECT_EQ(tr.result->S, s.smith());
  EXPECT_TRUE(verify_witness(s.F, tr.result->U, tr.result->V, tr.result->S));
  EXPECT_EQ(tr.orientation, "U*F*V=S");
  expect_replay(s.F, tr);
}

TEST(ReduceToSmith, LinearFixtureWithHints) {
  PolyMatrix f = load_fixture("example4_1.mat");
  std::vector<LinearForm> g{LinearForm::from_polynomial(P("x - y")), LinearForm::from_polynomial(P("x + y"))};
  auto rep = check_equivalence(f, g);
  ReductionTrace tr = reduce_to_smith(f, rep.shape);
  ASSERT_TRUE(tr.result) << tr.detail;
  EXPECT_EQ(tr.result->S, PolyMatrix::diagonal({P("1"), P("z + 1"), P("(x - y)*(x + y)*(z + 1)")}));
  EXPECT_TRUE(verify_witness(f, tr.result->U, tr.result->V, tr.result->S));
  expect_replay(f, tr);
}

TEST(ReduceToSmith, AlreadySmith) {
  PolyMatrix f = PolyMatrix::diagonal({P("1"), P("z + 1"), P("x*(z + 1)")});
  ReductionTrace tr = reduce_to_smith(f, check_equivalence(f).shape);
  ASSERT_TRUE(tr.result);
  EXPECT_TRUE(tr.steps.empty());
  EXPECT_EQ(tr.result->U, PolyMatrix::identity(xyz(), 3));
  EXPECT_EQ(tr.result->V, PolyMatrix::identity(xyz(), 3));
  EXPECT_EQ(tr.result->S, f);
}

TEST(ReduceToSmith, UnsupportedInputsAreTypedFailures) {
  PolyMatrix rect = M({{"1", "0", "x"}, {"0", "z + 1", "y"}});
  ReductionTrace a = reduce_to_smith(rect, check_equivalence(rect).shape);
  EXPECT_FALSE(a.result);
  EXPECT_EQ(a.failure, FailureKind::UnsupportedShape);
  // Tail with an irreducible quadratic factor.
  PolyMatrix q = M({{"1", "1"}, {"0", "z^2 + 1"}});
  ReductionTrace b = reduce_to_smith(q, check_equivalence(q).shape);
  EXPECT_EQ(b.failure, FailureKind::UnsupportedShape);
}

TEST(ReduceToSmith, ZeroMatrix) {
  PolyMatrix z(xyz(), 2, 2);
  ReductionTrace tr = reduce_to_smith(z, check_equivalence(z).shape);
  ASSERT_TRUE(tr.result);
  EXPECT_TRUE(tr.result->S.is_zero());
}

class ReduceProperties : public ::testing::Test {
 protected:
  Random rnd{271828};
};

TEST_F(ReduceProperties, FoldPreservesDeterminant) {
  for (int t = 0; t < 100; ++t) {
    std::vector<Polynomial> d{rnd.poly(xyz(), 1, 2), rnd.poly(xyz(), 1, 2), rnd.poly(xyz(), 1, 2)};
    bool skip = false;
    for (auto& p : d) skip = skip || p.is_zero();
    if (skip) continue;
    PolyMatrix b = PolyMatrix::diagonal(d);
    for (std::size_t i = 1; i < 3; ++i)
      for (std::size_t j = 0; j < i; ++j) b(i, j) = d[j] * rnd.poly(xyz(), 1, 2);
    FoldResult r = fold_diagonal(b);
    EXPECT_EQ(determinant(r.C), determinant(b));
    EXPECT_TRUE(r.C.is_diagonal());
    EXPECT_EQ(r.left * b * r.right, r.C);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(r.C(i, i), b(i, i));
  }
}

TEST_F(ReduceProperties, EndToEndOnConstructedInstances) {
  int ok = 0, typed = 0;
  for (int t = 0; t < 100; ++t) {
    ChainInstance in = chain_instance(rnd, 8);
    auto rep = check_equivalence(in.F, {}, MonomialOrder::degrevlex());
    ASSERT_EQ(rep.verdict, Verdict::Equivalent);
    ReductionTrace tr = reduce_to_smith(in.F, rep.shape);
    if (!tr.result) {
      ASSERT_TRUE(tr.failure);
      EXPECT_NE(*tr.failure, FailureKind::UnsupportedShape) << tr.detail;
      ++typed;
      continue;
    }
    ++ok;
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(tr.result->S(k, k), monic(in.S0(k, k)));
    EXPECT_TRUE(verify_witness(in.F, tr.result->U, tr.result->V, tr.result->S));
    expect_replay(in.F, tr);
  }
  EXPECT_GE(ok, 95) << typed << " typed failures";
}
