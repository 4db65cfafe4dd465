#include <gtest/gtest.h>

#include "support.hpp"

using namespace polysmith;
using namespace polysmith::testing;

namespace {

const char* kDet31 = "(x - y*z)*(y + z^2)*(z^3 + z^2 - z - 1)";

PolyMatrix fixture31() {
  static const PolyMatrix f = load_fixture("example3_1.mat");
  return f;
}

// Oracle for rank: maximal nonzero minor order by exhaustive enumeration.
std::size_t rank_by_minors(const PolyMatrix& f) {
  for (std::size_t k = std::min(f.rows(), f.cols()); k > 0; --k)
    for (auto& m : minors(f, k))
      if (!m.is_zero()) return k;
  return 0;
}

}  // namespace

TEST(MatrixOps, IdentityAndTranspose) {
  PolyMatrix f = fixture31();
  EXPECT_EQ(PolyMatrix::identity(xyz(), 3) * f, f);
  EXPECT_EQ(f.transpose().transpose(), f);
}

TEST(MatrixOps, SubstitutionDropsRank) {
  PolyMatrix f1 = substitute(fixture31(), {{std::size_t(0), P("y*z")}});
  EXPECT_EQ(rank(f1), 2u);
  EXPECT_EQ(rank_by_minors(f1), 2u);
}

TEST(Determinant, Identity) { EXPECT_EQ(determinant(PolyMatrix::identity(xyz(), 4)), P("1")); }

TEST(Determinant, Fixtures) {
  EXPECT_EQ(determinant(fixture31()), P(kDet31));
  EXPECT_EQ(determinant(load_fixture("example4_1.mat")), P("(z + 1)^2*(x - y)*(x + y)"));
}

TEST(Determinant, BareissMatchesCofactorExpansion) {
  Random rnd(77);
  for (int t = 0; t < 30; ++t) {
    PolyMatrix m = rnd.matrix(xyz(), 4, 4, 2, 2);
    EXPECT_EQ(detail::bareiss(m), detail::laplace(m));
  }
}

TEST(MinorReport, IdentityOrderOne) {
  auto rep = minor_report(PolyMatrix::identity(xyz(), 2), 1);
  ASSERT_EQ(rep.minors.size(), 4u);
  EXPECT_EQ(rep.minors[0], P("1"));
  EXPECT_TRUE(rep.minors[1].is_zero());
  EXPECT_TRUE(rep.minors[2].is_zero());
  EXPECT_EQ(rep.minors[3], P("1"));
  EXPECT_EQ(rep.dk, P("1"));
}

TEST(MinorReport, FixtureDivisors) {
  EXPECT_EQ(dk(fixture31(), 1), P("1"));
  EXPECT_EQ(dk(fixture31(), 2), P("z + 1"));
  EXPECT_EQ(minor_report(fixture31(), 2).minors.size(), 9u);
}

TEST(MinorReport, BeyondRankIsZero) {
  PolyMatrix m = M({{"x", "y"}, {"x*z", "y*z"}});
  auto rep = minor_report(m, 2);
  EXPECT_TRUE(rep.dk.is_zero());
  EXPECT_THROW(jk_is_unit(rep), RankError);
}

TEST(JkUnit, FixtureAllUnit) {
  for (std::size_t k = 1; k <= 3; ++k) EXPECT_TRUE(jk_is_unit(fixture31(), k, MonomialOrder::degrevlex())) << k;
}

TEST(JkUnit, DiagonalExamples) {
  VarSet xy({"x", "y"});
  EXPECT_FALSE(jk_is_unit(M({{"x", "0"}, {"0", "y"}}, xy), 1));
  EXPECT_TRUE(jk_is_unit(M({{"1", "0"}, {"0", "x^2 + y"}}, xy), 1));
}

TEST(Rank, Basics) {
  EXPECT_EQ(rank(PolyMatrix(xyz(), 2, 3)), 0u);
  EXPECT_EQ(rank(PolyMatrix::identity(xyz(), 3)), 3u);
  EXPECT_EQ(rank(M({{"x", "y", "z"}, {"x^2", "x*y", "x*z"}})), 1u);
}

TEST(TheoreticalSmith, Identity) {
  auto s = theoretical_smith(PolyMatrix::identity(xyz(), 3));
  ASSERT_EQ(s.factors.size(), 3u);
  for (auto& p : s.factors) EXPECT_EQ(p, P("1"));
}

TEST(TheoreticalSmith, Fixtures) {
  auto s = theoretical_smith(fixture31());
  ASSERT_EQ(s.factors.size(), 3u);
  EXPECT_EQ(s.factors[0], P("1"));
  EXPECT_EQ(s.factors[1], P("z + 1"));
  EXPECT_EQ(s.factors[2], P("(x - y*z)*(y + z^2)*(z^2 - 1)"));
  auto s4 = theoretical_smith(load_fixture("example4_1.mat"));
  EXPECT_EQ(s4.factors[2], P("(x - y)*(x + y)*(z + 1)"));
}

TEST(TheoreticalSmith, RectangularPadsRank) {
  auto s = theoretical_smith(M({{"x", "0", "0"}, {"0", "x*y", "0"}}));
  EXPECT_EQ(s.rank, 2u);
  EXPECT_EQ(s.factors[0], P("x"));
  EXPECT_EQ(s.factors[1], P("x*y"));
}

TEST(Unimodular, Examples) {
  EXPECT_TRUE(is_unimodular(M({{"y + z - x", "-1", "1"}, {"x", "1", "0"}, {"-1", "0", "0"}})));
  EXPECT_FALSE(is_unimodular(M({{"x", "0"}, {"0", "1"}})));
  EXPECT_TRUE(is_unimodular(load_fixture("example4_1_M.mat")));
  EXPECT_TRUE(is_unimodular(load_fixture("example4_1_N.mat")));
}

TEST(Unimodular, InverseRoundTrip) {
  PolyMatrix u = M({{"y + z - x", "-1", "1"}, {"x", "1", "0"}, {"-1", "0", "0"}});
  EXPECT_EQ(u * inverse_unimodular(u), PolyMatrix::identity(xyz(), 3));
  EXPECT_THROW(inverse_unimodular(M({{"x", "0"}, {"0", "1"}})), std::exception);
}

TEST(Zlp, Examples) {
  VarSet xs({"x"});
  EXPECT_TRUE(is_zlp(M({{"1", "0"}}, xs)));
  EXPECT_FALSE(is_zlp(M({{"x", "y"}})));
  EXPECT_TRUE(is_zlp(M({{"x - 1", "x"}}, xs)));
  // Bézout witness: 1*x - 1*(x - 1) = 1.
  EXPECT_EQ(P("x", xs) - P("x - 1", xs), P("1", xs));
  EXPECT_TRUE(is_unit_ideal(IdealGens({P("x - 1", xs), P("x", xs)})));
}

TEST(LeftKernel, Examples) {
  VarSet xs({"x"});
  PolyMatrix w = left_kernel_fracfield(M({{"1"}, {"0"}}, xs));
  EXPECT_EQ(w, M({{"0", "1"}}, xs));
  PolyMatrix f = M({{"x"}, {"1 - x"}}, xs);
  w = left_kernel_fracfield(f);
  EXPECT_EQ(w, M({{"x - 1", "x"}}, xs));
  EXPECT_TRUE((w * f).is_zero());
  EXPECT_THROW(left_kernel_fracfield(PolyMatrix::identity(xs, 2)), EmptyKernelError);
}

TEST(LeftKernel, SubstitutedFixture) {
  PolyMatrix f1 = substitute(fixture31(), {{std::size_t(0), P("y*z")}});
  PolyMatrix w = left_kernel_fracfield(f1);
  EXPECT_EQ(w.rows(), 1u);
  EXPECT_TRUE((w * f1).is_zero());
}

class PolymatProperties : public ::testing::Test {
 protected:
  Random rnd{9001};
};

TEST_F(PolymatProperties, RankDeficientSmithPadsWithZeroFactorsOnlyPastRank) {
  for (int t = 0; t < 30; ++t) {
    PolyMatrix f = rnd.matrix(xyz(), 3, 2, 1, 2) * rnd.matrix(xyz(), 2, 3, 1, 2);
    auto s = theoretical_smith(f);
    EXPECT_EQ(s.rank, rank(f));
    for (std::size_t i = 0; i + 1 < s.factors.size(); ++i) EXPECT_TRUE(divides(s.factors[i], s.factors[i + 1]));
  }
}

TEST_F(PolymatProperties, KernelAnnihilatesAndHasFullRowRank) {
  for (int t = 0; t < 50; ++t) {
    PolyMatrix a = rnd.matrix(xyz(), 3, 2, 1, 2), b = rnd.matrix(xyz(), 2, 3, 1, 2);
    PolyMatrix f = a * b;
    std::size_t r = rank(f);
    if (r == 3) continue;
    PolyMatrix w = left_kernel_fracfield(f);
    EXPECT_TRUE((w * f).is_zero());
    EXPECT_EQ(rank(w), w.rows());
    EXPECT_EQ(w.rows(), 3 - r);
  }
}

TEST_F(PolymatProperties, MultiplicativityOnCoprimeFactors) {
  // d_i(F1·F2) = d_i(F1)·d_i(F2) for coprime determinants with unit J_i.
  int checked = 0;
  for (int t = 0; t < 40; ++t) {
    PolyMatrix u1 = rnd.unimodular(xyz(), 3, 4, 1), u2 = rnd.unimodular(xyz(), 3, 4, 1);
    PolyMatrix f1 = u1 * PolyMatrix::diagonal({P("1"), P("1"), P("x - y*z")});
    PolyMatrix f2 = PolyMatrix::diagonal({P("1"), P("1"), P("z + 1")}) * u2;
    PolyMatrix f = f1 * f2;
    bool units = true;
    for (std::size_t k = 1; k <= 3; ++k) units = units && jk_is_unit(f, k, MonomialOrder::degrevlex());
    if (!units) continue;
    ++checked;
    for (std::size_t k = 1; k <= 3; ++k) EXPECT_EQ(dk(f, k), monic(dk(f1, k) * dk(f2, k)));
  }
  EXPECT_GT(checked, 0);
}
