#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "strtop/homology.hpp"

using namespace strtop;

namespace {

IntMatrix ints(const std::vector<std::vector<long>>& rows) {
  IntMatrix m;
  for (const auto& r : rows) {
    m.emplace_back();
    for (long x : r) m.back().push_back(x);
  }
  return m;
}

SparseMatrix sparse(const IntMatrix& m, int cols) {
  SparseMatrix s(static_cast<int>(m.size()), cols);
  for (int i = 0; i < s.rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (m[i][j] != 0) s.add(i, j, m[i][j]);
  return s;
}

ChainComplex from_dense(const std::vector<int>& size, const std::vector<IntMatrix>& d) {
  ChainComplex c;
  c.size = size;
  c.boundary.emplace_back(0, size[0]);
  for (std::size_t n = 1; n < size.size(); ++n) c.boundary.push_back(sparse(d[n - 1], size[n]));
  return c;
}

// a point
ChainComplex point() { return from_dense({1}, {}); }

// the projective plane: one cell in each dimension
ChainComplex projective_plane() { return from_dense({1, 1, 1}, {ints({{0}}), ints({{2}})}); }

// torus: one vertex, edges a b, one square with boundary a + b - a - b
ChainComplex torus() { return from_dense({1, 2, 1}, {ints({{0, 0}}), ints({{0}, {0}})}); }

void check_smith(const IntMatrix& m, int cols) {
  auto s = smith_normal_form(m, cols);
  const int rows = static_cast<int>(m.size());
  EXPECT_EQ(multiply(multiply(s.u, m, rows, cols), s.v, cols, cols), s.d);
  EXPECT_EQ(abs(oracle::determinant(s.u)), 1);
  EXPECT_EQ(abs(oracle::determinant(s.v)), 1);
  std::vector<Integer> diag;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      if (i != j) EXPECT_EQ(s.d[i][j], 0);
      else if (s.d[i][i] != 0) diag.push_back(s.d[i][i]);
    }
  for (std::size_t t = 0; t + 1 < diag.size(); ++t) {
    EXPECT_GT(diag[t], 0);
    EXPECT_EQ(diag[t + 1] % diag[t], 0);
  }
  EXPECT_EQ(diag, oracle::invariant_factors(m));
}

const CellComplex& complex_of(int chi, int k, int l) {
  static std::map<std::tuple<int, int, int>, CellComplex> cache;
  auto key = std::make_tuple(chi, k, l);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, enumerate_cells(chi, k, l)).first;
  return it->second;
}

}  // namespace

TEST(Smith, Identity) {
  auto m = identity_matrix(3);
  EXPECT_EQ(smith_normal_form(m).d, m);
}

TEST(Smith, TwoByTwo) {
  auto s = smith_normal_form(ints({{2, 4}, {6, 8}}));
  EXPECT_EQ(s.d, ints({{2, 0}, {0, 4}}));
  check_smith(ints({{2, 4}, {6, 8}}), 2);
}

TEST(Smith, Zero) {
  auto z = ints({{0, 0, 0}, {0, 0, 0}});
  EXPECT_EQ(smith_normal_form(z).d, z);
  EXPECT_TRUE(invariant_factors(z, 3).empty());
}

TEST(Smith, EmptyShapes) {
  EXPECT_TRUE(smith_normal_form(IntMatrix{}, 0).d.empty());
  EXPECT_TRUE(invariant_factors(SparseMatrix(0, 4)).empty());
  EXPECT_TRUE(invariant_factors(SparseMatrix(3, 0)).empty());
}

TEST(Smith, RandomMatricesAgreeWithDeterminantalDivisors) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    int rows = std::uniform_int_distribution<int>(1, 6)(rng);
    int cols = std::uniform_int_distribution<int>(1, 6)(rng);
    int span = trial % 3 == 0 ? 1 : 9;
    std::uniform_int_distribution<int> e(-span, span);
    IntMatrix m(rows, std::vector<Integer>(cols));
    for (auto& r : m)
      for (auto& x : r) x = e(rng) * (trial % 2 ? 2 : 1);
    check_smith(m, cols);
    EXPECT_EQ(invariant_factors(sparse(m, cols)), oracle::invariant_factors(m));
  }
}

TEST(Smith, SparseModPRank) {
  auto m = ints({{2, 0}, {0, 3}});
  EXPECT_EQ(invariant_factors(sparse(m, 2), 2).size(), 1u);
  EXPECT_EQ(invariant_factors(sparse(m, 2), 3).size(), 1u);
  EXPECT_EQ(invariant_factors(sparse(m, 2), 5).size(), 2u);
  EXPECT_EQ(invariant_factors(sparse(m, 2)), (std::vector<Integer>{1, 6}));
}

TEST(Homology, Point) {
  auto h = homology(point());
  ASSERT_EQ(h.size(), 1u);
  EXPECT_EQ(h[0].betti, 1);
  EXPECT_TRUE(h[0].torsion.empty());
}

TEST(Homology, DisjointUnionDoublesBettiZero) {
  for (const auto& c : {point(), torus(), projective_plane()}) {
    auto one = homology(c), two = homology(direct_sum(c, c));
    for (std::size_t n = 0; n < one.size(); ++n) {
      EXPECT_EQ(two[n].betti, 2 * one[n].betti);
      EXPECT_EQ(two[n].torsion.size(), 2 * one[n].torsion.size());
    }
  }
}

TEST(Homology, ProjectivePlane) {
  auto z = homology(projective_plane());
  EXPECT_EQ(z[0].betti, 1);
  EXPECT_EQ(z[1].betti, 0);
  EXPECT_EQ(z[1].torsion, std::vector<Integer>{2});
  EXPECT_EQ(z[2].betti, 0);
  auto z2 = homology(projective_plane(), {Coefficients::mod_p, 2});
  EXPECT_EQ(z2[1].betti, 1);
  EXPECT_EQ(z2[2].betti, 1);
  EXPECT_TRUE(z2[1].torsion.empty());
  auto q = homology(projective_plane(), {Coefficients::rationals});
  EXPECT_EQ(q[1].betti, 0);
  EXPECT_TRUE(q[1].torsion.empty());
}

TEST(Homology, Torus) {
  auto h = homology(torus());
  EXPECT_EQ(h[0].betti, 1);
  EXPECT_EQ(h[1].betti, 2);
  EXPECT_EQ(h[2].betti, 1);
  EXPECT_EQ(homology(torus(), 1).betti, 2);
  EXPECT_EQ(homology(torus(), 5).betti, 0);
}

TEST(Homology, BoundarySquaredCheckSeesErrors) {
  auto bad = from_dense({1, 1, 1}, {ints({{1}}), ints({{1}})});
  EXPECT_EQ(boundary_squared_failure(bad), 2);
  EXPECT_EQ(boundary_squared_failure(torus()), -1);
}

TEST(Sd011, IsACircle) {
  const auto& cx = complex_of(0, 1, 1);
  auto c = chain_complex(cx);
  ASSERT_EQ(c.size, (std::vector<int>{1, 1}));
  EXPECT_TRUE(c.boundary[1].zero());
  auto h = homology(c);
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h[0].betti, 1);
  EXPECT_EQ(h[1].betti, 1);
  EXPECT_TRUE(h[0].torsion.empty());
  EXPECT_TRUE(h[1].torsion.empty());
}

TEST(Sd, BoundarySquaredVanishes) {
  for (auto [chi, k, l] : {std::tuple{0, 1, 1}, {-1, 1, 2}, {-1, 2, 1}, {-2, 1, 1}}) {
    auto c = chain_complex_unchecked(complex_of(chi, k, l));
    EXPECT_EQ(boundary_squared_failure(c), -1) << chi << " " << k << " " << l;
  }
}

TEST(Sd, EulerCharacteristicAndCoefficientComparison) {
  for (auto [chi, k, l] : {std::tuple{-1, 1, 2}, {-1, 2, 1}, {-2, 1, 1}}) {
    auto c = chain_complex(complex_of(chi, k, l));
    auto q = homology(c, {Coefficients::rationals});
    auto z = homology(c);
    auto z2 = homology(c, {Coefficients::mod_p, 2});
    auto z3 = homology(c, {Coefficients::mod_p, 3});
    int alt = 0;
    for (std::size_t n = 0; n < q.size(); ++n) {
      alt += (n % 2 ? -1 : 1) * q[n].betti;
      EXPECT_EQ(z[n].betti, q[n].betti);
      EXPECT_GE(z2[n].betti, q[n].betti);
      EXPECT_GE(z3[n].betti, q[n].betti);
    }
    EXPECT_EQ(alt, c.euler_characteristic());
    // oriented cells come in pairs, so the complex is at least as large as one copy per type
    EXPECT_GE(q[0].betti, 1);
  }
}

TEST(Sd, DenseAndSparseRanksAgree) {
  auto c = chain_complex(complex_of(-1, 2, 1));
  for (int n = 1; n <= c.top(); ++n) {
    auto d = c.boundary[n].dense();
    EXPECT_EQ(invariant_factors(c.boundary[n]), invariant_factors(d, c.size[n]));
  }
}

TEST(Sd, RefusesUncertifiedComplexes) {
  const auto& cx = complex_of(-1, 1, 2);
  auto reports = verify_codim2(cx);
  reports[3].failures.push_back({0, 1, "routes disagree"});
  EXPECT_THROW(chain_complex(cx, reports), PreconditionError);
  reports.pop_back();
  EXPECT_THROW(chain_complex(cx, reports), PreconditionError);
  CellComplex broken = cx;
  broken.problems.push_back("face target was not enumerated");
  EXPECT_THROW(chain_complex(broken, verify_codim2(cx)), PreconditionError);
}
