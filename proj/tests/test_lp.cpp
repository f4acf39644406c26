#include "support/generators.hpp"

#include <zeroext/lp.hpp>

#include <gtest/gtest.h>

using namespace zeroext;

namespace {

// Minimum over basic feasible solutions, by trying every column subset of
// size rank and solving the square system exactly.
std::optional<Rational> vertex_minimum(const LinearProgram& lp) {
  const auto n = lp.variable_count(), m = lp.rows.size();
  std::vector<std::vector<Rational>> A(m, std::vector<Rational>(n));
  std::vector<Rational> b(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& [j, c] : lp.rows[i].coeffs) A[i][j] += c;
    b[i] = lp.rows[i].rhs;
  }
  std::optional<Rational> best;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < n; ++j)
      if (mask >> j & 1) cols.push_back(j);
    // Gaussian elimination on [A_cols | b]
    auto M = A;
    auto rhs = b;
    std::vector<std::size_t> pivot_row(cols.size(), m);
    std::size_t r = 0;
    bool singular = false;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      std::size_t piv = r;
      while (piv < m && sgn(M[piv][cols[c]]) == 0) ++piv;
      if (piv == m) {
        singular = true;
        break;
      }
      std::swap(M[piv], M[r]);
      std::swap(rhs[piv], rhs[r]);
      for (std::size_t i = 0; i < m; ++i) {
        if (i == r || sgn(M[i][cols[c]]) == 0) continue;
        const Rational f = M[i][cols[c]] / M[r][cols[c]];
        for (std::size_t j = 0; j < n; ++j) M[i][j] -= f * M[r][j];
        rhs[i] -= f * rhs[r];
      }
      pivot_row[c] = r++;
    }
    if (singular) continue;
    bool consistent = true;
    for (std::size_t i = r; i < m; ++i) consistent = consistent && sgn(rhs[i]) == 0;
    if (!consistent) continue;
    std::vector<Rational> x(n, 0);
    bool feasible = true;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      x[cols[c]] = rhs[pivot_row[c]] / M[pivot_row[c]][cols[c]];
      feasible = feasible && sgn(x[cols[c]]) >= 0;
    }
    if (!feasible) continue;
    Rational v = 0;
    for (std::size_t j = 0; j < n; ++j) v += lp.objective[j] * x[j];
    if (!best || v < *best) best = v;
  }
  return best;
}

void expect_feasible(const LinearProgram& lp, const LPResult& r) {
  ASSERT_EQ(r.status, LPResult::Status::optimal);
  Rational v = 0;
  for (std::size_t j = 0; j < lp.variable_count(); ++j) {
    EXPECT_GE(r.primal[j], 0);
    v += lp.objective[j] * r.primal[j];
  }
  EXPECT_EQ(Extended(v), r.value);
  for (const auto& row : lp.rows) {
    Rational s = 0;
    for (const auto& [j, c] : row.coeffs) s += c * r.primal[j];
    EXPECT_EQ(s, row.rhs);
  }
}

}  // namespace

TEST(Simplex, SingleEquality) {
  LinearProgram lp;
  auto x = lp.add_variable("x", 1);
  lp.add_row({{x, 1}}, 1);
  auto r = simplex_solve(lp);
  expect_feasible(lp, r);
  EXPECT_EQ(r.value, Extended(1));
}

TEST(Simplex, SumConstraint) {
  LinearProgram lp;
  auto x = lp.add_variable("x", 1), y = lp.add_variable("y", 1);
  lp.add_row({{x, 1}, {y, 1}}, 1);
  auto r = simplex_solve(lp);
  expect_feasible(lp, r);
  EXPECT_EQ(r.value, Extended(1));
}

TEST(Simplex, DegenerateCyclingExample) {
  // Beale's tableau: cycles under the textbook largest-coefficient rule
  LinearProgram lp;
  auto x1 = lp.add_variable("x1", 0), x2 = lp.add_variable("x2", 0), x3 = lp.add_variable("x3", 0);
  auto x4 = lp.add_variable("x4", Rational(-3, 4)), x5 = lp.add_variable("x5", 20);
  auto x6 = lp.add_variable("x6", Rational(-1, 2)), x7 = lp.add_variable("x7", 6);
  lp.add_row({{x4, Rational(1, 4)}, {x5, -8}, {x6, -1}, {x7, 9}, {x1, 1}}, 0);
  lp.add_row({{x4, Rational(1, 2)}, {x5, -12}, {x6, Rational(-1, 2)}, {x7, 3}, {x2, 1}}, 0);
  lp.add_row({{x6, 1}, {x3, 1}}, 1);
  auto r = simplex_solve(lp);
  expect_feasible(lp, r);
  // x4 = x6 = 1, x1 = 3/4
  EXPECT_EQ(r.value, Extended(Rational(-5, 4)));
  EXPECT_EQ(r.value, Extended(*vertex_minimum(lp)));
}

TEST(Simplex, InfeasibleAndRedundant) {
  LinearProgram bad;
  auto x = bad.add_variable("x", 1);
  bad.add_row({{x, 1}}, -1);
  EXPECT_EQ(simplex_solve(bad).status, LPResult::Status::infeasible);
  EXPECT_TRUE(simplex_solve(bad).value.is_infinite());

  LinearProgram twice;
  auto a = twice.add_variable("a", 2), b = twice.add_variable("b", 3);
  twice.add_row({{a, 1}, {b, 1}}, 2);
  twice.add_row({{a, 2}, {b, 2}}, 4);
  auto r = simplex_solve(twice);
  expect_feasible(twice, r);
  EXPECT_EQ(r.value, Extended(4));
}

TEST(Simplex, UnboundedThrows) {
  LinearProgram lp;
  auto x = lp.add_variable("x", -1), y = lp.add_variable("y", 0);
  lp.add_row({{x, 1}, {y, -1}}, 0);
  EXPECT_THROW(simplex_solve(lp), Unbounded);
}

TEST(Simplex, DumpFormat) {
  LinearProgram lp;
  auto x = lp.add_variable("x", Rational(1, 2));
  lp.add_row({{x, 3}}, 1);
  EXPECT_EQ(dump(lp), "min + 1/2 x\n + 3 x = 1\n");
}

TEST(Properties, SimplexMatchesVertexEnumeration) {
  gen::Rng rng(61);
  int optimal = 0;
  for (int round = 0; round < 300; ++round) {
    LinearProgram lp;
    const int n = gen::uniform_int(rng, 2, 6), m = gen::uniform_int(rng, 1, 3);
    for (int j = 0; j < n; ++j) {
      Rational c(gen::uniform_int(rng, -4, 4), gen::uniform_int(rng, 1, 3));
      c.canonicalize();
      lp.add_variable("v" + std::to_string(j), c);
    }
    // a bounding row keeps every LP bounded
    std::vector<std::pair<std::size_t, Rational>> sum;
    for (int j = 0; j < n; ++j) sum.emplace_back(j, 1);
    lp.add_row(sum, gen::uniform_int(rng, 1, 4));
    for (int i = 1; i < m; ++i) {
      std::vector<std::pair<std::size_t, Rational>> row;
      for (int j = 0; j < n; ++j)
        if (gen::coin(rng, 0.7)) row.emplace_back(j, Rational(gen::uniform_int(rng, -3, 3)));
      lp.add_row(row, gen::uniform_int(rng, -2, 3));
    }
    auto r = simplex_solve(lp);
    auto ref = vertex_minimum(lp);
    ASSERT_EQ(r.status == LPResult::Status::optimal, ref.has_value()) << dump(lp);
    if (ref) {
      ++optimal;
      expect_feasible(lp, r);
      ASSERT_EQ(r.value, Extended(*ref)) << dump(lp);
    }
  }
  EXPECT_GT(optimal, 100);
}
