#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace zeroext;
using fixtures::c4;
using fixtures::k3;
using fixtures::p3;

using Labels = std::vector<std::string>;

TEST(ValidateMetric, AcceptsPathAndUniform) {
  auto m = p3();
  EXPECT_EQ(m.size(), 3u);
  EXPECT_EQ(m(m.index("1"), m.index("3")), 2);
  auto u = k3();
  EXPECT_EQ(u(u.index("a"), u.index("c")), 1);
}

TEST(ValidateMetric, ReportsTriangleWitness) {
  try {
    fixtures::metric_from_rows({"1", "2", "3"}, {{0, 1, 3}, {1, 0, 1}, {3, 1, 0}});
    FAIL() << "expected a triangle violation";
  } catch (const AxiomViolation& e) {
    EXPECT_EQ(e.kind(), AxiomViolation::Kind::triangle);
    EXPECT_EQ(e.witness(), (Labels{"1", "2", "3"}));
  }
}

TEST(ValidateMetric, IdentityAndSymmetry) {
  EXPECT_THROW(fixtures::metric_from_rows({"a", "b"}, {{0, 0}, {0, 0}}), AxiomViolation);
  try {
    fixtures::metric_from_rows({"a", "b"}, {{0, 1}, {2, 0}});
    FAIL();
  } catch (const AxiomViolation& e) {
    EXPECT_EQ(e.kind(), AxiomViolation::Kind::symmetry);
  }
  EXPECT_THROW(fixtures::metric_from_rows({"a", "a"}, {{0, 1}, {1, 0}}), Error);
  EXPECT_THROW(fixtures::metric_from_rows({"a", "b"}, {{0, 1}}), Error);
}

TEST(Interval, Fixtures) {
  EXPECT_EQ(interval(p3(), "1", "3"), (Labels{"1", "2", "3"}));
  EXPECT_EQ(interval(k3(), "a", "b"), (Labels{"a", "b"}));
  EXPECT_EQ(interval(c4(), "a", "c"), (Labels{"a", "b", "c", "d"}));
  EXPECT_THROW(interval(p3(), "1", "9"), UnknownLabel);
}

TEST(Medians, Fixtures) {
  EXPECT_EQ(medians(p3(), "1", "2", "3"), (Labels{"2"}));
  EXPECT_TRUE(medians(k3(), "a", "b", "c").empty());
  EXPECT_EQ(medians(c4(), "a", "b", "c"), (Labels{"b"}));
}

TEST(Modularity, Fixtures) {
  EXPECT_TRUE(is_modular(p3()).modular);
  EXPECT_TRUE(is_modular(c4()).modular);
  auto v = is_modular(k3());
  ASSERT_FALSE(v.modular);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(zeroext::detail::to_labels(k3(), {(*v.witness)[0], (*v.witness)[1], (*v.witness)[2]}), (Labels{"a", "b", "c"}));
}

TEST(UnderlyingGraph, Fixtures) {
  auto g = underlying_graph(p3());
  ASSERT_EQ(g.edges().size(), 2u);
  EXPECT_TRUE(g.adjacent(0, 1));
  EXPECT_TRUE(g.adjacent(1, 2));
  EXPECT_FALSE(g.adjacent(0, 2));
  EXPECT_EQ(underlying_graph(k3()).edges().size(), 3u);
  auto h = underlying_graph(c4());
  EXPECT_EQ(h.edges().size(), 4u);
  EXPECT_FALSE(h.adjacent(h.index("a"), h.index("c")));
  EXPECT_FALSE(h.adjacent(h.index("b"), h.index("d")));
  for (const auto& e : h.edges()) EXPECT_EQ(e.w, 1);
}

TEST(Orbits, FourCycleHasTwoClasses) {
  auto g = underlying_graph(c4());
  auto o = orbits(g);
  EXPECT_TRUE(o.orbit_invariant);
  ASSERT_EQ(o.classes.size(), 2u);
  const auto ab = *g.edge_id(g.index("a"), g.index("b")), dc = *g.edge_id(g.index("d"), g.index("c"));
  const auto bc = *g.edge_id(g.index("b"), g.index("c")), ad = *g.edge_id(g.index("a"), g.index("d"));
  EXPECT_EQ(o.class_of[ab], o.class_of[dc]);
  EXPECT_EQ(o.class_of[bc], o.class_of[ad]);
  EXPECT_NE(o.class_of[ab], o.class_of[bc]);
}

TEST(Orbits, PathSingletonsAndUnequalWeights) {
  auto o = orbits(underlying_graph(p3()));
  EXPECT_EQ(o.classes.size(), 2u);
  EXPECT_TRUE(o.orbit_invariant);
  auto g = fixtures::graph({"a", "b", "c", "d"}, {{0, 1, 1}, {1, 2, 1}, {2, 3, 2}, {3, 0, 1}});
  EXPECT_FALSE(orbits(g).orbit_invariant);
}

TEST(Properties, IntervalsAndGraphRoundTrip) {
  gen::Rng rng(11);
  for (int round = 0; round < 40; ++round) {
    auto g = gen::random_modular(rng, static_cast<gen::Shape>(round % 3));
    const auto& m = g.metric();
    auto ref = oracle::floyd(g.size(), g.edges());
    for (Vertex x = 0; x < m.size(); ++x)
      for (Vertex y = 0; y < m.size(); ++y) {
        ASSERT_EQ(m(x, y), ref(x, y));
        auto I = interval(m, x, y);
        EXPECT_TRUE(std::count(I.begin(), I.end(), x) && std::count(I.begin(), I.end(), y));
        EXPECT_EQ(I, interval(m, y, x));
      }
    EXPECT_TRUE(is_modular(m).modular);
    auto h = underlying_graph(m);
    EXPECT_TRUE(orbits(h).orbit_invariant);
    EXPECT_EQ(h.edges().size(), g.edges().size());
    EXPECT_EQ(h.metric(), m);
  }
}

TEST(Properties, WeightedAndUnitGeodesicsAgree) {
  gen::Rng rng(12);
  for (int round = 0; round < 15; ++round) {
    auto g = gen::random_modular(rng, static_cast<gen::Shape>(round % 3));
    const auto n = g.size();
    if (n > 9) continue;
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b = 0; b < n; ++b)
        for (Vertex c = 0; c < n; ++c)
          for (Vertex d = 0; d < n; ++d) {
            const bool weighted = g.metric().shortest_subpath({a, b, c, d});
            const bool unit = g.d(a, b) + g.d(b, c) + g.d(c, d) == g.d(a, d);
            ASSERT_EQ(weighted, unit);
          }
  }
}
