#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <zeroext/solver.hpp>

#include <gtest/gtest.h>

#include <set>

using namespace zeroext;

namespace {

Instance on(const Metric& m, std::size_t n) {
  Instance inst;
  inst.metric = m;
  inst.n = n;
  return inst;
}

void anchor(Instance& inst, std::size_t var, const std::string& v, Rational w = 1) {
  auto x = inst.metric.index(v);
  inst.unary.push_back({UnaryTerm::Kind::anchor, var, x, x, w});
}

Assignment labels(const Instance& inst, std::initializer_list<const char*> ls) {
  Assignment x;
  for (auto l : ls) x.push_back(inst.metric.index(l));
  return x;
}

// chain 1-2-3, two variables joined by weight 1, x1 pulled to 1 and x2 to 3
Instance chain_fixture() {
  auto inst = on(fixtures::p3(), 2);
  inst.pairwise.push_back({0, 1, 1});
  anchor(inst, 0, "1");
  anchor(inst, 1, "3");
  return inst;
}

std::optional<Assignment> random_feasible(gen::Rng& rng, const Instance& inst) {
  Assignment x;
  for (std::size_t i = 0; i < inst.n; ++i) {
    std::vector<Vertex> ok;
    for (Vertex v = 0; v < inst.metric.size(); ++v)
      if (inst.unary_cost(i, v).is_finite()) ok.push_back(v);
    if (ok.empty()) return std::nullopt;
    x.push_back(ok[gen::uniform_int(rng, 0, static_cast<int>(ok.size()) - 1)]);
  }
  return x;
}

}  // namespace

TEST(Evaluate, Examples) {
  auto inst = on(fixtures::p3(), 2);
  inst.pairwise.push_back({0, 1, 1});
  EXPECT_EQ(evaluate(inst, labels(inst, {"1", "3"})), Extended(2));
  EXPECT_EQ(evaluate(inst, std::vector<std::string>{"1", "3"}), Extended(2));

  auto hard = on(fixtures::p3(), 1);
  hard.unary.push_back({UnaryTerm::Kind::hard_anchor, 0, hard.metric.index("2"), hard.metric.index("2"), 1});
  EXPECT_TRUE(evaluate(hard, labels(hard, {"1"})).is_infinite());
  EXPECT_EQ(evaluate(hard, labels(hard, {"2"})), Extended(0));

  auto c = on(fixtures::c4(), 1);
  const auto a = c.metric.index("a"), cc = c.metric.index("c");
  c.F = {{a, cc}};
  c.unary.push_back({UnaryTerm::Kind::pair, 0, a, cc, 1});
  EXPECT_EQ(evaluate(c, labels(c, {"b"})), Extended(1));
  EXPECT_EQ(evaluate(c, labels(c, {"c"})), Extended(0));

  EXPECT_THROW(evaluate(inst, std::vector<std::string>{"1", "9"}), UnknownLabel);
  EXPECT_THROW(evaluate(inst, Assignment{0}), Error);
}

TEST(Evaluate, MatchesTermwiseDefinition) {
  gen::Rng rng(81);
  for (int round = 0; round < 100; ++round) {
    auto [inst, cx] = gen::random_instance(rng);
    Assignment x;
    for (std::size_t i = 0; i < inst.n; ++i) x.push_back(gen::uniform_int(rng, 0, static_cast<int>(inst.metric.size()) - 1));
    ASSERT_EQ(evaluate(inst, x), oracle::objective(inst, x));
  }
}

TEST(InstanceValidation, RejectsBadTerms) {
  auto inst = on(fixtures::p3(), 2);
  inst.pairwise.push_back({1, 0, 1});
  EXPECT_THROW(inst.validate(), Error);
  inst.pairwise = {{0, 1, -1}};
  EXPECT_THROW(inst.validate(), Error);
  inst.pairwise = {};
  inst.unary.push_back({UnaryTerm::Kind::pair, 0, 0, 2, 1});
  EXPECT_THROW(inst.validate(), Error);
  inst.F = {{0, 2}};
  EXPECT_NO_THROW(inst.validate());
}

TEST(LocalMinimize, Examples) {
  auto cx = fixtures::chain(3);
  auto inst = on(fixtures::p3(), 1);
  anchor(inst, 0, "3");
  SolveOptions opt;
  auto r = local_minimize(inst, cx, labels(inst, {"1"}), Region::plus, opt);
  EXPECT_EQ(r.assignment, labels(inst, {"3"}));
  EXPECT_EQ(r.value, Extended(0));
  // at the top, L+ is a single point
  auto top = local_minimize(inst, cx, labels(inst, {"3"}), Region::plus, opt);
  EXPECT_EQ(top.assignment, labels(inst, {"3"}));
  EXPECT_EQ(region_domains(cx, Region::plus, labels(inst, {"3"})), (std::vector<std::vector<Vertex>>{{2}}));
  EXPECT_EQ(region_domains(cx, Region::box, labels(inst, {"1"}), labels(inst, {"2"})), (std::vector<std::vector<Vertex>>{{0, 1}}));
}

TEST(LocalMinimize, BlpAgreesWithBrute) {
  gen::Rng rng(82);
  int compared = 0;
  for (int round = 0; round < 100; ++round) {
    auto [inst, cx] = gen::random_instance(rng);
    auto x = random_feasible(rng, inst);
    if (!x) continue;
    SolveOptions blp, brute;
    brute.local = LocalMethod::brute;
    for (auto region : {Region::plus, Region::minus}) {
      auto a = local_minimize(inst, cx, *x, region, blp);
      auto b = local_minimize(inst, cx, *x, region, brute);
      ASSERT_EQ(a.value, b.value);
      ASSERT_EQ(a.assignment, b.assignment);
      ++compared;
    }
  }
  EXPECT_GT(compared, 150);
}

TEST(Dsda, ChainExamples) {
  auto cx = fixtures::chain(3);
  auto inst = on(fixtures::p3(), 1);
  anchor(inst, 0, "3");
  auto r = dsda(inst, cx, labels(inst, {"1"}));
  EXPECT_EQ(r.assignment, labels(inst, {"3"}));
  EXPECT_EQ(r.value, Extended(0));
  EXPECT_EQ(r.iterations, 2u);
  EXPECT_EQ(iteration_count_expected(cx, labels(inst, {"1"}), inst), 2u);

  auto done = dsda(inst, cx, labels(inst, {"3"}));
  EXPECT_EQ(done.iterations, 1u);
  EXPECT_EQ(iteration_count_expected(cx, labels(inst, {"3"}), inst), 1u);

  auto two = chain_fixture();
  auto rep = dsda(two, cx, labels(two, {"1", "1"}));
  EXPECT_EQ(rep.value, Extended(2));
  EXPECT_EQ(rep.value, brute_force_min(two).value);
  EXPECT_EQ(sda(two, cx, labels(two, {"1", "1"})).value, Extended(2));
}

TEST(Dsda, SquareWithDiagonal) {
  auto cx = fixtures::complex_of(fixtures::c4(), fixtures::c4f1());
  auto inst = on(fixtures::c4(), 2);
  inst.pairwise.push_back({0, 1, 1});
  anchor(inst, 0, "a");
  anchor(inst, 1, "c");
  auto start = *default_start(inst);
  auto r = dsda(inst, cx, start);
  EXPECT_EQ(r.value, brute_force_min(inst).value);
  EXPECT_EQ(r.value, Extended(2));
  EXPECT_EQ(r.iterations, iteration_count_expected(cx, start, inst));
}

TEST(Dsda, InfeasibleStart) {
  auto cx = fixtures::chain(3);
  auto inst = on(fixtures::p3(), 1);
  inst.unary.push_back({UnaryTerm::Kind::hard_anchor, 0, 1, 1, 1});
  EXPECT_THROW(dsda(inst, cx, {0}), InfeasibleStart);
  EXPECT_THROW(sda(inst, cx, {0}), InfeasibleStart);
  EXPECT_EQ(default_start(inst), (Assignment{1}));
  inst.unary.push_back({UnaryTerm::Kind::hard_anchor, 0, 2, 2, 1});
  EXPECT_FALSE(default_start(inst));
}

TEST(Sda, EdgeRelationTakesUnitSteps) {
  auto cx = fixtures::chain_edges(3);
  auto inst = on(fixtures::p3(), 1);
  anchor(inst, 0, "3");
  auto r = sda(inst, cx, labels(inst, {"1"}));
  EXPECT_EQ(r.assignment, labels(inst, {"3"}));
  EXPECT_EQ(r.iterations, 3u);
  ASSERT_EQ(r.trace.size(), 3u);
  EXPECT_EQ(r.trace[0].next, labels(inst, {"2"}));
  // the count bound also holds here: Δd(1,3) = 2 under the edge relation
  EXPECT_EQ(dsda(inst, cx, labels(inst, {"1"})).iterations, 3u);
  EXPECT_EQ(iteration_count_expected(cx, labels(inst, {"1"}), inst), 3u);
}

TEST(Sda, ConstantFunctionStaysPut) {
  auto cx = fixtures::diamond();
  Instance inst;
  inst.metric = cx.graph().metric();
  inst.n = 1;
  auto r = sda(inst, cx, {1});
  EXPECT_EQ(r.assignment, (Assignment{1}));
  EXPECT_EQ(r.iterations, 1u);
  EXPECT_EQ(r.trace.size(), 1u);
}

TEST(BruteForce, Examples) {
  auto inst = on(fixtures::p3(), 2);
  inst.pairwise.push_back({0, 1, 1});
  auto r = brute_force_min(inst);
  EXPECT_EQ(r.value, Extended(0));
  EXPECT_EQ(r.assignment, (Assignment{0, 0}));

  auto chain = chain_fixture();
  EXPECT_EQ(brute_force_min(chain).value, Extended(2));
  EXPECT_EQ(brute_force_min(chain).assignment, (Assignment{0, 0}));

  auto bad = on(fixtures::p3(), 1);
  bad.unary.push_back({UnaryTerm::Kind::hard_anchor, 0, 0, 0, 1});
  bad.unary.push_back({UnaryTerm::Kind::hard_anchor, 0, 1, 1, 1});
  auto none = brute_force_min(bad);
  EXPECT_TRUE(none.value.is_infinite());
  EXPECT_TRUE(none.assignment.empty());

  auto big = on(fixtures::p3(), 3);
  EXPECT_THROW(brute_force_min(big, 10), DomainTooLarge);
}

TEST(IterationCount, ProductIsMaxOverCoordinates) {
  auto cx = fixtures::chain(4);
  auto inst = on(fixtures::path(4).metric(), 2);
  anchor(inst, 0, "4");
  anchor(inst, 1, "2");
  // Δd on a chain with full ⊑ is 1 between distinct points
  EXPECT_EQ(iteration_count_expected(cx, {0, 0}, inst), 2u);
  auto edges = fixtures::chain_edges(4);
  EXPECT_EQ(iteration_count_expected(edges, {0, 0}, inst), 1u + std::max(edges.delta_distance(0, 3), edges.delta_distance(0, 1)));
  EXPECT_EQ(dsda(inst, edges, {0, 0}).iterations, 4u);
}

TEST(IterationCount, ProjectionsLoseJointStructure) {
  // minimisers form the diagonal, so every projection is the whole chain
  auto cx = fixtures::chain(3);
  auto inst = on(fixtures::p3(), 2);
  inst.pairwise.push_back({0, 1, 1});
  const Assignment start{0, 2};
  EXPECT_EQ(optimal_projections(inst), (std::vector<std::vector<Vertex>>{{0, 1, 2}, {0, 1, 2}}));
  EXPECT_EQ(iteration_count_expected(cx, start, inst), 1u);
  EXPECT_EQ(iteration_count_joint(cx, start, inst), 2u);
  EXPECT_EQ(dsda(inst, cx, start).iterations, 2u);
}

TEST(Properties, DescentMethodsAgreeWithBruteForce) {
  gen::Rng rng(83);
  int instances = 0;
  for (int round = 0; round < 150; ++round) {
    auto [inst, cx] = gen::random_instance(rng);
    const auto best = oracle::instance_minimum(inst);
    auto start = default_start(inst);
    if (!start) {
      EXPECT_TRUE(best.is_infinite());
      continue;
    }
    ++instances;
    ASSERT_EQ(brute_force_min(inst).value, best);
    std::set<Assignment> starts{*start};
    for (int k = 0; k < 6 && starts.size() < 3; ++k) starts.insert(*random_feasible(rng, inst));
    for (const auto& s : starts) {
      auto d = dsda(inst, cx, s);
      auto t = sda(inst, cx, s);
      ASSERT_EQ(d.value, best);
      ASSERT_EQ(t.value, best);
      ASSERT_EQ(evaluate(inst, d.assignment), d.value);
      ASSERT_EQ(d.iterations, iteration_count_joint(cx, s, inst));
      ASSERT_GE(d.iterations, iteration_count_expected(cx, s, inst));
      if (inst.n == 1 || s == *start) {
        ASSERT_EQ(d.iterations, iteration_count_expected(cx, s, inst));
      }
      // iterates form a ◇-path with strictly decreasing values
      Assignment prev = s;
      Extended prev_value = evaluate(inst, s);
      for (std::size_t k = 0; k + 1 < d.trace.size(); ++k) {
        const auto& next = d.trace[k].next;
        for (std::size_t i = 0; i < inst.n; ++i) ASSERT_LE(cx.delta_distance(prev[i], next[i]), 1);
        ASSERT_LT(d.trace[k].value, prev_value);
        prev = next;
        prev_value = d.trace[k].value;
      }
      ASSERT_EQ(d.trace.back().value, d.value);
    }
  }
  EXPECT_GT(instances, 100);
}

TEST(Properties, LocalMinimaAreGlobal) {
  gen::Rng rng(84);
  for (int round = 0; round < 100; ++round) {
    auto [inst, cx] = gen::random_instance(rng);
    inst.n = 1;
    std::erase_if(inst.unary, [](const UnaryTerm& t) { return t.var != 0; });
    inst.pairwise.clear();
    auto start = default_start(inst);
    if (!start) continue;
    auto r = sda(inst, cx, *start);
    for (Vertex v = 0; v < inst.metric.size(); ++v) ASSERT_FALSE(evaluate(inst, Assignment{v}) < r.value);
  }
}
