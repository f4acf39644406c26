#pragma once

// Small named metrics, complexes and semilattices shared by the suites.

#include <zeroext/classify.hpp>
#include <zeroext/complex.hpp>
#include <zeroext/metric.hpp>
#include <zeroext/semilattice.hpp>

#include <string>
#include <utility>
#include <vector>

namespace fixtures {

using namespace zeroext;
using LabelPairs = std::vector<std::pair<std::string, std::string>>;

inline Metric metric_from_rows(std::vector<std::string> labels, const std::vector<std::vector<long>>& rows) {
  std::vector<std::vector<Rational>> m;
  for (const auto& r : rows) {
    m.emplace_back();
    for (auto x : r) m.back().emplace_back(x);
  }
  return validate_metric(std::move(labels), m);
}

inline WeightedGraph graph(std::vector<std::string> labels, const std::vector<std::tuple<int, int, Rational>>& edges) {
  std::vector<Edge> es;
  for (const auto& [u, v, w] : edges) es.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), w});
  return WeightedGraph::from_edges(std::move(labels), es);
}

/// Unit path 1 - 2 - ... - n, labelled "1".."n".
inline WeightedGraph path(int n) {
  std::vector<std::string> labels;
  std::vector<std::tuple<int, int, Rational>> edges;
  for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i + 1));
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1, 1);
  return graph(labels, edges);
}

inline Metric p3() { return path(3).metric(); }

inline Metric uniform(int k) {
  std::vector<std::string> labels;
  std::vector<std::vector<long>> rows(k, std::vector<long>(k, 1));
  for (int i = 0; i < k; ++i) {
    labels.push_back(std::string(1, static_cast<char>('a' + i)));
    rows[i][i] = 0;
  }
  return metric_from_rows(labels, rows);
}

inline Metric k3() { return uniform(3); }

inline Metric c4() {
  return metric_from_rows({"a", "b", "c", "d"}, {{0, 1, 2, 1}, {1, 0, 1, 2}, {2, 1, 0, 1}, {1, 2, 1, 0}});
}

inline LabelPairs c4f() { return {{"a", "c"}, {"b", "d"}}; }
inline LabelPairs c4f1() { return {{"a", "c"}}; }

/// Complex of a tractable metric with the order itself as relation.
inline ExtendedComplex complex_of(const Metric& m, const LabelPairs& F = {}) {
  auto c = classify(m, F);
  if (!c.tractable) throw Error("fixture is not tractable");
  return *c.complex;
}

/// 0 -> x -> 1, 0 -> y -> 1.
inline ExtendedComplex diamond(RelationKind kind = RelationKind::precedes) {
  auto g = graph({"0", "x", "y", "1"}, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {2, 3, 1}});
  return build_complex(g, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}, kind);
}

/// Chain 1 -> 2 -> ... -> n with unit weights.
inline ExtendedComplex chain(int n, RelationKind kind = RelationKind::precedes) {
  auto g = path(n);
  std::vector<Arc> arcs;
  for (const auto& e : g.edges()) arcs.emplace_back(e.u, e.v);
  return build_complex(g, arcs, kind);
}

/// Edge relation on a chain: p ⊑ q iff q ∈ {p, p+1}.
inline ExtendedComplex chain_edges(int n) {
  auto g = path(n);
  std::vector<Arc> arcs;
  for (const auto& e : g.edges()) arcs.emplace_back(e.u, e.v);
  Relation rel(n, 0);
  for (int i = 0; i < n; ++i) {
    rel(i, i) = 1;
    if (i + 1 < n) rel(i, i + 1) = 1;
  }
  return build_complex(g, arcs, rel);
}

/// Bottom s with atoms p and q, valuation = rank.
inline ValuatedSemilattice star() {
  Relation leq(3, 0);
  for (int i = 0; i < 3; ++i) leq(i, i) = 1;
  leq(0, 1) = leq(0, 2) = 1;
  return validate_valuated_semilattice({"s", "p", "q"}, leq, {0, 1, 1});
}

/// Bottom s with atoms of the given valuations.
inline ValuatedSemilattice star(const std::vector<Rational>& atoms) {
  const auto n = atoms.size() + 1;
  Relation leq(n, 0);
  std::vector<std::string> labels{"s"};
  std::vector<Rational> v{0};
  for (std::size_t i = 0; i < n; ++i) leq(i, i) = 1;
  for (std::size_t i = 1; i < n; ++i) {
    leq(0, i) = 1;
    labels.push_back("a" + std::to_string(i));
    v.push_back(atoms[i - 1]);
  }
  return validate_valuated_semilattice(labels, leq, v);
}

/// Chain with the given successive gaps.
inline ValuatedSemilattice chain_semilattice(const std::vector<Rational>& gaps) {
  const auto n = gaps.size() + 1;
  Relation leq(n, 0);
  std::vector<std::string> labels;
  std::vector<Rational> v;
  Rational acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back("c" + std::to_string(i));
    v.push_back(acc);
    if (i < gaps.size()) acc += gaps[i];
    for (std::size_t j = i; j < n; ++j) leq(i, j) = 1;
  }
  return validate_valuated_semilattice(labels, leq, v);
}

/// Rectangular grid rows x cols; row edges in column gap j weigh col_w[j],
/// column edges in row gap i weigh row_w[i]. Vertex (i,j) is "r<i>c<j>".
inline WeightedGraph grid(int rows, int cols, const std::vector<Rational>& row_w, const std::vector<Rational>& col_w) {
  std::vector<std::string> labels;
  std::vector<std::tuple<int, int, Rational>> edges;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) labels.push_back("r" + std::to_string(i) + "c" + std::to_string(j));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      if (j + 1 < cols) edges.emplace_back(i * cols + j, i * cols + j + 1, col_w[j]);
      if (i + 1 < rows) edges.emplace_back(i * cols + j, (i + 1) * cols + j, row_w[i]);
    }
  return graph(labels, edges);
}

}  // namespace fixtures
