#pragma once

// Finite metric spaces with exact rational distances, metric intervals and
// medians, the minimal graph H realising a metric, and edge orbits.

#include <zeroext/errors.hpp>
#include <zeroext/rational.hpp>
#include <zeroext/table.hpp>

#include <algorithm>
#include <array>
#include <deque>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace zeroext {

class Metric {
 public:
  Metric() = default;

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(Vertex v) const { return labels_.at(v); }

  std::optional<Vertex> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  Vertex index(std::string_view label) const {
    auto v = find(label);
    if (!v) throw UnknownLabel(std::string(label));
    return *v;
  }

  const Rational& operator()(Vertex x, Vertex y) const { return dist_(x, y); }
  const SquareTable<Rational>& table() const { return dist_; }

  /// True iff (seq[0], ..., seq[k]) is a shortest subpath:
  /// mu(seq[0], seq[k]) equals the sum of consecutive distances.
  bool shortest_subpath(std::initializer_list<Vertex> seq) const {
    return shortest_subpath(std::vector<Vertex>(seq));
  }
  bool shortest_subpath(const std::vector<Vertex>& seq) const {
    if (seq.size() < 2) return true;
    Rational total = 0;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) total += dist_(seq[i], seq[i + 1]);
    return total == dist_(seq.front(), seq.back());
  }

  friend bool operator==(const Metric& a, const Metric& b) { return a.labels_ == b.labels_ && a.dist_ == b.dist_; }

  /// Builds a metric without checking the axioms. Only for callers that
  /// obtained the table from a shortest-path computation.
  static Metric unchecked(std::vector<std::string> labels, SquareTable<Rational> dist) {
    Metric m;
    m.labels_ = std::move(labels);
    m.dist_ = std::move(dist);
    for (Vertex i = 0; i < m.labels_.size(); ++i) m.index_.emplace(m.labels_[i], i);
    return m;
  }

 private:
  std::vector<std::string> labels_;
  SquareTable<Rational> dist_;
  std::unordered_map<std::string, Vertex> index_;
};

/// Checks label uniqueness and the three metric axioms; throws AxiomViolation
/// with the first offending pair/triple (identity, then symmetry, then
/// triangle, each scanned in label order).
inline Metric validate_metric(std::vector<std::string> labels, const std::vector<std::vector<Rational>>& matrix) {
  const std::size_t n = labels.size();
  if (matrix.size() != n) throw Error("distance matrix has " + std::to_string(matrix.size()) + " rows, expected " + std::to_string(n));
  for (const auto& row : matrix)
    if (row.size() != n) throw Error("distance matrix is not square");
  {
    auto sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end()) throw Error("duplicate label '" + *dup + "'");
  }
  using K = AxiomViolation::Kind;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if ((x == y) != (matrix[x][y] == 0)) throw AxiomViolation(K::identity, {labels[x], labels[y]});
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      if (matrix[x][y] != matrix[y][x]) throw AxiomViolation(K::symmetry, {labels[x], labels[y]});
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        if (matrix[x][y] + matrix[y][z] < matrix[x][z]) throw AxiomViolation(K::triangle, {labels[x], labels[y], labels[z]});
  SquareTable<Rational> dist(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) dist(x, y) = matrix[x][y];
  return Metric::unchecked(std::move(labels), std::move(dist));
}

/// I(x,y) = { z : mu(x,z) + mu(z,y) = mu(x,y) }, in label order.
inline std::vector<Vertex> interval(const Metric& m, Vertex x, Vertex y) {
  std::vector<Vertex> out;
  for (Vertex z = 0; z < m.size(); ++z)
    if (m(x, z) + m(z, y) == m(x, y)) out.push_back(z);
  return out;
}

inline bool in_interval(const Metric& m, Vertex x, Vertex z, Vertex y) { return m(x, z) + m(z, y) == m(x, y); }

inline std::vector<Vertex> medians(const Metric& m, Vertex x, Vertex y, Vertex z) {
  std::vector<Vertex> out;
  for (Vertex u = 0; u < m.size(); ++u)
    if (in_interval(m, x, u, y) && in_interval(m, y, u, z) && in_interval(m, x, u, z)) out.push_back(u);
  return out;
}

namespace detail {
inline std::vector<std::string> to_labels(const Metric& m, const std::vector<Vertex>& vs) {
  std::vector<std::string> out;
  out.reserve(vs.size());
  for (auto v : vs) out.push_back(m.label(v));
  return out;
}
}  // namespace detail

inline std::vector<std::string> interval(const Metric& m, std::string_view x, std::string_view y) {
  return detail::to_labels(m, interval(m, m.index(x), m.index(y)));
}

inline std::vector<std::string> medians(const Metric& m, std::string_view x, std::string_view y, std::string_view z) {
  return detail::to_labels(m, medians(m, m.index(x), m.index(y), m.index(z)));
}

struct ModularityVerdict {
  bool modular = true;
  std::optional<std::array<Vertex, 3>> witness;  // a median-free triple
};

/// Brute force over all triples x < y < z.
inline ModularityVerdict is_modular(const Metric& m) {
  const auto n = m.size();
  for (Vertex x = 0; x < n; ++x)
    for (Vertex y = x + 1; y < n; ++y)
      for (Vertex z = y + 1; z < n; ++z) {
        bool found = false;
        for (Vertex u = 0; u < n && !found; ++u)
          found = in_interval(m, x, u, y) && in_interval(m, y, u, z) && in_interval(m, x, u, z);
        if (!found) return {false, std::array<Vertex, 3>{x, y, z}};
      }
  return {};
}

struct Edge {
  Vertex u = 0;  // u < v
  Vertex v = 0;
  Rational w;
};

/// A 4-cycle (x1,x2,x3,x4): edges x1x2, x2x3, x3x4, x4x1.
using Cycle4 = std::array<Vertex, 4>;

/// Connected undirected graph with positive rational edge weights, together
/// with its unit-length distance d and weighted distance mu.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  static WeightedGraph from_edges(std::vector<std::string> labels, std::vector<Edge> edges) {
    WeightedGraph g;
    const auto n = labels.size();
    g.adj_.assign(n, {});
    g.edge_id_ = SquareTable<int>(n, -1);
    for (auto& e : edges) {
      if (e.u == e.v || e.u >= n || e.v >= n) throw Error("invalid edge");
      if (e.u > e.v) std::swap(e.u, e.v);
      if (e.w <= 0) throw Error("edge weights must be positive");
      if (g.edge_id_(e.u, e.v) >= 0) throw Error("duplicate edge");
      g.edge_id_(e.u, e.v) = g.edge_id_(e.v, e.u) = static_cast<int>(g.edges_.size());
      g.edges_.push_back(e);
      g.adj_[e.u].push_back(e.v);
      g.adj_[e.v].push_back(e.u);
    }
    for (auto& a : g.adj_) std::sort(a.begin(), a.end());
    g.compute_distances(std::move(labels));
    return g;
  }

  std::size_t size() const { return adj_.size(); }
  const std::vector<std::string>& labels() const { return metric_.labels(); }
  const std::string& label(Vertex v) const { return metric_.label(v); }
  Vertex index(std::string_view label) const { return metric_.index(label); }

  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_[v]; }
  bool adjacent(Vertex a, Vertex b) const { return edge_id_(a, b) >= 0; }
  std::optional<std::size_t> edge_id(Vertex a, Vertex b) const {
    int id = edge_id_(a, b);
    if (id < 0) return std::nullopt;
    return static_cast<std::size_t>(id);
  }

  int d(Vertex a, Vertex b) const { return d_(a, b); }
  const Rational& mu(Vertex a, Vertex b) const { return metric_(a, b); }
  /// The weighted path metric of the graph.
  const Metric& metric() const { return metric_; }

  /// Every 4-cycle exactly once, as (a,b,c,d) with a the smallest vertex,
  /// c opposite a and b < d.
  std::vector<Cycle4> four_cycles() const {
    std::vector<Cycle4> out;
    for (Vertex a = 0; a < size(); ++a) {
      const auto& na = adj_[a];
      for (std::size_t i = 0; i < na.size(); ++i)
        for (std::size_t j = i + 1; j < na.size(); ++j) {
          Vertex b = na[i], d = na[j];
          if (b < a || d < a) continue;
          for (Vertex c : adj_[b])
            if (c > a && c != d && adjacent(c, d)) out.push_back({a, b, c, d});
        }
    }
    return out;
  }

 private:
  void compute_distances(std::vector<std::string> labels) {
    const auto n = size();
    d_ = SquareTable<int>(n, -1);
    for (Vertex s = 0; s < n; ++s) {
      std::deque<Vertex> queue{s};
      d_(s, s) = 0;
      while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop_front();
        for (Vertex v : adj_[u])
          if (d_(s, v) < 0) {
            d_(s, v) = d_(s, u) + 1;
            queue.push_back(v);
          }
      }
      for (Vertex v = 0; v < n; ++v)
        if (d_(s, v) < 0) throw Error("graph is not connected");
    }
    // Dijkstra with a linear scan; graphs here are desk-sized.
    SquareTable<Rational> mu(n);
    for (Vertex s = 0; s < n; ++s) {
      std::vector<char> done(n, 0), reached(n, 0);
      std::vector<Rational> dist(n);
      reached[s] = 1;
      for (std::size_t round = 0; round < n; ++round) {
        std::optional<Vertex> best;
        for (Vertex v = 0; v < n; ++v)
          if (reached[v] && !done[v] && (!best || dist[v] < dist[*best])) best = v;
        if (!best) break;
        Vertex u = *best;
        done[u] = 1;
        for (Vertex v : adj_[u]) {
          Rational cand = dist[u] + edges_[edge_id_(u, v)].w;
          if (!reached[v] || cand < dist[v]) {
            dist[v] = cand;
            reached[v] = 1;
          }
        }
      }
      for (Vertex v = 0; v < n; ++v) mu(s, v) = dist[v];
    }
    metric_ = Metric::unchecked(std::move(labels), std::move(mu));
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adj_;
  SquareTable<int> edge_id_;
  SquareTable<int> d_;
  Metric metric_;
};

/// H_mu: xy is an edge iff no third point lies strictly between x and y.
inline WeightedGraph underlying_graph(const Metric& m) {
  const auto n = m.size();
  std::vector<Edge> edges;
  for (Vertex x = 0; x < n; ++x)
    for (Vertex y = x + 1; y < n; ++y) {
      bool minimal = true;
      for (Vertex z = 0; z < n && minimal; ++z)
        if (z != x && z != y && m(x, z) + m(z, y) == m(x, y)) minimal = false;
      if (minimal) edges.push_back({x, y, m(x, y)});
    }
  WeightedGraph g;
  try {
    g = WeightedGraph::from_edges(m.labels(), std::move(edges));
  } catch (const Error& e) {
    throw PathMetricMismatch(std::string("minimal graph rejected: ") + e.what());
  }
  if (!(g.metric() == m)) throw PathMetricMismatch("path metric of the minimal graph differs from the input metric");
  return g;
}

struct OrbitPartition {
  std::vector<std::vector<std::size_t>> classes;  // edge ids, each class sorted, classes ordered by first edge
  std::vector<std::size_t> class_of;              // edge id -> class index
  bool orbit_invariant = true;
};

/// Finest partition of the edges in which opposite sides of every 4-cycle
/// share a class.
inline OrbitPartition orbits(const WeightedGraph& g) {
  const auto m = g.edges().size();
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  for (const auto& c : g.four_cycles()) {
    unite(*g.edge_id(c[0], c[1]), *g.edge_id(c[2], c[3]));
    unite(*g.edge_id(c[1], c[2]), *g.edge_id(c[3], c[0]));
  }
  OrbitPartition out;
  out.class_of.assign(m, 0);
  std::unordered_map<std::size_t, std::size_t> root_to_class;
  for (std::size_t e = 0; e < m; ++e) {
    auto r = find(e);
    auto [it, inserted] = root_to_class.emplace(r, out.classes.size());
    if (inserted) out.classes.emplace_back();
    out.classes[it->second].push_back(e);
    out.class_of[e] = it->second;
  }
  for (const auto& cls : out.classes)
    for (auto e : cls)
      if (g.edges()[e].w != g.edges()[cls.front()].w) out.orbit_invariant = false;
  return out;
}

}  // namespace zeroext
