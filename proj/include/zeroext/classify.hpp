#pragma once

// Tractability classification: admissible orientations of (H, F) found by a
// parity union-find, and hardness certificates as ≈-paths between a directed
// pair and its reversal.

#include <zeroext/complex.hpp>
#include <zeroext/metric.hpp>

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace zeroext {

using VertexPair = std::pair<Vertex, Vertex>;

/// Converts label pairs to sorted, validated index pairs.
inline std::vector<VertexPair> resolve_pairs(const WeightedGraph& g,
                                             const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<VertexPair> out;
  for (const auto& [a, b] : pairs) out.emplace_back(g.index(a), g.index(b));
  return out;
}

namespace detail {
inline std::vector<VertexPair> normalise_pairs(std::vector<VertexPair> F, std::size_t n) {
  for (auto& [a, b] : F) {
    if (a >= n || b >= n) throw Error("pair vertex out of range");
    if (a == b) throw Error("pair with identical endpoints");
    if (a > b) std::swap(a, b);
  }
  auto sorted = F;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw Error("duplicate pair");
  return F;
}
}  // namespace detail

/// Directions for every edge of H and every pair of F.
struct Orientation {
  std::vector<VertexPair> edge_arcs;  // indexed by edge id, (tail, head)
  std::vector<VertexPair> pair_arcs;  // in the order F was given, (tail, head)

  bool directed(Vertex tail, Vertex head) const {
    for (const auto& a : edge_arcs)
      if (a == VertexPair{tail, head}) return true;
    for (const auto& a : pair_arcs)
      if (a == VertexPair{tail, head}) return true;
    return false;
  }
};

struct ConstraintWitness {
  enum class Kind { four_cycle, shortest_path };
  Kind kind = Kind::four_cycle;
  Cycle4 cycle{};            // four_cycle: opposite sides (c0,c1) and (c3,c2) agree
  Vertex x = 0, y = 0;       // shortest_path: pair x->y ...
  Vertex u = 0, v = 0;       // ... forces edge u->v
};

/// var(a) XOR var(b) == parity, where var(e) = 0 means e points from its
/// lower-index endpoint to the higher one.
struct ParityConstraint {
  std::size_t a = 0, b = 0;
  bool parity = false;
  ConstraintWitness witness;
};

struct ConflictCore {
  std::vector<ParityConstraint> cycle;  // odd cycle of constraints
};

/// The parity system of (H, F): one variable per element of E ∪ F.
class OrientationSystem {
 public:
  OrientationSystem(const WeightedGraph& g, std::vector<VertexPair> F) : g_(&g), F_(detail::normalise_pairs(std::move(F), g.size())) {
    for (const auto& e : g.edges()) add_element(e.u, e.v);
    for (const auto& [a, b] : F_) add_element(a, b);
    for (const auto& c : g.four_cycles()) {
      // (c0,c1,c2,c3): c0->c1 iff c3->c2, and c1->c2 iff c0->c3
      add_cycle_constraint({c[0], c[1], c[2], c[3]});
      add_cycle_constraint({c[1], c[2], c[3], c[0]});
    }
    for (const auto& [x, y] : F_) {
      const auto f = element_of(x, y);
      for (const auto& e : g.edges())
        for (auto [u, v] : {VertexPair{e.u, e.v}, VertexPair{e.v, e.u}}) {
          if (element_of(u, v) == f) continue;
          if (g.d(x, u) + 1 + g.d(v, y) == g.d(x, y))
            constraints_.push_back({f, element_of(u, v), sign(x, y) != sign(u, v),
                                    {ConstraintWitness::Kind::shortest_path, {}, x, y, u, v}});
        }
    }
  }

  std::size_t element_count() const { return elements_.size(); }
  const VertexPair& element(std::size_t i) const { return elements_[i]; }
  std::size_t element_of(Vertex a, Vertex b) const { return index_.at({std::min(a, b), std::max(a, b)}); }
  const std::vector<ParityConstraint>& constraints() const { return constraints_; }
  const std::vector<VertexPair>& pairs() const { return F_; }

  /// 0 if tail < head, 1 otherwise: the variable value meaning tail -> head.
  static bool sign(Vertex tail, Vertex head) { return tail > head; }

  /// Solves the system. Free classes take the value of their first element
  /// (in element order) set to 0, i.e. tail = lower-index endpoint.
  std::variant<Orientation, ConflictCore> solve() const {
    const auto k = element_count();
    std::vector<std::size_t> parent(k);
    std::vector<char> rel(k, 0);  // parity to parent
    for (std::size_t i = 0; i < k; ++i) parent[i] = i;
    std::function<std::pair<std::size_t, bool>(std::size_t)> find = [&](std::size_t x) -> std::pair<std::size_t, bool> {
      if (parent[x] == x) return {x, false};
      auto [root, p] = find(parent[x]);
      parent[x] = root;
      rel[x] = static_cast<char>(rel[x] ^ p);
      return {root, rel[x] != 0};
    };
    bool conflict = false;
    for (const auto& c : constraints_) {
      auto [ra, pa] = find(c.a);
      auto [rb, pb] = find(c.b);
      if (ra == rb) {
        if ((pa ^ pb) != c.parity) conflict = true;
        continue;
      }
      // the smaller root stays root so that roots are first elements
      if (ra > rb) std::swap(ra, rb);
      parent[rb] = ra;
      rel[rb] = static_cast<char>(pa ^ pb ^ c.parity);
    }
    if (conflict) return shortest_conflict();
    Orientation o;
    std::vector<char> value(k);
    for (std::size_t i = 0; i < k; ++i) value[i] = find(i).second;
    auto arc = [&](std::size_t i) {
      auto [lo, hi] = elements_[i];
      return value[i] ? VertexPair{hi, lo} : VertexPair{lo, hi};
    };
    for (std::size_t e = 0; e < g_->edges().size(); ++e) o.edge_arcs.push_back(arc(e));
    for (const auto& [a, b] : F_) o.pair_arcs.push_back(arc(element_of(a, b)));
    return o;
  }

 private:
  void add_element(Vertex a, Vertex b) {
    VertexPair key{std::min(a, b), std::max(a, b)};
    if (index_.count(key)) return;
    index_.emplace(key, elements_.size());
    elements_.push_back(key);
  }

  void add_cycle_constraint(Cycle4 c) {
    auto e1 = element_of(c[0], c[1]);
    auto e2 = element_of(c[3], c[2]);
    constraints_.push_back({e1, e2, sign(c[0], c[1]) != sign(c[3], c[2]), {ConstraintWitness::Kind::four_cycle, c, 0, 0, 0, 0}});
  }

  /// Shortest odd cycle in the signed constraint graph, by BFS over
  /// (element, parity) states from every element.
  ConflictCore shortest_conflict() const {
    const auto k = element_count();
    std::vector<std::vector<std::size_t>> incident(k);
    for (std::size_t i = 0; i < constraints_.size(); ++i) {
      incident[constraints_[i].a].push_back(i);
      if (constraints_[i].b != constraints_[i].a) incident[constraints_[i].b].push_back(i);
    }
    std::optional<std::vector<std::size_t>> best;
    for (std::size_t s = 0; s < k; ++s) {
      const std::size_t none = static_cast<std::size_t>(-1);
      std::vector<std::size_t> dist(2 * k, none), via(2 * k, none), prev(2 * k, none);
      std::deque<std::size_t> queue{2 * s};
      dist[2 * s] = 0;
      while (!queue.empty() && dist[2 * s + 1] == none) {
        auto state = queue.front();
        queue.pop_front();
        auto x = state / 2;
        bool px = state % 2;
        for (auto ci : incident[x]) {
          const auto& c = constraints_[ci];
          auto y = c.a == x ? c.b : c.a;
          auto next = 2 * y + (px ^ c.parity);
          if (dist[next] != none) continue;
          dist[next] = dist[state] + 1;
          via[next] = ci;
          prev[next] = state;
          queue.push_back(next);
        }
      }
      if (dist[2 * s + 1] == none) continue;
      if (best && best->size() <= dist[2 * s + 1]) continue;
      std::vector<std::size_t> path;
      for (auto st = 2 * s + 1; st != 2 * s; st = prev[st]) path.push_back(via[st]);
      std::reverse(path.begin(), path.end());
      best = path;
    }
    if (!best) throw InternalInconsistency("parity conflict detected but no odd cycle found");
    ConflictCore core;
    for (auto ci : *best) core.cycle.push_back(constraints_[ci]);
    return core;
  }

  const WeightedGraph* g_;
  std::vector<VertexPair> F_;
  std::vector<VertexPair> elements_;
  std::map<VertexPair, std::size_t> index_;
  std::vector<ParityConstraint> constraints_;
};

inline std::variant<Orientation, ConflictCore> admissible_orientation(const WeightedGraph& g, std::vector<VertexPair> F) {
  return OrientationSystem(g, std::move(F)).solve();
}

/// Re-checks both admissibility families by enumeration. Returns a
/// description of the first failure.
inline std::optional<std::string> verify_orientation(const WeightedGraph& g, const std::vector<VertexPair>& F,
                                                     const Orientation& o) {
  if (o.edge_arcs.size() != g.edges().size() || o.pair_arcs.size() != F.size()) return "orientation size mismatch";
  SquareTable<char> dir(g.size(), 0);
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    auto [t, h] = o.edge_arcs[e];
    const auto& edge = g.edges()[e];
    if (!((t == edge.u && h == edge.v) || (t == edge.v && h == edge.u))) return "arc does not match its edge";
    dir(t, h) = 1;
  }
  for (std::size_t i = 0; i < F.size(); ++i) {
    auto [t, h] = o.pair_arcs[i];
    auto [a, b] = F[i];
    if (!((t == a && h == b) || (t == b && h == a))) return "arc does not match its pair";
    if (g.adjacent(t, h) && !dir(t, h)) return "pair and edge disagree on " + g.label(t) + "," + g.label(h);
  }
  for (const auto& c : g.four_cycles())
    for (int r = 0; r < 4; ++r) {
      Vertex x1 = c[r], x2 = c[(r + 1) % 4], x3 = c[(r + 2) % 4], x4 = c[(r + 3) % 4];
      if (dir(x1, x2) && !dir(x4, x3))
        return "4-cycle " + g.label(x1) + "," + g.label(x2) + "," + g.label(x3) + "," + g.label(x4) + " violated";
    }
  for (const auto& [x, y] : o.pair_arcs)
    for (Vertex u = 0; u < g.size(); ++u)
      for (Vertex v : g.neighbors(u))
        if (g.d(x, u) + 1 + g.d(v, y) == g.d(x, y) && !dir(u, v))
          return "edge " + g.label(u) + "->" + g.label(v) + " against pair " + g.label(x) + "->" + g.label(y);
  return std::nullopt;
}

/// A directed pair (a,b) of E⃗ ∪ F⃗.
using Tuple = VertexPair;

struct CertificateStep {
  enum class Relation { parallel, lhd, rhd };  // from∥to, from◁to, to◁from
  Tuple from, to;
  Relation relation = Relation::parallel;
  std::vector<Vertex> witness;  // parallel: 4-cycle (a,b,d,c); ◁: shortest subpath (c,a,b,d)
};

struct HardnessCertificate {
  enum class Kind { not_modular, not_orientable, not_f_orientable };
  Kind kind = Kind::not_modular;
  std::array<Vertex, 3> triple{};      // not_modular
  std::vector<CertificateStep> steps;  // otherwise: ≈-path from p to its reversal
};

/// The graph (E⃗ ∪ F⃗, ≈), built by brute force.
class ApproxGraph {
 public:
  ApproxGraph(const WeightedGraph& g, const std::vector<VertexPair>& F) {
    for (const auto& e : g.edges()) {
      add_node({e.u, e.v}, true);
      add_node({e.v, e.u}, true);
    }
    for (auto [a, b] : F) {
      add_node({a, b}, false);
      add_node({b, a}, false);
    }
    const auto& m = g.metric();
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      for (std::size_t j = 0; j < nodes_.size(); ++j) {
        if (i == j) continue;
        auto [a, b] = nodes_[i];
        auto [c, d] = nodes_[j];
        if (in_e_[i] && in_e_[j] && i < j) {
          std::set<Vertex> distinct{a, b, c, d};
          if (distinct.size() == 4 && g.adjacent(a, b) && g.adjacent(b, d) && g.adjacent(d, c) && g.adjacent(c, a)) {
            adj_[i].push_back({j, CertificateStep::Relation::parallel, {a, b, d, c}});
            adj_[j].push_back({i, CertificateStep::Relation::parallel, {c, d, b, a}});
          }
        }
        if (in_e_[i] && in_f_[j] && m.shortest_subpath({c, a, b, d})) {
          adj_[i].push_back({j, CertificateStep::Relation::lhd, {c, a, b, d}});
          adj_[j].push_back({i, CertificateStep::Relation::rhd, {c, a, b, d}});
        }
      }
  }

  std::size_t size() const { return nodes_.size(); }
  const Tuple& node(std::size_t i) const { return nodes_[i]; }
  std::optional<std::size_t> find(Tuple t) const {
    auto it = index_.find(t);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  struct Arc {
    std::size_t to;
    CertificateStep::Relation relation;
    std::vector<Vertex> witness;
  };
  const std::vector<Arc>& arcs(std::size_t i) const { return adj_[i]; }

  /// Undirected ≈ adjacency as a set of node pairs (i < j).
  std::set<std::pair<std::size_t, std::size_t>> edge_set() const {
    std::set<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < size(); ++i)
      for (const auto& a : adj_[i]) out.insert({std::min(i, a.to), std::max(i, a.to)});
    return out;
  }

  /// BFS path from t to its reversal, as certificate steps.
  std::optional<std::vector<CertificateStep>> path_to_reversal(Tuple t) const {
    auto s = find(t), goal = find({t.second, t.first});
    if (!s || !goal) return std::nullopt;
    const std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> prev(size(), none), via(size(), none);
    prev[*s] = *s;
    std::deque<std::size_t> queue{*s};
    while (!queue.empty() && prev[*goal] == none) {
      auto x = queue.front();
      queue.pop_front();
      for (std::size_t k = 0; k < adj_[x].size(); ++k) {
        auto y = adj_[x][k].to;
        if (prev[y] != none) continue;
        prev[y] = x;
        via[y] = k;
        queue.push_back(y);
      }
    }
    if (prev[*goal] == none) return std::nullopt;
    std::vector<CertificateStep> steps;
    for (auto y = *goal; y != *s; y = prev[y]) {
      const auto& arc = adj_[prev[y]][via[y]];
      steps.push_back({nodes_[prev[y]], nodes_[y], arc.relation, arc.witness});
    }
    std::reverse(steps.begin(), steps.end());
    return steps;
  }

  /// True iff some node is ≈-connected to its reversal.
  bool has_reversal_path() const {
    for (std::size_t i = 0; i < size(); ++i)
      if (path_to_reversal(nodes_[i])) return true;
    return false;
  }

 private:
  void add_node(Tuple t, bool from_e) {
    auto [it, inserted] = index_.emplace(t, nodes_.size());
    if (inserted) {
      nodes_.push_back(t);
      in_e_.push_back(0);
      in_f_.push_back(0);
      adj_.emplace_back();
    }
    (from_e ? in_e_ : in_f_)[it->second] = 1;
  }

  std::vector<Tuple> nodes_;
  std::vector<char> in_e_, in_f_;
  std::map<Tuple, std::size_t> index_;
  std::vector<std::vector<Arc>> adj_;
};

/// Re-verifies every step against H and F.
inline bool verify_certificate(const WeightedGraph& g, const std::vector<VertexPair>& F, const HardnessCertificate& cert) {
  if (cert.kind == HardnessCertificate::Kind::not_modular) {
    auto [x, y, z] = cert.triple;
    return medians(g.metric(), x, y, z).empty();
  }
  if (cert.steps.empty()) return false;
  auto in_e = [&](Tuple t) { return g.adjacent(t.first, t.second); };
  auto in_f = [&](Tuple t) {
    for (auto [a, b] : F)
      if ((a == t.first && b == t.second) || (a == t.second && b == t.first)) return true;
    return false;
  };
  auto lhd = [&](Tuple p, Tuple q, const std::vector<Vertex>& w) {
    auto [a, b] = p;
    auto [c, d] = q;
    return in_e(p) && in_f(q) && p != q && w == std::vector<Vertex>{c, a, b, d} && g.metric().shortest_subpath({c, a, b, d});
  };
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    const auto& s = cert.steps[i];
    if (i > 0 && cert.steps[i - 1].to != s.from) return false;
    bool ok = false;
    switch (s.relation) {
      case CertificateStep::Relation::parallel: {
        auto [a, b] = s.from;
        auto [c, d] = s.to;
        std::set<Vertex> distinct{a, b, c, d};
        ok = in_e(s.from) && in_e(s.to) && s.witness == std::vector<Vertex>{a, b, d, c} && distinct.size() == 4 &&
             g.adjacent(b, d) && g.adjacent(d, c) && g.adjacent(c, a);
        break;
      }
      case CertificateStep::Relation::lhd: ok = lhd(s.from, s.to, s.witness); break;
      case CertificateStep::Relation::rhd: ok = lhd(s.to, s.from, s.witness); break;
    }
    if (!ok) return false;
  }
  auto first = cert.steps.front().from, last = cert.steps.back().to;
  return last == Tuple{first.second, first.first};
}

/// Turns a parity conflict into a verified ≈-path certificate.
inline HardnessCertificate hardness_certificate(const WeightedGraph& g, const std::vector<VertexPair>& F,
                                                const ConflictCore& core) {
  ApproxGraph graph(g, F);
  HardnessCertificate cert;
  bool uses_f = false;
  for (const auto& c : core.cycle) uses_f |= c.witness.kind == ConstraintWitness::Kind::shortest_path;
  cert.kind = uses_f ? HardnessCertificate::Kind::not_f_orientable : HardnessCertificate::Kind::not_orientable;
  std::vector<Tuple> starts;
  if (!core.cycle.empty()) {
    const auto& w = core.cycle.front().witness;
    if (w.kind == ConstraintWitness::Kind::four_cycle)
      starts.push_back({w.cycle[0], w.cycle[1]});
    else
      starts.push_back({w.u, w.v});
  }
  for (std::size_t i = 0; i < graph.size(); ++i) starts.push_back(graph.node(i));
  for (auto t : starts)
    if (auto steps = graph.path_to_reversal(t)) {
      cert.steps = std::move(*steps);
      if (!verify_certificate(g, F, cert)) throw InternalInconsistency("certificate failed re-verification");
      return cert;
    }
  throw InternalInconsistency("parity conflict without a reversal path in the ≈-graph");
}

struct Classification {
  bool tractable = false;
  WeightedGraph graph;
  std::vector<VertexPair> pairs;
  std::optional<Orientation> orientation;
  std::optional<ExtendedComplex> complex;  // relation = precedes
  std::optional<HardnessCertificate> certificate;
};

inline Classification classify(const Metric& m, std::vector<VertexPair> F) {
  Classification out;
  out.graph = underlying_graph(m);
  out.pairs = detail::normalise_pairs(std::move(F), m.size());
  auto verdict = is_modular(m);
  if (!verdict.modular) {
    out.certificate = HardnessCertificate{HardnessCertificate::Kind::not_modular, *verdict.witness, {}};
    return out;
  }
  if (!orbits(out.graph).orbit_invariant)
    throw InternalInconsistency("modular metric with a graph that is not orbit-invariant");
  auto solved = admissible_orientation(out.graph, out.pairs);
  if (auto* core = std::get_if<ConflictCore>(&solved)) {
    auto h_alone = admissible_orientation(out.graph, {});
    if (auto* h_core = std::get_if<ConflictCore>(&h_alone)) {
      out.certificate = hardness_certificate(out.graph, {}, *h_core);
    } else {
      out.certificate = hardness_certificate(out.graph, out.pairs, *core);
      out.certificate->kind = HardnessCertificate::Kind::not_f_orientable;
    }
    return out;
  }
  auto& o = std::get<Orientation>(solved);
  if (auto err = verify_orientation(out.graph, out.pairs, o)) throw InternalInconsistency("orientation check failed: " + *err);
  out.tractable = true;
  out.complex = build_complex(out.graph, o.edge_arcs, RelationKind::precedes);
  out.orientation = std::move(o);
  return out;
}

inline Classification classify(const Metric& m, const std::vector<std::pair<std::string, std::string>>& F) {
  std::vector<VertexPair> idx;
  for (const auto& [a, b] : F) idx.emplace_back(m.index(a), m.index(b));
  return classify(m, std::move(idx));
}

}  // namespace zeroext
