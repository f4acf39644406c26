#pragma once

// Extended modular complexes: an oriented modular graph with its order and an
// admissible relation. Gates, the ◁/▷/◇ operations, normal paths, the
// thickening, 2-subdivisions and products live here too.

#include <zeroext/errors.hpp>
#include <zeroext/metric.hpp>
#include <zeroext/semilattice.hpp>
#include <zeroext/table.hpp>

#include <algorithm>
#include <deque>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace zeroext {

using Arc = std::pair<Vertex, Vertex>;  // (tail, head)

enum class RelationKind { precedes, boolean_pair, explicit_set };

struct RelationViolation {
  enum class Condition { reflexive, edge, coarsen, interval, join, meet };
  Condition condition = Condition::reflexive;
  std::vector<Vertex> witness;
};

inline const char* to_string(RelationViolation::Condition c) {
  using C = RelationViolation::Condition;
  switch (c) {
    case C::reflexive: return "reflexivity";
    case C::edge: return "edge containment";
    case C::coarsen: return "coarsening of the order";
    case C::interval: return "interval restriction";
    case C::join: return "join closure";
    case C::meet: return "meet closure";
  }
  return "?";
}

class ExtendedComplex;

/// An oriented modular graph with its order and lattice operations, before a
/// relation is attached.
class OrientedGraph {
 public:
  OrientedGraph() = default;
  OrientedGraph(WeightedGraph g, std::vector<Arc> arcs) : g_(std::move(g)), arcs_(std::move(arcs)) {
    const auto n = g_.size();
    if (arcs_.size() != g_.edges().size()) throw Error("one arc per edge required");
    out_.assign(n, {});
    in_.assign(n, {});
    SquareTable<char> dir(n, 0);
    for (std::size_t e = 0; e < arcs_.size(); ++e) {
      auto [t, h] = arcs_[e];
      const auto& edge = g_.edges()[e];
      if (!((t == edge.u && h == edge.v) || (t == edge.v && h == edge.u))) throw Error("arc does not match its edge");
      out_[t].push_back(h);
      in_[h].push_back(t);
      dir(t, h) = 1;
    }
    for (auto& o : out_) std::sort(o.begin(), o.end());
    for (auto& i : in_) std::sort(i.begin(), i.end());
    // Kahn's algorithm
    std::vector<std::size_t> indeg(n);
    for (Vertex v = 0; v < n; ++v) indeg[v] = in_[v].size();
    std::deque<Vertex> queue;
    for (Vertex v = 0; v < n; ++v)
      if (!indeg[v]) queue.push_back(v);
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      topo_.push_back(v);
      for (auto w : out_[v])
        if (--indeg[w] == 0) queue.push_back(w);
    }
    if (topo_.size() != n) throw CyclicOrientation("orientation contains a directed cycle");
    for (const auto& c : g_.four_cycles())
      for (int r = 0; r < 4; ++r) {
        Vertex x1 = c[r], x2 = c[(r + 1) % 4], x3 = c[(r + 2) % 4], x4 = c[(r + 3) % 4];
        if (dir(x1, x2) && !dir(x4, x3))
          throw InadmissibleOrientation("4-cycle " + g_.label(x1) + "," + g_.label(x2) + "," + g_.label(x3) + "," +
                                        g_.label(x4) + " has opposite sides pointing apart");
      }
    prec_ = Relation(n, 0);
    for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
      Vertex v = *it;
      prec_(v, v) = 1;
      for (auto w : out_[v])
        for (Vertex x = 0; x < n; ++x)
          if (prec_(w, x)) prec_(v, x) = 1;
    }
    meet_ = SquareTable<int>(n, kAbsent);
    join_ = SquareTable<int>(n, kAbsent);
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b = a; b < n; ++b) {
        std::vector<Vertex> lower, upper;
        for (Vertex c = 0; c < n; ++c) {
          if (prec_(c, a) && prec_(c, b)) lower.push_back(c);
          if (prec_(a, c) && prec_(b, c)) upper.push_back(c);
        }
        auto extremal = [&](const std::vector<Vertex>& set, bool greatest) -> int {
          for (auto c : set)
            if (std::all_of(set.begin(), set.end(), [&](Vertex x) { return greatest ? prec_(x, c) : prec_(c, x); }))
              return static_cast<int>(c);
          return kAbsent;
        };
        int m = extremal(lower, true), j = extremal(upper, false);
        if ((!lower.empty() && m == kAbsent) || (!upper.empty() && j == kAbsent))
          throw InadmissibleOrientation("bounded pair " + g_.label(a) + "," + g_.label(b) + " without a meet or join");
        meet_(a, b) = meet_(b, a) = m;
        join_(a, b) = join_(b, a) = j;
      }
  }

  std::size_t size() const { return g_.size(); }
  const WeightedGraph& graph() const { return g_; }
  const std::string& label(Vertex v) const { return g_.label(v); }
  const std::vector<std::string>& labels() const { return g_.labels(); }
  Vertex index(std::string_view label) const { return g_.index(label); }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<Vertex>& out(Vertex v) const { return out_[v]; }
  const std::vector<Vertex>& in(Vertex v) const { return in_[v]; }
  bool precedes(Vertex a, Vertex b) const { return prec_(a, b) != 0; }
  const Relation& order() const { return prec_; }
  std::optional<Vertex> meet(Vertex a, Vertex b) const {
    int m = meet_(a, b);
    return m == kAbsent ? std::nullopt : std::optional<Vertex>(static_cast<Vertex>(m));
  }
  std::optional<Vertex> join(Vertex a, Vertex b) const {
    int j = join_(a, b);
    return j == kAbsent ? std::nullopt : std::optional<Vertex>(static_cast<Vertex>(j));
  }
  int d(Vertex a, Vertex b) const { return g_.d(a, b); }
  const Rational& mu(Vertex a, Vertex b) const { return g_.mu(a, b); }
  const Metric& metric() const { return g_.metric(); }

  /// Order interval [p,q] = { x : p ⪯ x ⪯ q }.
  std::vector<Vertex> order_interval(Vertex p, Vertex q) const {
    std::vector<Vertex> out;
    for (Vertex x = 0; x < size(); ++x)
      if (precedes(p, x) && precedes(x, q)) out.push_back(x);
    return out;
  }

  /// Join of the atoms of [p,q] (p itself when p = q).
  Vertex atom_join(Vertex p, Vertex q) const {
    Vertex acc = p;
    for (auto a : out_[p])
      if (precedes(a, q)) {
        auto j = join(acc, a);
        if (!j) throw InternalInconsistency("atoms below a common element without a join");
        acc = *j;
      }
    return acc;
  }

 private:
  WeightedGraph g_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<Vertex>> out_, in_;
  std::vector<Vertex> topo_;
  Relation prec_;
  SquareTable<int> meet_, join_;
};

/// Pairs p ⪯ q whose top is the join of the atoms of [p,q].
inline Relation boolean_pair_relation(const OrientedGraph& G) {
  Relation rel(G.size(), 0);
  for (Vertex p = 0; p < G.size(); ++p)
    for (Vertex q = 0; q < G.size(); ++q)
      if (G.precedes(p, q) && G.atom_join(p, q) == q) rel(p, q) = 1;
  return rel;
}

/// First violated admissibility condition, scanning reflexivity, edges,
/// coarsening, interval restriction, join closure, meet closure in that order.
inline std::optional<RelationViolation> check_admissible_relation(const OrientedGraph& G, const Relation& rel) {
  using C = RelationViolation::Condition;
  const auto n = G.size();
  if (rel.size() != n) throw Error("relation size does not match the complex");
  for (Vertex p = 0; p < n; ++p)
    if (!rel(p, p)) return RelationViolation{C::reflexive, {p}};
  for (auto [t, h] : G.arcs())
    if (!rel(t, h)) return RelationViolation{C::edge, {t, h}};
  for (Vertex p = 0; p < n; ++p)
    for (Vertex q = 0; q < n; ++q)
      if (rel(p, q) && !G.precedes(p, q)) return RelationViolation{C::coarsen, {p, q}};
  for (Vertex p = 0; p < n; ++p)
    for (Vertex q = 0; q < n; ++q) {
      if (!rel(p, q)) continue;
      auto box = G.order_interval(p, q);
      for (auto a : box)
        for (auto b : box)
          if (G.precedes(a, b) && !rel(a, b)) return RelationViolation{C::interval, {p, q, a, b}};
    }
  for (Vertex p = 0; p < n; ++p)
    for (Vertex q1 = 0; q1 < n; ++q1)
      for (Vertex q2 = 0; q2 < n; ++q2) {
        if (!rel(p, q1) || !rel(p, q2)) continue;
        auto j = G.join(q1, q2);
        if (j && !rel(p, *j)) return RelationViolation{C::join, {p, q1, q2}};
      }
  for (Vertex q = 0; q < n; ++q)
    for (Vertex p1 = 0; p1 < n; ++p1)
      for (Vertex p2 = 0; p2 < n; ++p2) {
        if (!rel(p1, q) || !rel(p2, q)) continue;
        auto m = G.meet(p1, p2);
        if (m && !rel(*m, q)) return RelationViolation{C::meet, {q, p1, p2}};
      }
  return std::nullopt;
}

class ExtendedComplex : public OrientedGraph {
 public:
  ExtendedComplex() = default;
  ExtendedComplex(OrientedGraph G, Relation rel, RelationKind kind)
      : OrientedGraph(std::move(G)), rel_(std::move(rel)), kind_(kind) {
    if (auto v = check_admissible_relation(*this, rel_)) {
      std::string w;
      for (auto x : v->witness) w += (w.empty() ? "" : ",") + label(x);
      throw InadmissibleRelation(std::string("relation violates ") + to_string(v->condition) + " at (" + w + ")");
    }
    const auto n = size();
    thick_ = Relation(n, 0);
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b = 0; b < n; ++b) {
        auto m = meet(a, b);
        auto j = join(a, b);
        thick_(a, b) = m && j && rel_(*m, *j);
      }
    delta_ = SquareTable<int>(n, -1);
    for (Vertex s = 0; s < n; ++s) {
      std::deque<Vertex> queue{s};
      delta_(s, s) = 0;
      while (!queue.empty()) {
        auto x = queue.front();
        queue.pop_front();
        for (Vertex y = 0; y < n; ++y)
          if (thick_(x, y) && delta_(s, y) < 0) {
            delta_(s, y) = delta_(s, x) + 1;
            queue.push_back(y);
          }
      }
    }
  }

  RelationKind kind() const { return kind_; }
  bool rel(Vertex a, Vertex b) const { return rel_(a, b) != 0; }
  const Relation& relation() const { return rel_; }

  /// ◇-neighbours: both lie in some [a,b] with a ⊑ b.
  bool delta_neighbors(Vertex a, Vertex b) const { return thick_(a, b) != 0; }
  int delta_distance(Vertex a, Vertex b) const { return delta_(a, b); }

  std::vector<Vertex> up(Vertex p) const { return collect([&](Vertex q) { return precedes(p, q); }); }
  std::vector<Vertex> down(Vertex p) const { return collect([&](Vertex q) { return precedes(q, p); }); }
  std::vector<Vertex> plus(Vertex p) const { return collect([&](Vertex q) { return rel(p, q); }); }
  std::vector<Vertex> minus(Vertex p) const { return collect([&](Vertex q) { return rel(q, p); }); }

 private:
  template <class Pred>
  std::vector<Vertex> collect(Pred pred) const {
    std::vector<Vertex> out;
    for (Vertex q = 0; q < size(); ++q)
      if (pred(q)) out.push_back(q);
    return out;
  }

  Relation rel_;
  RelationKind kind_ = RelationKind::precedes;
  Relation thick_;
  SquareTable<int> delta_;
};

inline ExtendedComplex build_complex(const WeightedGraph& g, std::vector<Arc> arcs, RelationKind kind) {
  if (kind == RelationKind::explicit_set) throw Error("explicit relation requires the relation itself");
  OrientedGraph G(g, std::move(arcs));
  Relation rel = kind == RelationKind::precedes ? G.order() : boolean_pair_relation(G);
  return ExtendedComplex(std::move(G), std::move(rel), kind);
}

inline ExtendedComplex build_complex(const WeightedGraph& g, std::vector<Arc> arcs, const Relation& rel) {
  return ExtendedComplex(OrientedGraph(g, std::move(arcs)), rel, RelationKind::explicit_set);
}

/// Same complex with a different relation.
inline ExtendedComplex with_relation(const ExtendedComplex& cx, RelationKind kind, const Relation* rel = nullptr) {
  if (kind == RelationKind::explicit_set) return build_complex(cx.graph(), cx.arcs(), *rel);
  return build_complex(cx.graph(), cx.arcs(), kind);
}

enum class Principal { up, down, plus, minus, lstar };

inline ValuatedSemilattice principal_semilattice(const ExtendedComplex& cx, Vertex p, Principal sigma) {
  std::vector<std::string> labels;
  std::vector<Rational> v;
  if (sigma == Principal::lstar) {
    std::vector<std::pair<Vertex, Vertex>> members;
    for (Vertex a = 0; a < cx.size(); ++a)
      for (Vertex b = 0; b < cx.size(); ++b)
        if (cx.rel(a, b) && cx.precedes(a, p) && cx.precedes(p, b)) members.emplace_back(a, b);
    Relation leq(members.size(), 0);
    for (std::size_t i = 0; i < members.size(); ++i) {
      auto [a, b] = members[i];
      labels.push_back("[" + cx.label(a) + "," + cx.label(b) + "]");
      v.push_back(cx.mu(p, a) + cx.mu(p, b));
      for (std::size_t j = 0; j < members.size(); ++j)
        leq(i, j) = cx.precedes(members[j].first, a) && cx.precedes(b, members[j].second);
    }
    return validate_valuated_semilattice(std::move(labels), leq, std::move(v));
  }
  std::vector<Vertex> ground;
  switch (sigma) {
    case Principal::up: ground = cx.up(p); break;
    case Principal::down: ground = cx.down(p); break;
    case Principal::plus: ground = cx.plus(p); break;
    case Principal::minus: ground = cx.minus(p); break;
    case Principal::lstar: break;
  }
  const bool reversed = sigma == Principal::down || sigma == Principal::minus;
  Relation leq(ground.size(), 0);
  for (std::size_t i = 0; i < ground.size(); ++i) {
    labels.push_back(cx.label(ground[i]));
    v.push_back(cx.mu(p, ground[i]));
    for (std::size_t j = 0; j < ground.size(); ++j)
      leq(i, j) = reversed ? cx.precedes(ground[j], ground[i]) : cx.precedes(ground[i], ground[j]);
  }
  return validate_valuated_semilattice(std::move(labels), leq, std::move(v));
}

/// Ground set of a principal semilattice, as complex vertices.
inline std::vector<Vertex> principal_set(const ExtendedComplex& cx, Vertex p, Principal sigma) {
  switch (sigma) {
    case Principal::up: return cx.up(p);
    case Principal::down: return cx.down(p);
    case Principal::plus: return cx.plus(p);
    case Principal::minus: return cx.minus(p);
    case Principal::lstar: break;
  }
  throw Error("lstar has no ground set in the complex");
}

/// Local criterion: Γ[U] connected and I(x,y) ⊆ U for all x,y ∈ U at
/// distance 2.
inline bool is_convex(const WeightedGraph& g, const std::vector<Vertex>& U) {
  if (U.empty()) return true;
  std::vector<char> in(g.size(), 0);
  for (auto u : U) in[u] = 1;
  std::vector<char> seen(g.size(), 0);
  std::deque<Vertex> queue{U.front()};
  seen[U.front()] = 1;
  std::size_t reached = 1;
  while (!queue.empty()) {
    auto x = queue.front();
    queue.pop_front();
    for (auto y : g.neighbors(x))
      if (in[y] && !seen[y]) {
        seen[y] = 1;
        ++reached;
        queue.push_back(y);
      }
  }
  std::size_t distinct = 0;
  for (auto c : in) distinct += c;
  if (reached != distinct) return false;
  for (auto x : U)
    for (auto y : U) {
      if (g.d(x, y) != 2) continue;
      for (Vertex z = 0; z < g.size(); ++z)
        if (!in[z] && g.d(x, z) + g.d(z, y) == 2) return false;
    }
  return true;
}

/// Definition-level convexity: I(x,y) ⊆ U for every pair.
inline bool is_convex_exhaustive(const Metric& m, const std::vector<Vertex>& U) {
  std::vector<char> in(m.size(), 0);
  for (auto u : U) in[u] = 1;
  for (auto x : U)
    for (auto y : U)
      for (auto z : interval(m, x, y))
        if (!in[z]) return false;
  return true;
}

/// Gate of p at U: the u* ∈ U with μ(p,q) = μ(p,u*) + μ(u*,q) for all q ∈ U.
inline Vertex project(const Metric& m, const std::vector<Vertex>& U, Vertex p) {
  if (U.empty()) throw NotGated("projection onto the empty set");
  Vertex best = U.front();
  for (auto u : U)
    if (m(p, u) < m(p, best)) best = u;
  for (auto q : U)
    if (m(p, q) != m(p, best) + m(best, q)) throw NotGated(m.label(p) + " has no gate in the given set");
  return best;
}

/// p ▷ q: gate of q at L⁺_p.
inline Vertex gate_up(const ExtendedComplex& cx, Vertex p, Vertex q) { return project(cx.metric(), cx.plus(p), q); }
/// p ◁ q: gate of q at L⁻_p.
inline Vertex gate_down(const ExtendedComplex& cx, Vertex p, Vertex q) { return project(cx.metric(), cx.minus(p), q); }

/// p ◇ q: the median of p▷q, p◁q and q, searched inside I(p,q).
inline Vertex diamond(const ExtendedComplex& cx, Vertex p, Vertex q) {
  const auto& m = cx.metric();
  const Vertex a = gate_up(cx, p, q), b = gate_down(cx, p, q);
  std::optional<Vertex> found;
  for (auto u : interval(m, p, q))
    if (in_interval(m, a, u, b) && in_interval(m, b, u, q) && in_interval(m, a, u, q)) {
      if (found) throw InternalInconsistency("several medians for the diamond operation");
      found = u;
    }
  if (!found) throw InternalInconsistency("no median for the diamond operation");
  return *found;
}

/// (p, p◇q, (p◇q)◇q, ..., q).
inline std::vector<Vertex> normal_path(const ExtendedComplex& cx, Vertex p, Vertex q) {
  std::vector<Vertex> path{p};
  for (Vertex x = p; x != q;) {
    if (path.size() > cx.size()) throw InternalInconsistency("normal path does not terminate");
    x = diamond(cx, x, q);
    path.push_back(x);
  }
  return path;
}

struct Subdivision {
  std::vector<std::pair<Vertex, Vertex>> pairs;  // vertex i is [pairs[i].first, pairs[i].second]
  SquareTable<int> index;                        // (p,q) -> vertex or -1
  WeightedGraph graph;
  std::vector<Arc> arcs;

  std::size_t size() const { return pairs.size(); }
  std::optional<Vertex> find(Vertex p, Vertex q) const {
    int i = index(p, q);
    return i < 0 ? std::nullopt : std::optional<Vertex>(static_cast<Vertex>(i));
  }
  /// Γ* as a modular complex (relation = Boolean pairs).
  ExtendedComplex as_complex() const { return build_complex(graph, arcs, RelationKind::boolean_pair); }
};

inline Subdivision two_subdivision(const ExtendedComplex& cx) {
  Subdivision S;
  const auto n = cx.size();
  S.index = SquareTable<int>(n, -1);
  std::vector<std::string> labels;
  for (Vertex p = 0; p < n; ++p)
    for (Vertex q = 0; q < n; ++q)
      if (cx.rel(p, q)) {
        S.index(p, q) = static_cast<int>(S.pairs.size());
        S.pairs.emplace_back(p, q);
        labels.push_back("[" + cx.label(p) + "," + cx.label(q) + "]");
      }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < S.pairs.size(); ++i) {
    auto [p, q] = S.pairs[i];
    for (auto q2 : cx.out(q))
      if (auto j = S.find(p, q2)) {
        edges.push_back({i, *j, cx.mu(q, q2)});
        S.arcs.emplace_back(i, *j);
      }
    for (auto p2 : cx.in(p))
      if (auto j = S.find(p2, q)) {
        edges.push_back({i, *j, cx.mu(p2, p)});
        S.arcs.emplace_back(i, *j);
      }
  }
  // WeightedGraph stores edges with u < v; keep arcs aligned with edge ids
  S.graph = WeightedGraph::from_edges(std::move(labels), edges);
  std::vector<Arc> aligned(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) aligned[*S.graph.edge_id(edges[e].u, edges[e].v)] = S.arcs[e];
  S.arcs = std::move(aligned);
  return S;
}

/// Cartesian product with the componentwise relation. Vertex (a,b) has index
/// a * |B| + b.
inline ExtendedComplex product_complex(const ExtendedComplex& A, const ExtendedComplex& B) {
  const auto nb = B.size(), n = A.size() * nb;
  std::vector<std::string> labels;
  for (Vertex a = 0; a < A.size(); ++a)
    for (Vertex b = 0; b < nb; ++b) labels.push_back("(" + A.label(a) + "," + B.label(b) + ")");
  std::vector<Edge> edges;
  std::vector<Arc> arcs;
  for (Vertex a = 0; a < A.size(); ++a)
    for (auto [t, h] : B.arcs()) {
      edges.push_back({a * nb + t, a * nb + h, B.mu(t, h)});
      arcs.emplace_back(a * nb + t, a * nb + h);
    }
  for (Vertex b = 0; b < nb; ++b)
    for (auto [t, h] : A.arcs()) {
      edges.push_back({t * nb + b, h * nb + b, A.mu(t, h)});
      arcs.emplace_back(t * nb + b, h * nb + b);
    }
  auto graph = WeightedGraph::from_edges(std::move(labels), edges);
  std::vector<Arc> aligned(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) aligned[*graph.edge_id(edges[e].u, edges[e].v)] = arcs[e];
  Relation rel(n, 0);
  for (Vertex x = 0; x < n; ++x)
    for (Vertex y = 0; y < n; ++y) rel(x, y) = A.rel(x / nb, y / nb) && B.rel(x % nb, y % nb);
  return build_complex(graph, std::move(aligned), rel);
}

/// Text dump: vertices, arcs with weights, and the relation row by row.
inline std::string dump(const ExtendedComplex& cx) {
  std::ostringstream os;
  os << "vertices";
  for (const auto& l : cx.labels()) os << ' ' << l;
  os << "\narcs\n";
  for (auto [t, h] : cx.arcs()) os << "  " << cx.label(t) << " -> " << cx.label(h) << ' ' << to_string(cx.mu(t, h)) << '\n';
  os << "relation\n";
  for (Vertex p = 0; p < cx.size(); ++p) {
    os << "  " << cx.label(p) << ':';
    for (auto q : cx.plus(p)) os << ' ' << cx.label(q);
    os << '\n';
  }
  return os.str();
}

}  // namespace zeroext
