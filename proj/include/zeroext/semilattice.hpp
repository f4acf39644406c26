#pragma once

// Valuated modular semilattices: validation, v_pq coordinates, envelopes with
// theta breakpoints, special pairs and the submodularity checkers.

#include <zeroext/errors.hpp>
#include <zeroext/metric.hpp>
#include <zeroext/rational.hpp>
#include <zeroext/table.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace zeroext {

inline constexpr int kAbsent = -1;

class ValuatedSemilattice {
 public:
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(Vertex a) const { return labels_.at(a); }
  Vertex index(std::string_view label) const { return hasse_.index(label); }

  bool leq(Vertex a, Vertex b) const { return leq_(a, b) != 0; }
  Vertex meet(Vertex a, Vertex b) const { return static_cast<Vertex>(meet_(a, b)); }
  std::optional<Vertex> join(Vertex a, Vertex b) const {
    int j = join_(a, b);
    if (j == kAbsent) return std::nullopt;
    return static_cast<Vertex>(j);
  }
  Vertex bottom() const { return bottom_; }
  const Rational& v(Vertex a) const { return v_[a]; }
  /// v[a,b] = v(b) - v(a).
  Rational v(Vertex a, Vertex b) const { return v_[b] - v_[a]; }
  int rank(Vertex a) const { return rank_[a]; }

  /// Covering graph weighted by valuation differences.
  const WeightedGraph& hasse() const { return hasse_; }
  /// Hasse edges as (lower, upper).
  const std::vector<std::pair<Vertex, Vertex>>& covers() const { return covers_; }
  const Rational& mu(Vertex a, Vertex b) const { return hasse_.mu(a, b); }
  const Metric& metric() const { return hasse_.metric(); }

  std::vector<Vertex> interval(Vertex p, Vertex q) const { return zeroext::interval(metric(), p, q); }

  friend ValuatedSemilattice validate_valuated_semilattice(std::vector<std::string> labels, const Relation& leq,
                                                           std::vector<Rational> v);

 private:
  std::vector<std::string> labels_;
  Relation leq_;
  SquareTable<int> meet_, join_;
  std::vector<Rational> v_;
  std::vector<int> rank_;
  Vertex bottom_ = 0;
  std::vector<std::pair<Vertex, Vertex>> covers_;
  WeightedGraph hasse_;
};

/// Checks every semilattice axiom by enumeration and derives meets, joins,
/// rank and the Hasse diagram.
inline ValuatedSemilattice validate_valuated_semilattice(std::vector<std::string> labels, const Relation& leq,
                                                         std::vector<Rational> v) {
  const auto n = labels.size();
  if (leq.size() != n || v.size() != n) throw Error("semilattice data sizes disagree");
  if (n == 0) throw NotMeetSemilattice("empty poset");
  auto L = [&](Vertex a) { return labels[a]; };
  for (Vertex a = 0; a < n; ++a)
    if (!leq(a, a)) throw NotMeetSemilattice("order is not reflexive at " + L(a));
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = 0; b < n; ++b) {
      if (a != b && leq(a, b) && leq(b, a)) throw NotMeetSemilattice("order is not antisymmetric at " + L(a) + "," + L(b));
      for (Vertex c = 0; c < n; ++c)
        if (leq(a, b) && leq(b, c) && !leq(a, c))
          throw NotMeetSemilattice("order is not transitive at " + L(a) + "," + L(b) + "," + L(c));
    }

  ValuatedSemilattice S;
  S.meet_ = SquareTable<int>(n, kAbsent);
  S.join_ = SquareTable<int>(n, kAbsent);
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = 0; b < n; ++b) {
      std::vector<Vertex> lower, upper;
      for (Vertex c = 0; c < n; ++c) {
        if (leq(c, a) && leq(c, b)) lower.push_back(c);
        if (leq(a, c) && leq(b, c)) upper.push_back(c);
      }
      std::optional<Vertex> glb, lub;
      for (auto c : lower)
        if (std::all_of(lower.begin(), lower.end(), [&](Vertex d) { return leq(d, c) != 0; })) glb = c;
      for (auto c : upper)
        if (std::all_of(upper.begin(), upper.end(), [&](Vertex d) { return leq(c, d) != 0; })) lub = c;
      const bool has_upper = !upper.empty();
      if (!glb) throw NotMeetSemilattice("no meet of " + L(a) + " and " + L(b));
      if (has_upper && !lub) throw NotMeetSemilattice("upper-bounded pair " + L(a) + "," + L(b) + " without a join");
      S.meet_(a, b) = static_cast<int>(*glb);
      if (lub) S.join_(a, b) = static_cast<int>(*lub);
    }
  auto meet = [&](Vertex a, Vertex b) { return static_cast<Vertex>(S.meet_(a, b)); };
  auto join = [&](Vertex a, Vertex b) { return S.join_(a, b); };

  for (Vertex x = 0; x < n; ++x)
    for (Vertex z = 0; z < n; ++z) {
      if (!leq(x, z)) continue;
      for (Vertex y = 0; y < n; ++y) {
        if (join(y, z) == kAbsent) continue;
        int left = join(x, meet(y, z));
        int xy = join(x, y);
        if (left == kAbsent || xy == kAbsent || left != static_cast<int>(meet(static_cast<Vertex>(xy), z)))
          throw NotModular("modular law fails at " + L(x) + "," + L(y) + "," + L(z));
      }
    }
  for (Vertex x = 0; x < n; ++x)
    for (Vertex y = 0; y < n; ++y)
      for (Vertex z = 0; z < n; ++z) {
        int xy = join(x, y);
        if (xy == kAbsent || join(y, z) == kAbsent || join(x, z) == kAbsent) continue;
        if (join(static_cast<Vertex>(xy), z) == kAbsent)
          throw NotModular("pairwise joinable triple " + L(x) + "," + L(y) + "," + L(z) + " has no join");
      }

  for (Vertex p = 0; p < n; ++p)
    for (Vertex q = p + 1; q < n; ++q) {
      int j = join(p, q);
      if (j != kAbsent && v[p] + v[q] != v[meet(p, q)] + v[static_cast<Vertex>(j)])
        throw BadValuation("valuation is not modular at (" + L(p) + "," + L(q) + ")");
    }
  for (Vertex p = 0; p < n; ++p)
    for (Vertex q = 0; q < n; ++q)
      if (p != q && leq(p, q) && !(v[p] < v[q]))
        throw BadValuation("valuation is not strictly increasing at (" + L(p) + "," + L(q) + ")");

  S.bottom_ = 0;
  for (Vertex a = 0; a < n; ++a)
    if (leq(a, S.bottom_)) S.bottom_ = a;
  for (Vertex a = 0; a < n; ++a)
    if (!leq(S.bottom_, a)) throw InternalInconsistency("meet-semilattice without a bottom");

  std::vector<Edge> edges;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = 0; b < n; ++b) {
      if (a == b || !leq(a, b)) continue;
      bool cover = true;
      for (Vertex c = 0; c < n && cover; ++c)
        if (c != a && c != b && leq(a, c) && leq(c, b)) cover = false;
      if (cover) {
        S.covers_.emplace_back(a, b);
        edges.push_back({a, b, v[b] - v[a]});
      }
    }
  // rank: longest chain from the bottom, by increasing valuation
  std::vector<Vertex> order(n);
  for (Vertex a = 0; a < n; ++a) order[a] = a;
  std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return v[a] < v[b]; });
  S.rank_.assign(n, 0);
  for (auto b : order)
    for (const auto& [lo, hi] : S.covers_)
      if (hi == b) S.rank_[b] = std::max(S.rank_[b], S.rank_[lo] + 1);

  S.hasse_ = WeightedGraph::from_edges(labels, std::move(edges));
  S.labels_ = std::move(labels);
  S.leq_ = leq;
  S.v_ = std::move(v);
  return S;
}

inline ValuatedSemilattice product_semilattice(const ValuatedSemilattice& A, const ValuatedSemilattice& B) {
  const auto n = A.size() * B.size();
  std::vector<std::string> labels;
  std::vector<Rational> v;
  for (Vertex a = 0; a < A.size(); ++a)
    for (Vertex b = 0; b < B.size(); ++b) {
      labels.push_back("(" + A.label(a) + "," + B.label(b) + ")");
      v.push_back(A.v(a) + B.v(b));
    }
  Relation leq(n, 0);
  for (Vertex x = 0; x < n; ++x)
    for (Vertex y = 0; y < n; ++y)
      leq(x, y) = A.leq(x / B.size(), y / B.size()) && B.leq(x % B.size(), y % B.size());
  return validate_valuated_semilattice(std::move(labels), leq, std::move(v));
}

using Coord = std::pair<Rational, Rational>;

/// v_pq(u) = (v[s, u∧p], v[s, u∧q]) with s = p∧q.
inline Coord vpq_coords(const ValuatedSemilattice& L, Vertex p, Vertex q, Vertex u) {
  if (!in_interval(L.metric(), p, u, q))
    throw NotInInterval(L.label(u) + " is not in I(" + L.label(p) + "," + L.label(q) + ")");
  const Vertex s = L.meet(p, q), a = L.meet(u, p), b = L.meet(u, q);
  auto j = L.join(a, b);
  if (!j || *j != u) throw InternalInconsistency("interval element is not the join of its projections");
  return {L.v(s, a), L.v(s, b)};
}

enum class PairClass { bounded, antipodal, general };

inline const char* to_string(PairClass c) {
  switch (c) {
    case PairClass::bounded: return "bounded";
    case PairClass::antipodal: return "antipodal";
    case PairClass::general: return "general";
  }
  return "?";
}

struct EnvelopeReport {
  Vertex p = 0, q = 0, s = 0;
  std::vector<Vertex> members;                 // I(p,q) in element order
  std::map<Vertex, Coord> coords;
  std::vector<Vertex> envelope;                // u_0 = p, ..., u_k = q
  std::vector<Rational> thetas;                // theta_{-1} = 0, theta_0, ..., theta_k = 1
  PairClass pair_class = PairClass::general;

  /// Weight of u_i: theta_i - theta_{i-1}.
  Rational weight(std::size_t i) const { return thetas[i + 1] - thetas[i]; }
};

namespace detail {
inline Rational cross(const Coord& o, const Coord& a, const Coord& b) {
  return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
}

/// Strict convex hull in counter-clockwise order (monotone chain).
inline std::vector<Coord> convex_hull(std::vector<Coord> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;
  std::vector<Coord> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& pt : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pt) <= 0) --k;
    hull[k++] = pt;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}
}  // namespace detail

/// Product test for antipodality: v[a,p] v[b,q] >= v[s,a] v[s,b] for every joinable
/// straddle s <= a <= p, s <= b <= q.
inline bool antipodal_by_products(const ValuatedSemilattice& L, Vertex p, Vertex q) {
  const Vertex s = L.meet(p, q);
  for (Vertex a = 0; a < L.size(); ++a) {
    if (!(L.leq(s, a) && L.leq(a, p))) continue;
    for (Vertex b = 0; b < L.size(); ++b) {
      if (!(L.leq(s, b) && L.leq(b, q)) || !L.join(a, b)) continue;
      if (L.v(a, p) * L.v(b, q) < L.v(s, a) * L.v(s, b)) return false;
    }
  }
  return true;
}

inline EnvelopeReport envelope(const ValuatedSemilattice& L, Vertex p, Vertex q) {
  EnvelopeReport r;
  r.p = p;
  r.q = q;
  r.s = L.meet(p, q);
  r.members = L.interval(p, q);
  std::map<Coord, std::vector<Vertex>> by_coord;
  for (auto u : r.members) {
    r.coords[u] = vpq_coords(L, p, q, u);
    by_coord[r.coords[u]].push_back(u);
  }
  if (p == q) {
    r.envelope = {p};
  } else {
    std::vector<Coord> pts;
    for (const auto& [c, _] : by_coord) pts.push_back(c);
    auto hull = detail::convex_hull(pts);
    const Coord cp = r.coords[p], cq = r.coords[q];
    auto pos = [&](const Coord& c) -> std::size_t {
      auto it = std::find(hull.begin(), hull.end(), c);
      if (it == hull.end()) throw InternalInconsistency("envelope endpoint is not a hull vertex");
      return static_cast<std::size_t>(it - hull.begin());
    };
    for (std::size_t i = pos(cp);; i = (i + 1) % hull.size()) {
      const auto& owners = by_coord[hull[i]];
      if (owners.size() != 1) throw InternalInconsistency("envelope coordinate shared by several elements");
      r.envelope.push_back(owners.front());
      if (hull[i] == cq) break;
    }
  }
  const auto k = r.envelope.size() - 1;
  r.thetas.push_back(0);
  for (std::size_t i = 0; i < k; ++i) {
    const Vertex ui = r.envelope[i], un = r.envelope[i + 1], si = L.meet(ui, un);
    r.thetas.push_back(L.v(si, ui) / (L.v(si, ui) + L.v(si, un)));
  }
  r.thetas.push_back(1);
  if (L.join(p, q))
    r.pair_class = PairClass::bounded;
  else if (r.envelope.size() == 2)
    r.pair_class = PairClass::antipodal;
  else
    r.pair_class = PairClass::general;
  return r;
}

/// Classification with both antipodality criteria cross-checked.
inline PairClass classify_pair(const ValuatedSemilattice& L, Vertex p, Vertex q) {
  auto r = envelope(L, p, q);
  if ((r.envelope.size() <= 2) != antipodal_by_products(L, p, q))
    throw InternalInconsistency("antipodality criteria disagree at (" + L.label(p) + "," + L.label(q) + ")");
  return r.pair_class;
}

/// Envelopes for all pairs p <= q (by index), computed once.
class EnvelopeTable {
 public:
  explicit EnvelopeTable(const ValuatedSemilattice& L) : n_(L.size()) {
    for (Vertex p = 0; p < n_; ++p)
      for (Vertex q = p; q < n_; ++q) reports_.push_back(envelope(L, p, q));
  }
  const EnvelopeReport& operator()(Vertex p, Vertex q) const {
    if (p > q) std::swap(p, q);
    return reports_[p * n_ - p * (p - 1) / 2 + (q - p)];
  }

 private:
  std::size_t n_;
  std::vector<EnvelopeReport> reports_;
};

using Function = std::vector<Extended>;

struct SubmodularityViolation {
  enum class Kind { domain, inequality };
  Kind kind = Kind::inequality;
  Vertex p = 0, q = 0;
  std::optional<Vertex> outside;  // domain: envelope element with f = inf
  Extended lhs, rhs;              // inequality: lhs < rhs
  std::string describe(const ValuatedSemilattice& L) const {
    std::ostringstream os;
    os << "(" << L.label(p) << "," << L.label(q) << "): ";
    if (kind == Kind::domain)
      os << "envelope element " << L.label(*outside) << " outside dom f";
    else
      os << "lhs " << lhs << " < rhs " << rhs;
    return os.str();
  }
};

inline bool in_dom(const Function& f, Vertex a) { return f[a].is_finite(); }

/// Condition (1): E(p,q) within dom f whenever p, q are.
inline std::optional<SubmodularityViolation> check_domain_closure(const ValuatedSemilattice& L, const Function& f,
                                                                   const EnvelopeTable& E) {
  for (Vertex p = 0; p < L.size(); ++p)
    for (Vertex q = p + 1; q < L.size(); ++q) {
      if (!in_dom(f, p) || !in_dom(f, q)) continue;
      for (auto u : E(p, q).envelope)
        if (!in_dom(f, u)) return SubmodularityViolation{SubmodularityViolation::Kind::domain, p, q, u, {}, {}};
    }
  return std::nullopt;
}

/// The weighted inequality over the envelope, for every pair.
inline std::optional<SubmodularityViolation> check_envelope_inequality(const ValuatedSemilattice& L, const Function& f,
                                                                        const EnvelopeTable& E) {
  for (Vertex p = 0; p < L.size(); ++p)
    for (Vertex q = p + 1; q < L.size(); ++q) {
      Extended lhs = f[p] + f[q];
      if (lhs.is_infinite()) continue;
      const auto& r = E(p, q);
      Extended rhs = f[r.s];
      for (std::size_t i = 0; i < r.envelope.size(); ++i) rhs += r.weight(i) * f[r.envelope[i]];
      if (lhs < rhs) return SubmodularityViolation{SubmodularityViolation::Kind::inequality, p, q, std::nullopt, lhs, rhs};
    }
  return std::nullopt;
}

inline std::optional<SubmodularityViolation> check_submodular(const ValuatedSemilattice& L, const Function& f,
                                                               const EnvelopeTable& E) {
  if (f.size() != L.size()) throw Error("function size does not match the semilattice");
  if (auto v = check_domain_closure(L, f, E)) return v;
  return check_envelope_inequality(L, f, E);
}

inline std::optional<SubmodularityViolation> check_submodular(const ValuatedSemilattice& L, const Function& f) {
  return check_submodular(L, f, EnvelopeTable(L));
}

/// Submodularity on bounded pairs, ∧-convexity on antipodal pairs.
inline std::optional<SubmodularityViolation> check_special_inequalities(const ValuatedSemilattice& L, const Function& f,
                                                                         const EnvelopeTable& E) {
  for (Vertex p = 0; p < L.size(); ++p)
    for (Vertex q = p + 1; q < L.size(); ++q) {
      const auto& r = E(p, q);
      Extended lhs, rhs;
      if (r.pair_class == PairClass::bounded) {
        lhs = f[p] + f[q];
        rhs = f[r.s] + f[*L.join(p, q)];
      } else if (r.pair_class == PairClass::antipodal) {
        lhs = L.v(r.s, q) * f[p] + L.v(r.s, p) * f[q];
        rhs = (L.v(r.s, p) + L.v(r.s, q)) * f[r.s];
      } else {
        continue;
      }
      if (lhs.is_infinite()) continue;
      if (lhs < rhs) return SubmodularityViolation{SubmodularityViolation::Kind::inequality, p, q, std::nullopt, lhs, rhs};
    }
  return std::nullopt;
}

/// The three-condition characterisation: domain closure plus the special
/// inequalities.
inline std::optional<SubmodularityViolation> check_submodular_special(const ValuatedSemilattice& L, const Function& f,
                                                                       const EnvelopeTable& E) {
  if (auto v = check_domain_closure(L, f, E)) return v;
  return check_special_inequalities(L, f, E);
}

inline std::optional<SubmodularityViolation> check_submodular_special(const ValuatedSemilattice& L, const Function& f) {
  return check_submodular_special(L, f, EnvelopeTable(L));
}

/// (p,q) ◁ (u,t): u, t strictly inside I(p,q) and their coordinate midpoint
/// strictly above the segment from v_pq(p) to v_pq(q).
inline bool strictly_above(const EnvelopeReport& r, Vertex u, Vertex t) {
  auto inside = [&](Vertex x) { return x != r.p && x != r.q && r.coords.count(x); };
  if (!inside(u) || !inside(t)) return false;
  const Rational A = r.coords.at(r.p).first, B = r.coords.at(r.q).second;
  const auto& cu = r.coords.at(u);
  const auto& ct = r.coords.at(t);
  // 2 * midpoint, compared against the line B x + A y = A B
  return B * (cu.first + ct.first) + A * (cu.second + ct.second) > 2 * A * B;
}

struct Condition1PrimeViolation {
  Vertex p = 0, q = 0;
};

inline std::optional<Condition1PrimeViolation> check_condition_1prime(const ValuatedSemilattice& L, const Function& f,
                                                                      const EnvelopeTable& E) {
  for (Vertex p = 0; p < L.size(); ++p)
    for (Vertex q = p + 1; q < L.size(); ++q) {
      if (!in_dom(f, p) || !in_dom(f, q)) continue;
      const auto& r = E(p, q);
      if (r.envelope.size() <= 2) continue;
      const Vertex um = r.envelope[1], up = r.envelope[r.envelope.size() - 2];
      bool found = false;
      for (Vertex t = 0; t < L.size() && !found; ++t)
        found = in_dom(f, t) && (strictly_above(r, um, t) || strictly_above(r, up, t));
      if (!found) return Condition1PrimeViolation{p, q};
    }
  return std::nullopt;
}

inline std::optional<Condition1PrimeViolation> check_condition_1prime(const ValuatedSemilattice& L, const Function& f) {
  return check_condition_1prime(L, f, EnvelopeTable(L));
}

}  // namespace zeroext
