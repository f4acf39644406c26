#pragma once

// Instances of the generalised 0-extension objective, exact evaluation, local
// minimisation over principal neighbourhoods, the ◇-steepest-descent driver,
// plain steepest descent and the brute-force oracle.

#include <zeroext/blp.hpp>
#include <zeroext/complex.hpp>
#include <zeroext/errors.hpp>
#include <zeroext/metric.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace zeroext {

using Assignment = std::vector<Vertex>;

struct UnaryTerm {
  enum class Kind { anchor, pair, hard_anchor, hard_pair };
  Kind kind = Kind::anchor;
  std::size_t var = 0;
  Vertex a = 0;  // anchor vertex, or first member of the pair
  Vertex b = 0;  // second member of the pair
  Rational weight = 1;
};

struct PairwiseTerm {
  std::size_t i = 0, j = 0;  // i < j
  Rational weight = 1;
};

struct Instance {
  Metric metric;
  std::vector<std::pair<Vertex, Vertex>> F;
  std::size_t n = 0;
  std::vector<UnaryTerm> unary;
  std::vector<PairwiseTerm> pairwise;

  /// Throws Error on the first structural problem.
  void validate() const {
    auto in_f = [&](Vertex a, Vertex b) {
      return std::any_of(F.begin(), F.end(), [&](const auto& p) {
        return (p.first == a && p.second == b) || (p.first == b && p.second == a);
      });
    };
    for (const auto& t : unary) {
      if (t.var >= n) throw Error("unary term on variable " + std::to_string(t.var) + " out of range");
      if (t.a >= metric.size() || t.b >= metric.size()) throw Error("unary term references an unknown vertex");
      if (t.weight < 0) throw Error("negative weight");
      const bool is_pair = t.kind == UnaryTerm::Kind::pair || t.kind == UnaryTerm::Kind::hard_pair;
      if (is_pair && !in_f(t.a, t.b)) throw Error("pair term on a set outside F");
    }
    for (const auto& t : pairwise) {
      if (!(t.i < t.j) || t.j >= n) throw Error("pairwise term needs variables i < j < n");
      if (t.weight < 0) throw Error("negative weight");
    }
  }

  Extended unary_cost(std::size_t i, Vertex x) const {
    Extended total = 0;
    for (const auto& t : unary) {
      if (t.var != i) continue;
      switch (t.kind) {
        case UnaryTerm::Kind::anchor: total += Extended(Rational(t.weight * metric(x, t.a))); break;
        case UnaryTerm::Kind::pair: total += Extended(Rational(t.weight * std::min(metric(x, t.a), metric(x, t.b)))); break;
        case UnaryTerm::Kind::hard_anchor:
          if (x != t.a) total = Extended::infinity();
          break;
        case UnaryTerm::Kind::hard_pair:
          if (x != t.a && x != t.b) total = Extended::infinity();
          break;
      }
    }
    return total;
  }
};

inline Extended evaluate(const Instance& inst, const Assignment& x) {
  if (x.size() != inst.n) throw Error("assignment has the wrong length");
  for (auto v : x)
    if (v >= inst.metric.size()) throw UnknownLabel(std::to_string(v));
  Extended total = 0;
  for (std::size_t i = 0; i < inst.n; ++i) total += inst.unary_cost(i, x[i]);
  for (const auto& t : inst.pairwise) total += Extended(Rational(t.weight * inst.metric(x[t.i], x[t.j])));
  return total;
}

inline Extended evaluate(const Instance& inst, const std::vector<std::string>& labels) {
  Assignment x;
  for (const auto& l : labels) x.push_back(inst.metric.index(l));
  return evaluate(inst, x);
}

/// The instance restricted to per-variable domains (sorted vertex lists).
inline Vcsp restrict_instance(const Instance& inst, const std::vector<std::vector<Vertex>>& domains) {
  Vcsp p;
  for (std::size_t i = 0; i < inst.n; ++i) {
    p.domains.emplace_back(domains[i].begin(), domains[i].end());
    p.unary.emplace_back();
    for (auto x : domains[i]) p.unary.back().push_back(inst.unary_cost(i, x));
  }
  std::map<std::pair<std::size_t, std::size_t>, Rational> weight;
  for (const auto& t : inst.pairwise) weight[{t.i, t.j}] += t.weight;
  for (const auto& [ij, w] : weight) {
    auto [i, j] = ij;
    Vcsp::Binary b{i, j, {}};
    for (auto x : domains[i])
      for (auto y : domains[j]) b.cost.push_back(Extended(Rational(w * inst.metric(x, y))));
    p.binary.push_back(std::move(b));
  }
  return p;
}

/// Exhaustive minimum of a restricted problem; the lexicographically least
/// minimiser wins ties. nullopt choice when every assignment costs +inf.
struct BruteResult {
  std::vector<std::size_t> choice;
  Extended value = Extended::infinity();
};

inline BruteResult brute_minimize(const Vcsp& p, std::size_t limit) {
  std::size_t total = 1;
  for (const auto& d : p.domains) {
    if (d.empty()) return {};
    if (total > limit / d.size()) throw DomainTooLarge("search space exceeds the brute-force limit");
    total *= d.size();
  }
  BruteResult best;
  std::vector<std::size_t> choice(p.size(), 0);
  for (;;) {
    auto value = p.evaluate(choice);
    if (best.choice.empty() || value < best.value) {
      best.choice = choice;
      best.value = value;
    }
    std::size_t i = p.size();
    while (i > 0 && ++choice[i - 1] == p.domains[i - 1].size()) choice[--i] = 0;
    if (i == 0) break;
  }
  if (best.value.is_infinite()) best.choice.clear();
  return best;
}

enum class LocalMethod { blp, brute };
enum class Region { plus, minus, box };

struct SolveOptions {
  LocalMethod local = LocalMethod::blp;
  std::size_t brute_limit = 1000000;
  std::size_t blp_budget = 5000;  // LP variables; larger problems fall back to brute force
  std::function<void(const Vcsp&)> on_local;
};

/// Per-variable domains of a principal neighbourhood. For box, lo and hi are
/// the corners (lo_i ⊑ y ⊑ hi_i).
inline std::vector<std::vector<Vertex>> region_domains(const ExtendedComplex& cx, Region region, const Assignment& x,
                                                       const Assignment& hi = {}) {
  std::vector<std::vector<Vertex>> D;
  for (std::size_t i = 0; i < x.size(); ++i) {
    switch (region) {
      case Region::plus: D.push_back(cx.plus(x[i])); break;
      case Region::minus: D.push_back(cx.minus(x[i])); break;
      case Region::box: {
        std::vector<Vertex> d;
        for (Vertex y = 0; y < cx.size(); ++y)
          if (cx.rel(x[i], y) && cx.rel(y, hi[i])) d.push_back(y);
        D.push_back(std::move(d));
        break;
      }
    }
  }
  return D;
}

struct LocalResult {
  Assignment assignment;  // empty when infeasible
  Extended value = Extended::infinity();
};

/// Exact minimiser of the instance over the product of the given domains.
inline LocalResult local_minimize(const Instance& inst, const std::vector<std::vector<Vertex>>& domains,
                                  const SolveOptions& opt) {
  auto problem = restrict_instance(inst, domains);
  if (opt.on_local) opt.on_local(problem);
  std::size_t lp_size = 0;
  for (const auto& d : problem.domains) lp_size += d.size();
  for (const auto& b : problem.binary) lp_size += b.cost.size();
  std::vector<std::size_t> choice;
  Extended value = Extended::infinity();
  if (opt.local == LocalMethod::blp && lp_size <= opt.blp_budget) {
    if (auto sol = extract_minimizer(problem)) {
      choice = sol->choice;
      value = sol->value;
    }
  } else {
    auto r = brute_minimize(problem, opt.brute_limit);
    choice = r.choice;
    value = r.value;
  }
  LocalResult out;
  out.value = value;
  for (std::size_t i = 0; i < choice.size(); ++i) out.assignment.push_back(domains[i][choice[i]]);
  return out;
}

inline LocalResult local_minimize(const Instance& inst, const ExtendedComplex& cx, const Assignment& x, Region region,
                                  const SolveOptions& opt, const Assignment& hi = {}) {
  return local_minimize(inst, region_domains(cx, region, x, hi), opt);
}

struct TraceStep {
  Assignment lower, upper, next;  // x⁻, x⁺ and the box minimiser (SDA: y⁻, y⁺, chosen)
  Extended value;                 // f(next)
};

struct SolveReport {
  Assignment assignment;
  Extended value;
  std::size_t iterations = 0;  // distinct points visited, the start included
  std::vector<TraceStep> trace;
};

namespace detail {
inline Extended require_feasible(const Instance& inst, const Assignment& start) {
  auto f = evaluate(inst, start);
  if (f.is_infinite()) throw InfeasibleStart("start point has infinite cost");
  return f;
}
}  // namespace detail

/// ◇-steepest descent: x⁻ over L⁻_x, x⁺ over L⁺_x, then the box between
/// them; stop once the box minimum no longer improves f(x).
inline SolveReport dsda(const Instance& inst, const ExtendedComplex& cx, const Assignment& start,
                        const SolveOptions& opt = {}) {
  SolveReport rep;
  rep.assignment = start;
  rep.value = detail::require_feasible(inst, start);
  rep.iterations = 1;
  for (;;) {
    if (rep.iterations > cx.size() * inst.n + 2) throw InternalInconsistency("descent does not terminate");
    auto lo = local_minimize(inst, cx, rep.assignment, Region::minus, opt);
    auto hi = local_minimize(inst, cx, rep.assignment, Region::plus, opt);
    auto mid = local_minimize(inst, cx, lo.assignment, Region::box, opt, hi.assignment);
    rep.trace.push_back({lo.assignment, hi.assignment, mid.assignment, mid.value});
    if (mid.value == rep.value) return rep;
    if (!(mid.value < rep.value)) throw InternalInconsistency("box minimum exceeds the current value");
    rep.assignment = mid.assignment;
    rep.value = mid.value;
    ++rep.iterations;
  }
}

/// Steepest descent: move to the better of y⁻ and y⁺ while it improves.
inline SolveReport sda(const Instance& inst, const ExtendedComplex& cx, const Assignment& start,
                       const SolveOptions& opt = {}) {
  SolveReport rep;
  rep.assignment = start;
  rep.value = detail::require_feasible(inst, start);
  rep.iterations = 1;
  for (;;) {
    auto lo = local_minimize(inst, cx, rep.assignment, Region::minus, opt);
    auto hi = local_minimize(inst, cx, rep.assignment, Region::plus, opt);
    const bool take_lo = lo.value < hi.value || (lo.value == hi.value && lo.assignment < hi.assignment);
    const auto& best = take_lo ? lo : hi;
    rep.trace.push_back({lo.assignment, hi.assignment, best.assignment, best.value});
    if (!(best.value < rep.value)) return rep;
    rep.assignment = best.assignment;
    rep.value = best.value;
    ++rep.iterations;
  }
}

struct BruteForceResult {
  Assignment assignment;  // empty when infeasible
  Extended value = Extended::infinity();
};

inline BruteForceResult brute_force_min(const Instance& inst, std::size_t limit = 1000000) {
  std::vector<std::vector<Vertex>> all(inst.n);
  for (auto& d : all)
    for (Vertex v = 0; v < inst.metric.size(); ++v) d.push_back(v);
  auto r = brute_minimize(restrict_instance(inst, all), limit);
  BruteForceResult out;
  out.value = r.value;
  for (auto c : r.choice) out.assignment.push_back(c);
  return out;
}

/// Per-variable projections of the minimiser set.
inline std::vector<std::vector<Vertex>> optimal_projections(const Instance& inst, std::size_t limit = 1000000) {
  auto best = brute_force_min(inst, limit);
  std::vector<std::vector<char>> seen(inst.n, std::vector<char>(inst.metric.size(), 0));
  if (best.value.is_finite()) {
    Assignment x(inst.n, 0);
    const auto m = inst.metric.size();
    for (;;) {
      if (evaluate(inst, x) == best.value)
        for (std::size_t i = 0; i < inst.n; ++i) seen[i][x[i]] = 1;
      std::size_t i = inst.n;
      while (i > 0 && ++x[i - 1] == m) x[--i] = 0;
      if (i == 0) break;
    }
  }
  std::vector<std::vector<Vertex>> out(inst.n);
  for (std::size_t i = 0; i < inst.n; ++i)
    for (Vertex v = 0; v < inst.metric.size(); ++v)
      if (seen[i][v]) out[i].push_back(v);
  return out;
}

/// 1 + max_i Δd(start_i, opt_i(f)).
inline std::size_t iteration_count_expected(const ExtendedComplex& cx, const Assignment& start, const Instance& inst,
                                            std::size_t limit = 1000000) {
  auto opt = optimal_projections(inst, limit);
  int worst = 0;
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (opt[i].empty()) throw InfeasibleStart("instance has no finite minimum");
    int best = -1;
    for (auto v : opt[i]) {
      int d = cx.delta_distance(start[i], v);
      if (best < 0 || d < best) best = d;
    }
    worst = std::max(worst, best);
  }
  return 1 + static_cast<std::size_t>(worst);
}

/// 1 + Δd from start to the minimiser set in the product complex, where Δd
/// of a product is the coordinate maximum. Agrees with the projected count
/// when n = 1 and can exceed it otherwise.
inline std::size_t iteration_count_joint(const ExtendedComplex& cx, const Assignment& start, const Instance& inst,
                                         std::size_t limit = 1000000) {
  auto best = brute_force_min(inst, limit);
  if (best.value.is_infinite()) throw InfeasibleStart("instance has no finite minimum");
  int closest = -1;
  Assignment x(inst.n, 0);
  const auto m = inst.metric.size();
  for (;;) {
    if (evaluate(inst, x) == best.value) {
      int d = 0;
      for (std::size_t i = 0; i < inst.n; ++i) d = std::max(d, cx.delta_distance(start[i], x[i]));
      if (closest < 0 || d < closest) closest = d;
    }
    std::size_t i = inst.n;
    while (i > 0 && ++x[i - 1] == m) x[--i] = 0;
    if (i == 0) break;
  }
  return 1 + static_cast<std::size_t>(closest);
}

/// Least feasible start: each variable takes its first value allowed by the
/// hard terms. nullopt when some variable has none.
inline std::optional<Assignment> default_start(const Instance& inst) {
  Assignment x;
  for (std::size_t i = 0; i < inst.n; ++i) {
    std::optional<Vertex> pick;
    for (Vertex v = 0; v < inst.metric.size() && !pick; ++v)
      if (inst.unary_cost(i, v).is_finite()) pick = v;
    if (!pick) return std::nullopt;
    x.push_back(*pick);
  }
  return x;
}

}  // namespace zeroext
