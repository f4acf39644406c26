#pragma once

// L-convexity of a function on an extended modular complex (one factor) or on
// its square (two factors, through the explicit product complex).

#include <zeroext/complex.hpp>
#include <zeroext/semilattice.hpp>

#include <deque>
#include <optional>
#include <string>
#include <vector>

namespace zeroext {

struct LConvexityViolation {
  enum class Kind { disconnected, not_submodular };
  Kind kind = Kind::disconnected;
  std::vector<std::vector<Vertex>> components;  // disconnected: components of dom f
  Vertex center = 0;                             // not_submodular: the p of L*_p
  std::string detail;
};

/// Components of dom f in the graph joining p, q whenever p ⊏ q or q ⊏ p.
inline std::vector<std::vector<Vertex>> domain_components(const ExtendedComplex& cx, const Function& f) {
  std::vector<int> comp(cx.size(), -1);
  std::vector<std::vector<Vertex>> out;
  for (Vertex s = 0; s < cx.size(); ++s) {
    if (!in_dom(f, s) || comp[s] >= 0) continue;
    out.emplace_back();
    comp[s] = static_cast<int>(out.size() - 1);
    std::deque<Vertex> queue{s};
    while (!queue.empty()) {
      auto x = queue.front();
      queue.pop_front();
      out.back().push_back(x);
      for (Vertex y = 0; y < cx.size(); ++y)
        if (in_dom(f, y) && comp[y] < 0 && (cx.rel(x, y) || cx.rel(y, x))) {
          comp[y] = comp[s];
          queue.push_back(y);
        }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

/// f*([a,b]) = f(a) + f(b) restricted to L*_p, in the element order of
/// principal_semilattice(cx, p, lstar).
inline Function lifted_on_lstar(const ExtendedComplex& cx, Vertex p, const Function& f) {
  Function out;
  for (Vertex a = 0; a < cx.size(); ++a)
    for (Vertex b = 0; b < cx.size(); ++b)
      if (cx.rel(a, b) && cx.precedes(a, p) && cx.precedes(p, b)) out.push_back(f[a] + f[b]);
  return out;
}

/// Keeps the semilattices L*_p and their envelope tables, for checking many
/// functions on one complex.
class LConvexChecker {
 public:
  explicit LConvexChecker(ExtendedComplex cx) : cx_(std::move(cx)) {
    for (Vertex p = 0; p < cx_.size(); ++p) {
      lstar_.push_back(principal_semilattice(cx_, p, Principal::lstar));
      tables_.emplace_back(lstar_.back());
    }
  }
  const ExtendedComplex& complex() const { return cx_; }

  std::optional<LConvexityViolation> operator()(const Function& f) const {
    if (f.size() != cx_.size()) throw Error("function size does not match the complex");
    auto comps = domain_components(cx_, f);
    if (comps.size() > 1) return LConvexityViolation{LConvexityViolation::Kind::disconnected, comps, 0, "dom f is disconnected"};
    for (Vertex p = 0; p < cx_.size(); ++p)
      if (auto v = check_submodular(lstar_[p], lifted_on_lstar(cx_, p, f), tables_[p]))
        return LConvexityViolation{LConvexityViolation::Kind::not_submodular, {}, p, v->describe(lstar_[p])};
    return std::nullopt;
  }

 private:
  ExtendedComplex cx_;
  std::vector<ValuatedSemilattice> lstar_;
  std::vector<EnvelopeTable> tables_;
};

inline std::optional<LConvexityViolation> check_lconvex(const ExtendedComplex& cx, const Function& f) {
  if (f.size() != cx.size()) throw Error("function size does not match the complex");
  auto comps = domain_components(cx, f);
  if (comps.size() > 1) return LConvexityViolation{LConvexityViolation::Kind::disconnected, comps, 0, "dom f is disconnected"};
  for (Vertex p = 0; p < cx.size(); ++p) {
    auto L = principal_semilattice(cx, p, Principal::lstar);
    if (auto v = check_submodular(L, lifted_on_lstar(cx, p, f)))
      return LConvexityViolation{LConvexityViolation::Kind::not_submodular, {}, p, v->describe(L)};
  }
  return std::nullopt;
}

/// Two-variable version: f is indexed by a * |V| + b, matching
/// product_complex(cx, cx).
inline std::optional<LConvexityViolation> check_lconvex2(const ExtendedComplex& cx, const Function& f) {
  if (f.size() != cx.size() * cx.size()) throw Error("table size must be |V|^2");
  return check_lconvex(product_complex(cx, cx), f);
}

}  // namespace zeroext
