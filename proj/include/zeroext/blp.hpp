#pragma once

// Basic LP relaxation of a unary/binary valued CSP and extraction of an
// integral minimiser by iterative fixing.

#include <zeroext/errors.hpp>
#include <zeroext/lp.hpp>
#include <zeroext/rational.hpp>

#include <optional>
#include <string>
#include <vector>

namespace zeroext {

/// Valued CSP with per-variable finite domains. Values are opaque ids; the
/// order of each domain is the tie-breaking order.
struct Vcsp {
  struct Binary {
    std::size_t i = 0, j = 0;
    std::vector<Extended> cost;  // cost[a * |D_j| + b]
  };

  std::vector<std::vector<std::size_t>> domains;
  std::vector<std::vector<Extended>> unary;  // unary[i][a], aligned with domains[i]
  std::vector<Binary> binary;

  std::size_t size() const { return domains.size(); }

  /// choice[i] is a position in domains[i].
  Extended evaluate(const std::vector<std::size_t>& choice) const {
    Extended total = 0;
    for (std::size_t i = 0; i < size(); ++i) total += unary[i][choice[i]];
    for (const auto& t : binary) total += t.cost[choice[t.i] * domains[t.j].size() + choice[t.j]];
    return total;
  }

  /// Same problem with variable i restricted to the single position a.
  Vcsp fixed(std::size_t i, std::size_t a) const {
    Vcsp out = *this;
    for (std::size_t b = 0; b < out.unary[i].size(); ++b)
      if (b != a) out.unary[i][b] = Extended::infinity();
    return out;
  }
};

struct BlpModel {
  LinearProgram lp;
  std::vector<std::vector<std::optional<std::size_t>>> marginal;  // λ_i(a), absent when fixed to 0
};

inline BlpModel build_blp(const Vcsp& p) {
  BlpModel M;
  M.marginal.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.unary[i].size() != p.domains[i].size()) throw Error("unary table does not match its domain");
    std::vector<std::pair<std::size_t, Rational>> row;
    M.marginal[i].resize(p.domains[i].size());
    for (std::size_t a = 0; a < p.domains[i].size(); ++a) {
      if (p.unary[i][a].is_infinite()) continue;
      auto id = M.lp.add_variable("x" + std::to_string(i) + "_" + std::to_string(p.domains[i][a]), p.unary[i][a].value());
      M.marginal[i][a] = id;
      row.emplace_back(id, 1);
    }
    if (row.empty()) throw EmptyDomain(i);
    M.lp.add_row(std::move(row), 1);
  }
  for (std::size_t t = 0; t < p.binary.size(); ++t) {
    const auto& term = p.binary[t];
    const auto di = p.domains[term.i].size(), dj = p.domains[term.j].size();
    if (term.cost.size() != di * dj) throw Error("binary table does not match its domains");
    std::vector<std::vector<std::pair<std::size_t, Rational>>> by_a(di), by_b(dj);
    for (std::size_t a = 0; a < di; ++a)
      for (std::size_t b = 0; b < dj; ++b) {
        const auto& c = term.cost[a * dj + b];
        if (c.is_infinite() || !M.marginal[term.i][a] || !M.marginal[term.j][b]) continue;
        auto id = M.lp.add_variable("t" + std::to_string(t) + "_" + std::to_string(p.domains[term.i][a]) + "_" +
                                        std::to_string(p.domains[term.j][b]),
                                    c.value());
        by_a[a].emplace_back(id, 1);
        by_b[b].emplace_back(id, 1);
      }
    for (std::size_t a = 0; a < di; ++a)
      if (auto m = M.marginal[term.i][a]) {
        by_a[a].emplace_back(*m, -1);
        M.lp.add_row(std::move(by_a[a]), 0);
      }
    for (std::size_t b = 0; b < dj; ++b)
      if (auto m = M.marginal[term.j][b]) {
        by_b[b].emplace_back(*m, -1);
        M.lp.add_row(std::move(by_b[b]), 0);
      }
  }
  return M;
}

/// LP optimum; +inf when the relaxation is infeasible or a domain is empty.
inline Extended blp_value(const Vcsp& p) {
  try {
    return simplex_solve(build_blp(p).lp).value;
  } catch (const EmptyDomain&) {
    return Extended::infinity();
  }
}

struct BlpSolution {
  std::vector<std::size_t> choice;  // positions in the domains
  Extended value;
  std::size_t lp_solves = 0;
};

/// Fixes variables in order, each to the first value that keeps the LP
/// optimum. Returns nullopt when the relaxation is infeasible.
inline std::optional<BlpSolution> extract_minimizer(const Vcsp& problem) {
  BlpSolution sol;
  const Extended target = blp_value(problem);
  ++sol.lp_solves;
  if (target.is_infinite()) return std::nullopt;
  Vcsp current = problem;
  for (std::size_t i = 0; i < current.size(); ++i) {
    std::optional<std::size_t> chosen;
    std::size_t finite = 0, last = 0;
    for (std::size_t a = 0; a < current.domains[i].size(); ++a)
      if (current.unary[i][a].is_finite()) {
        ++finite;
        last = a;
      }
    if (finite == 1) chosen = last;
    for (std::size_t a = 0; a < current.domains[i].size() && !chosen; ++a) {
      if (current.unary[i][a].is_infinite()) continue;
      auto trial = current.fixed(i, a);
      ++sol.lp_solves;
      if (blp_value(trial) == target) chosen = a;
    }
    if (!chosen) throw TightnessViolated("no value of variable " + std::to_string(i) + " preserves the LP optimum");
    current = current.fixed(i, *chosen);
    sol.choice.push_back(*chosen);
  }
  sol.value = problem.evaluate(sol.choice);
  if (sol.value != target) throw TightnessViolated("extracted assignment costs " + sol.value.str() + ", LP optimum " + target.str());
  return sol;
}

}  // namespace zeroext
