#pragma once

// Exact linear programming: min c·x subject to Ax = b, x >= 0, solved by a
// dense-tableau two-phase primal simplex with Bland's rule over rationals.

#include <zeroext/errors.hpp>
#include <zeroext/rational.hpp>

#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace zeroext {

struct LinearProgram {
  struct Row {
    std::vector<std::pair<std::size_t, Rational>> coeffs;
    Rational rhs;
  };

  std::vector<std::string> names;
  std::vector<Rational> objective;
  std::vector<Row> rows;

  std::size_t variable_count() const { return names.size(); }

  std::size_t add_variable(std::string name, Rational cost) {
    names.push_back(std::move(name));
    objective.push_back(std::move(cost));
    return names.size() - 1;
  }
  void add_row(std::vector<std::pair<std::size_t, Rational>> coeffs, Rational rhs) {
    rows.push_back({std::move(coeffs), std::move(rhs)});
  }
};

struct LPResult {
  enum class Status { optimal, infeasible };
  Status status = Status::infeasible;
  Extended value = Extended::infinity();
  std::vector<Rational> primal;
};

namespace detail {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : cols_(cols), a_(rows, std::vector<Rational>(cols + 1)), basis_(rows) {}

  std::vector<Rational>& row(std::size_t r) { return a_[r]; }
  Rational& rhs(std::size_t r) { return a_[r][cols_]; }
  std::size_t rows() const { return a_.size(); }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c, std::vector<Rational>& cost) {
    auto& pr = a_[r];
    const Rational inv = 1 / pr[c];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j <= cols_; ++j)
      if (sgn(pr[j]) != 0) {
        pr[j] *= inv;
        nz.push_back(j);
      }
    auto eliminate = [&](std::vector<Rational>& target) {
      if (sgn(target[c]) == 0) return;
      const Rational factor = target[c];
      for (auto j : nz) target[j] -= factor * pr[j];
    };
    for (std::size_t i = 0; i < a_.size(); ++i)
      if (i != r) eliminate(a_[i]);
    eliminate(cost);
    basis_[r] = c;
  }

  /// Bland's rule on the columns allowed by `usable`. Returns false when
  /// unbounded.
  template <class Usable>
  bool optimise(std::vector<Rational>& cost, Usable usable) {
    for (;;) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j)
        if (usable(j) && sgn(cost[j]) < 0) {
          enter = j;
          break;
        }
      if (enter == cols_) return true;
      std::size_t leave = rows();
      Rational best;
      for (std::size_t i = 0; i < rows(); ++i) {
        if (sgn(a_[i][enter]) <= 0) continue;
        Rational ratio = a_[i][cols_] / a_[i][enter];
        if (leave == rows() || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows()) return false;
      pivot(leave, enter, cost);
    }
  }

  void drop_row(std::size_t r) {
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

 private:
  std::size_t cols_;
  std::vector<std::vector<Rational>> a_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

inline LPResult simplex_solve(const LinearProgram& lp) {
  const std::size_t n = lp.variable_count(), m = lp.rows.size();
  detail::Tableau T(m, n + m);
  for (std::size_t i = 0; i < m; ++i) {
    auto& row = T.row(i);
    for (const auto& [j, c] : lp.rows[i].coeffs) {
      if (j >= n) throw Error("constraint references an unknown variable");
      row[j] += c;
    }
    T.rhs(i) = lp.rows[i].rhs;
    if (sgn(T.rhs(i)) < 0)
      for (auto& x : row) x = -x;
    row[n + i] = 1;
    T.basis()[i] = n + i;
  }
  // phase one: minimise the sum of artificials
  std::vector<Rational> cost(n + m + 1);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= n + m; ++j)
      if (j < n || j == n + m) cost[j] -= T.row(i)[j];
  if (!T.optimise(cost, [&](std::size_t j) { return j < n; }))
    throw InternalInconsistency("phase one cannot be unbounded");
  LPResult result;
  if (sgn(cost[n + m]) != 0) return result;  // -cost[rhs] is the artificial sum
  // drive remaining artificials out of the basis, dropping redundant rows
  for (std::size_t i = T.rows(); i-- > 0;) {
    if (T.basis()[i] < n) continue;
    std::size_t col = n;
    for (std::size_t j = 0; j < n && col == n; ++j)
      if (sgn(T.row(i)[j]) != 0) col = j;
    if (col == n)
      T.drop_row(i);
    else
      T.pivot(i, col, cost);
  }
  // phase two
  cost.assign(n + m + 1, 0);
  for (std::size_t j = 0; j < n; ++j) cost[j] = lp.objective[j];
  for (std::size_t i = 0; i < T.rows(); ++i) {
    const auto b = T.basis()[i];
    if (sgn(cost[b]) == 0) continue;
    const Rational factor = cost[b];
    for (std::size_t j = 0; j <= n + m; ++j)
      if (sgn(T.row(i)[j]) != 0) cost[j] -= factor * T.row(i)[j];
  }
  if (!T.optimise(cost, [&](std::size_t j) { return j < n; })) throw Unbounded("linear program is unbounded");
  result.status = LPResult::Status::optimal;
  result.primal.assign(n, 0);
  for (std::size_t i = 0; i < T.rows(); ++i) result.primal[T.basis()[i]] = T.rhs(i);
  Rational value = 0;
  for (std::size_t j = 0; j < n; ++j) value += lp.objective[j] * result.primal[j];
  result.value = value;
  return result;
}

/// One line per constraint, rationals as p/q.
inline std::string dump(const LinearProgram& lp) {
  std::ostringstream os;
  os << "min";
  for (std::size_t j = 0; j < lp.variable_count(); ++j)
    if (sgn(lp.objective[j]) != 0) os << " + " << to_string(lp.objective[j]) << ' ' << lp.names[j];
  os << '\n';
  for (const auto& row : lp.rows) {
    for (const auto& [j, c] : row.coeffs) os << " + " << to_string(c) << ' ' << lp.names[j];
    os << " = " << to_string(row.rhs) << '\n';
  }
  return os.str();
}

}  // namespace zeroext
