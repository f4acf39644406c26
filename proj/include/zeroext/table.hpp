#pragma once

#include <cstddef>
#include <vector>

namespace zeroext {

using Vertex = std::size_t;

/// Dense square table indexed by vertex pairs.
template <class T>
class SquareTable {
 public:
  SquareTable() = default;
  explicit SquareTable(std::size_t n, const T& init = T{}) : n_(n), data_(n * n, init) {}

  std::size_t size() const { return n_; }

  decltype(auto) operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  decltype(auto) operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  friend bool operator==(const SquareTable& a, const SquareTable& b) { return a.n_ == b.n_ && a.data_ == b.data_; }

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

/// Boolean relation on {0..n-1}. Stored as char to avoid vector<bool> proxies.
using Relation = SquareTable<char>;

}  // namespace zeroext
