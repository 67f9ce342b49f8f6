#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

#include "linchaos/log_real.hpp"

namespace linchaos {

using Index = std::uint64_t;

// Finitely supported coefficient sequence, 0-indexed. Entries are kept
// sorted by index and never hold sign-0 values.
class SparseVector {
 public:
  using Entry = std::pair<Index, LogReal>;

  SparseVector() = default;

  explicit SparseVector(std::vector<Entry> entries) : entries_(std::move(entries)) {
    normalize();
  }

  static SparseVector basis(Index i, LogReal coeff = LogReal::one()) {
    if (coeff.is_zero()) return SparseVector();
    return SparseVector({{i, coeff}});
  }

  static SparseVector from_linear(std::initializer_list<double> values) {
    std::vector<Entry> es;
    Index i = 0;
    for (double v : values) {
      if (v != 0.0) es.push_back({i, LogReal::from_linear(v)});
      ++i;
    }
    return SparseVector(std::move(es));
  }

  bool is_zero() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }

  // Largest support index; vector must be nonzero.
  Index max_support() const {
    if (entries_.empty()) throw std::logic_error("SparseVector: max_support of zero vector");
    return entries_.back().first;
  }

  LogReal at(Index i) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                               [](const Entry& e, Index j) { return e.first < j; });
    if (it != entries_.end() && it->first == i) return it->second;
    return LogReal::zero();
  }

  const std::vector<Entry>& entries() const { return entries_; }

  SparseVector scaled(const LogReal& alpha) const {
    if (alpha.is_zero()) return SparseVector();
    std::vector<Entry> es;
    es.reserve(entries_.size());
    for (const auto& [i, c] : entries_) es.push_back({i, c * alpha});
    SparseVector r;
    r.entries_ = std::move(es);
    return r;
  }

  bool operator==(const SparseVector& o) const { return entries_ == o.entries_; }

 private:
  void normalize() {
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    std::vector<Entry> merged;
    merged.reserve(entries_.size());
    for (const auto& e : entries_) {
      if (!merged.empty() && merged.back().first == e.first) {
        merged.back().second = merged.back().second + e.second;
      } else {
        merged.push_back(e);
      }
    }
    std::erase_if(merged, [](const Entry& e) { return e.second.is_zero(); });
    entries_ = std::move(merged);
  }

  std::vector<Entry> entries_;
};

// alpha*x + y. Entries cancelling below the log-sum-exp window are dropped.
inline SparseVector axpy(const LogReal& alpha, const SparseVector& x, const SparseVector& y,
                         double cancel_window = LogReal::kDefaultCancelWindow) {
  std::vector<SparseVector::Entry> es;
  es.reserve(x.support_size() + y.support_size());
  auto xi = x.entries().begin(), xe = x.entries().end();
  auto yi = y.entries().begin(), ye = y.entries().end();
  while (xi != xe || yi != ye) {
    if (yi == ye || (xi != xe && xi->first < yi->first)) {
      LogReal c = alpha * xi->second;
      if (!c.is_zero()) es.push_back({xi->first, c});
      ++xi;
    } else if (xi == xe || yi->first < xi->first) {
      es.push_back(*yi);
      ++yi;
    } else {
      LogReal c = (alpha * xi->second).add(yi->second, cancel_window);
      if (!c.is_zero()) es.push_back({xi->first, c});
      ++xi;
      ++yi;
    }
  }
  SparseVector r(std::move(es));
  return r;
}

inline SparseVector operator+(const SparseVector& x, const SparseVector& y) {
  return axpy(LogReal::one(), x, y);
}

inline SparseVector operator-(const SparseVector& x, const SparseVector& y) {
  return axpy(LogReal::from_linear(-1.0), y, x);
}

}  // namespace linchaos
