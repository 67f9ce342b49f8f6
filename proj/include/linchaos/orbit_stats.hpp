#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "linchaos/orbit.hpp"

namespace linchaos {

// Set of indices within a horizon: explicit sorted list, or a log-norm
// threshold rule over an orbit.
class IndexSet {
 public:
  struct Threshold {
    std::shared_ptr<const OrbitEvaluator> orbit;
    bool below = true;  // {n : lognorm < tau} when true, i.e. strict, else >
    double tau_log = 0.0;
  };

  static IndexSet explicit_set(std::vector<Index> sorted) {
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i - 1] >= sorted[i])
        throw std::invalid_argument("IndexSet: indices must be strictly increasing");
    }
    IndexSet s;
    s.impl_ = std::move(sorted);
    return s;
  }

  static IndexSet threshold(std::shared_ptr<const OrbitEvaluator> orbit, bool below,
                            double tau_log) {
    IndexSet s;
    s.impl_ = Threshold{std::move(orbit), below, tau_log};
    return s;
  }

  // card(A ∩ [1, n])
  Index count_upto(Index n) const {
    if (const auto* v = std::get_if<std::vector<Index>>(&impl_)) {
      auto it = std::upper_bound(v->begin(), v->end(), n);
      Index c = Index(it - v->begin());
      if (!v->empty() && (*v)[0] == 0 && c > 0) --c;  // densities count from 1
      return c;
    }
    const auto& t = std::get<Threshold>(impl_);
    return t.below ? t.orbit->count_below(1, n + 1, t.tau_log)
                   : t.orbit->count_above(1, n + 1, t.tau_log);
  }

 private:
  std::variant<std::vector<Index>, Threshold> impl_;
};

// Finite-horizon estimates of upper/lower density; the labels are estimates
// of limsup/liminf, not limits.
struct DensityReport {
  Index horizon = 0;
  std::vector<Index> checkpoints;
  std::vector<Index> count_prefix;
  double udens_estimate = 0.0;
  double ldens_estimate = 0.0;
  Index warmup = 0;  // checkpoints below this are excluded from ldens
};

inline DensityReport density(const IndexSet& A, Index horizon,
                             const std::vector<Index>& checkpoints) {
  if (checkpoints.empty()) throw std::invalid_argument("density: empty checkpoint list");
  DensityReport rep;
  rep.horizon = horizon;
  rep.warmup = horizon / 10;
  double up = 0.0, lo = std::numeric_limits<double>::infinity();
  for (Index n : checkpoints) {
    if (n == 0 || n > horizon)
      throw std::invalid_argument("density: checkpoints must lie in [1, horizon]");
    Index c = A.count_upto(n);
    rep.checkpoints.push_back(n);
    rep.count_prefix.push_back(c);
    double ratio = double(c) / double(n);
    up = std::max(up, ratio);
    if (n >= rep.warmup) lo = std::min(lo, ratio);
  }
  if (!std::isfinite(lo)) lo = up;
  rep.udens_estimate = up;
  rep.ldens_estimate = std::min(lo, up);
  return rep;
}

// F^n_{xy}(tau) = (1/n) card{0 <= i <= n-1 : ||T^i x - T^i y|| < tau},
// strict inequality; computed on the difference orbit.
inline double distributional_function(const OperatorSpec& T, const SparseVector& x,
                                      const SparseVector& y, Index n, const LogReal& tau,
                                      std::uint64_t budget = kDefaultOrbitBudget) {
  if (n < 1) throw std::invalid_argument("distributional_function: n >= 1 required");
  if (!tau.is_positive()) throw std::invalid_argument("distributional_function: tau > 0 required");
  SparseVector d = x - y;
  OrbitEvaluator ev = OrbitEvaluator::make(T, d, n, budget);
  return double(ev.count_below(0, n, tau.log_mag())) / double(n);
}

}  // namespace linchaos
