#pragma once

#include <cmath>
#include <stdexcept>

#include "linchaos/log_real.hpp"
#include "linchaos/sparse_vector.hpp"
#include "linchaos/weight_sequence.hpp"

namespace linchaos {

enum class SpaceKind { ell_p, c0 };

// Weighted sequence space l^p(v) or c_0(v).
struct SpaceSpec {
  SpaceKind kind = SpaceKind::ell_p;
  double p = 2.0;
  WeightSequence v = WeightSequence::constant(1.0);

  static SpaceSpec ell(double p, WeightSequence v = WeightSequence::constant(1.0)) {
    if (p < 1.0) throw std::invalid_argument("SpaceSpec: p must be >= 1");
    return {SpaceKind::ell_p, p, std::move(v)};
  }

  static SpaceSpec c0v(WeightSequence v = WeightSequence::constant(1.0)) {
    return {SpaceKind::c0, 0.0, std::move(v)};
  }

  bool is_hilbert() const { return kind == SpaceKind::ell_p && p == 2.0; }
};

// (sum_i v_i |x_i|^p)^{1/p} for l^p(v), sup_i v_i |x_i| for c_0(v),
// accumulated by log-sum-exp over the finite support.
inline LogReal norm(const SparseVector& x, const SpaceSpec& s) {
  if (x.is_zero()) return LogReal::zero();
  if (s.kind == SpaceKind::c0) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [i, c] : x.entries()) {
      best = std::max(best, s.v.log_at(i) + c.log_mag());
    }
    return LogReal::exp_of(best);
  }
  LogReal acc = LogReal::zero();
  for (const auto& [i, c] : x.entries()) {
    acc = acc + LogReal::exp_of(s.v.log_at(i) + s.p * c.log_mag());
  }
  return acc.pow(1.0 / s.p);
}

}  // namespace linchaos
