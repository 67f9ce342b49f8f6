#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "linchaos/log_real.hpp"
#include "linchaos/sparse_vector.hpp"

namespace linchaos {

// Run of identical weights.
struct WeightBlock {
  LogReal value;
  Index length = 0;
};

struct ConstantTail {
  LogReal value;
};

// value(i) = base * ratio^(i - tail_start)
struct GeometricTail {
  LogReal base;
  LogReal ratio;
};

// value(i) = (i + offset)^alpha. The prefix must cover every index with
// i + offset < 1.
struct PowerLawTail {
  double alpha = 0.0;
  std::int64_t offset = 0;
};

// Generated alternating blocks after the prefix: pair p >= 0 is a hi-block
// of length hi_len(p) followed by a lo-block of length lo_len(p), with
// affine length rules len(p) = mul*p + add.
struct AlternatingBlocksTail {
  struct LengthRule {
    Index mul = 0;
    Index add = 1;
    Index at(Index p) const { return mul * p + add; }
  };
  LogReal hi;
  LogReal lo;
  LengthRule hi_len;
  LengthRule lo_len;
};

using TailRule = std::variant<ConstantTail, GeometricTail, PowerLawTail, AlternatingBlocksTail>;

// Rule-based infinite positive sequence: an explicit run-length prefix
// followed by a closed-form tail. Everything downstream (norm products,
// operator-norm suprema, orbit profiles) queries terms and log-domain
// partial products through this class, in O(#prefix blocks) or better.
class WeightSequence {
 public:
  WeightSequence() : tail_(ConstantTail{LogReal::one()}) { finish(); }

  WeightSequence(std::vector<WeightBlock> prefix, TailRule tail)
      : prefix_(std::move(prefix)), tail_(std::move(tail)) {
    finish();
  }

  static WeightSequence constant(double c) {
    return WeightSequence({}, ConstantTail{LogReal::from_linear(c)});
  }

  static WeightSequence from_values(std::vector<double> values, TailRule tail) {
    std::vector<WeightBlock> blocks;
    for (double v : values) {
      LogReal lv = LogReal::from_linear(v);
      if (!blocks.empty() && blocks.back().value == lv) {
        blocks.back().length += 1;
      } else {
        blocks.push_back({lv, 1});
      }
    }
    return WeightSequence(std::move(blocks), std::move(tail));
  }

  Index tail_start() const { return tail_start_; }
  const std::vector<WeightBlock>& prefix_blocks() const { return prefix_; }
  const TailRule& tail() const { return tail_; }

  double log_at(Index i) const {
    if (i < tail_start_) {
      std::size_t b = block_of(i);
      return prefix_[b].value.log_mag();
    }
    return tail_log_at(i);
  }

  LogReal at(Index i) const { return LogReal::exp_of(log_at(i)); }

  // log of prod_{j=a}^{b} value(j), inclusive.
  double log_product(Index a, Index b) const {
    if (a > b) throw std::invalid_argument("WeightSequence: product with a > b");
    double total = 0.0;
    if (a < tail_start_) {
      Index pe = std::min<Index>(b, tail_start_ - 1);
      total += prefix_log_sum(a, pe);
      if (b < tail_start_) return total;
      a = tail_start_;
    }
    return total + tail_log_sum(a, b);
  }

  LogReal product(Index a, Index b) const { return LogReal::exp_of(log_product(a, b)); }

  // sup_i value(i); nullopt when the rule is unbounded.
  std::optional<LogReal> sup_value() const {
    LogReal best = LogReal::zero();
    for (const auto& blk : prefix_) best = max(best, blk.value);
    if (const auto* c = std::get_if<ConstantTail>(&tail_)) return max(best, c->value);
    if (const auto* g = std::get_if<GeometricTail>(&tail_)) {
      if (g->ratio > LogReal::one()) return std::nullopt;
      return max(best, g->base);
    }
    if (const auto* p = std::get_if<PowerLawTail>(&tail_)) {
      if (p->alpha > 0) return std::nullopt;
      return max(best, LogReal::exp_of(tail_log_at(tail_start_)));
    }
    const auto& alt = std::get<AlternatingBlocksTail>(tail_);
    return max(best, max(alt.hi, alt.lo));
  }

  // inf_i value(i); LogReal::zero() when the infimum is 0 (decaying tails).
  LogReal inf_value() const {
    LogReal best = prefix_.empty() ? LogReal::zero() : prefix_[0].value;
    for (const auto& blk : prefix_) best = min(best, blk.value);
    auto acc = [&](LogReal v) { return prefix_.empty() ? v : min(best, v); };
    if (const auto* c = std::get_if<ConstantTail>(&tail_)) return acc(c->value);
    if (const auto* g = std::get_if<GeometricTail>(&tail_)) {
      if (g->ratio < LogReal::one()) return LogReal::zero();
      return acc(g->base);
    }
    if (const auto* p = std::get_if<PowerLawTail>(&tail_)) {
      if (p->alpha < 0) return LogReal::zero();
      return acc(LogReal::exp_of(tail_log_at(tail_start_)));
    }
    const auto& alt = std::get<AlternatingBlocksTail>(tail_);
    return acc(min(alt.hi, alt.lo));
  }

  // sup_i value(i)/value(i+1) as a log, used for shift boundedness checks.
  double sup_consecutive_ratio_log() const {
    double best = -std::numeric_limits<double>::infinity();
    // Ratios at prefix block boundaries (within-block ratios are 0).
    for (std::size_t b = 0; b + 1 < prefix_.size(); ++b) {
      best = std::max(best, prefix_[b].value.log_mag() - prefix_[b + 1].value.log_mag());
    }
    if (!prefix_.empty()) {
      best = std::max(best, prefix_.back().value.log_mag() - tail_log_at(tail_start_));
    }
    best = std::max(best, 0.0);  // within-run ratio
    if (std::get_if<ConstantTail>(&tail_)) return best;
    if (const auto* g = std::get_if<GeometricTail>(&tail_)) {
      return std::max(best, -g->ratio.log_mag());
    }
    if (const auto* p = std::get_if<PowerLawTail>(&tail_)) {
      double start = p->alpha * (std::log(double(tail_start_ + p->offset)) -
                                 std::log(double(tail_start_ + p->offset + 1)));
      return std::max(best, std::max(start, 0.0));
    }
    const auto& alt = std::get<AlternatingBlocksTail>(tail_);
    return std::max(best, std::abs(alt.hi.log_mag() - alt.lo.log_mag()));
  }

  // Index boundaries where the term rule changes, clamped to [0, limit];
  // used for sliding-window supremum candidates and orbit profiles.
  std::vector<Index> change_points(Index limit) const {
    std::vector<Index> pts;
    for (Index s : starts_) {
      if (s <= limit) pts.push_back(s);
    }
    if (tail_start_ <= limit) pts.push_back(tail_start_);
    if (const auto* alt = std::get_if<AlternatingBlocksTail>(&tail_)) {
      Index pos = tail_start_;
      for (Index p = 0; pos <= limit; ++p) {
        Index h = alt->hi_len.at(p);
        if (pos + h > limit) {
          break;
        }
        pts.push_back(pos + h);
        Index l = alt->lo_len.at(p);
        pos += h + l;
        if (pos <= limit) pts.push_back(pos);
      }
    }
    return pts;
  }

  // Whether the term rule is piecewise constant (blocks + constant tail,
  // or generated alternating blocks); such sequences admit exact affine
  // orbit profiles.
  bool piecewise_constant() const {
    return std::holds_alternative<ConstantTail>(tail_) ||
           std::holds_alternative<AlternatingBlocksTail>(tail_);
  }

  // First generated block of the given phase with length >= n, as
  // (pair index, start position of that block).
  std::optional<std::pair<Index, Index>> first_run_at_least(Index n, bool hi_phase = true) const {
    const auto* alt = std::get_if<AlternatingBlocksTail>(&tail_);
    if (!alt) return std::nullopt;
    const auto& rule = hi_phase ? alt->hi_len : alt->lo_len;
    Index p;
    if (rule.at(0) >= n) {
      p = 0;
    } else if (rule.mul == 0) {
      return std::nullopt;
    } else {
      p = (n - rule.add + rule.mul - 1) / rule.mul;
    }
    Index start = tail_start_ + pair_cum_length(p);
    if (!hi_phase) start += alt->hi_len.at(p);
    return std::make_pair(p, start);
  }

 private:
  void finish() {
    starts_.clear();
    cum_log_.clear();
    Index pos = 0;
    double cl = 0.0;
    for (const auto& blk : prefix_) {
      if (blk.length == 0) throw std::invalid_argument("WeightSequence: empty block");
      if (!blk.value.is_positive()) throw std::invalid_argument("WeightSequence: weights must be positive");
      starts_.push_back(pos);
      cum_log_.push_back(cl);
      pos += blk.length;
      cl += double(blk.length) * blk.value.log_mag();
    }
    starts_.push_back(pos);
    cum_log_.push_back(cl);
    tail_start_ = pos;
    if (const auto* g = std::get_if<GeometricTail>(&tail_)) {
      if (!g->base.is_positive() || !g->ratio.is_positive())
        throw std::invalid_argument("WeightSequence: geometric tail must be positive");
    } else if (const auto* p = std::get_if<PowerLawTail>(&tail_)) {
      if (std::int64_t(tail_start_) + p->offset < 1)
        throw std::invalid_argument("WeightSequence: power-law tail needs index + offset >= 1");
    } else if (const auto* alt = std::get_if<AlternatingBlocksTail>(&tail_)) {
      if (!alt->hi.is_positive() || !alt->lo.is_positive())
        throw std::invalid_argument("WeightSequence: block values must be positive");
      if (alt->hi_len.at(0) == 0 || alt->lo_len.at(0) == 0)
        throw std::invalid_argument("WeightSequence: block lengths must be >= 1");
    } else if (const auto* c = std::get_if<ConstantTail>(&tail_)) {
      if (!c->value.is_positive())
        throw std::invalid_argument("WeightSequence: constant tail must be positive");
    }
  }

  std::size_t block_of(Index i) const {
    std::size_t lo = 0, hi = prefix_.size();
    while (lo + 1 < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (starts_[mid] <= i) lo = mid; else hi = mid;
    }
    return lo;
  }

  double prefix_log_sum(Index a, Index b) const {
    // Sum of logs over [a, b] within the prefix.
    std::size_t ba = block_of(a), bb = block_of(b);
    if (ba == bb) return double(b - a + 1) * prefix_[ba].value.log_mag();
    double s = double(starts_[ba + 1] - a) * prefix_[ba].value.log_mag();
    s += cum_log_[bb] - cum_log_[ba + 1];
    s += double(b - starts_[bb] + 1) * prefix_[bb].value.log_mag();
    return s;
  }

  double tail_log_at(Index i) const {
    if (const auto* c = std::get_if<ConstantTail>(&tail_)) return c->value.log_mag();
    if (const auto* g = std::get_if<GeometricTail>(&tail_)) {
      return g->base.log_mag() + double(i - tail_start_) * g->ratio.log_mag();
    }
    if (const auto* p = std::get_if<PowerLawTail>(&tail_)) {
      return p->alpha * std::log(double(std::int64_t(i) + p->offset));
    }
    const auto& alt = std::get<AlternatingBlocksTail>(tail_);
    Index off = i - tail_start_;
    Index p = pair_of(alt, off);
    Index within = off - pair_cum_length(p);
    return within < alt.hi_len.at(p) ? alt.hi.log_mag() : alt.lo.log_mag();
  }

  double tail_log_sum(Index a, Index b) const {
    double n = double(b - a + 1);
    if (const auto* c = std::get_if<ConstantTail>(&tail_)) return n * c->value.log_mag();
    if (const auto* g = std::get_if<GeometricTail>(&tail_)) {
      // Offsets from the tail start form an arithmetic progression.
      double oa = double(a - tail_start_), ob = double(b - tail_start_);
      return n * g->base.log_mag() + g->ratio.log_mag() * (oa + ob) * n / 2.0;
    }
    if (const auto* p = std::get_if<PowerLawTail>(&tail_)) {
      double lo = double(std::int64_t(a) + p->offset);
      double hi = double(std::int64_t(b) + p->offset);
      return p->alpha * (std::lgamma(hi + 1.0) - std::lgamma(lo));
    }
    const auto& alt = std::get<AlternatingBlocksTail>(tail_);
    Index oa = a - tail_start_, ob = b - tail_start_;
    Index pa = pair_of(alt, oa), pb = pair_of(alt, ob);
    if (pa == pb) return alt_partial(alt, pa, oa - pair_cum_length(pa), ob - pair_cum_length(pa));
    double s = alt_partial(alt, pa, oa - pair_cum_length(pa), pair_len(alt, pa) - 1);
    // Whole pairs between pa and pb; affine length sums are closed form.
    if (pb > pa + 1) {
      Index p1 = pa + 1, p2 = pb - 1;
      double cnt = double(p2 - p1 + 1);
      double psum = double(p1 + p2) * cnt / 2.0;
      double hi_total = double(alt.hi_len.mul) * psum + double(alt.hi_len.add) * cnt;
      double lo_total = double(alt.lo_len.mul) * psum + double(alt.lo_len.add) * cnt;
      s += hi_total * alt.hi.log_mag() + lo_total * alt.lo.log_mag();
    }
    s += alt_partial(alt, pb, 0, ob - pair_cum_length(pb));
    return s;
  }

  // Log-sum within pair p over local offsets [u, v] (inclusive).
  double alt_partial(const AlternatingBlocksTail& alt, Index p, Index u, Index v) const {
    Index h = alt.hi_len.at(p);
    double s = 0.0;
    if (u < h) {
      Index hv = std::min<Index>(v, h - 1);
      s += double(hv - u + 1) * alt.hi.log_mag();
    }
    if (v >= h) {
      Index lu = std::max<Index>(u, h);
      s += double(v - lu + 1) * alt.lo.log_mag();
    }
    return s;
  }

  Index pair_len(const AlternatingBlocksTail& alt, Index p) const {
    return alt.hi_len.at(p) + alt.lo_len.at(p);
  }

  // Total length of pairs 0..p-1.
  Index pair_cum_length(Index p) const {
    const auto& alt = std::get<AlternatingBlocksTail>(tail_);
    Index mul = alt.hi_len.mul + alt.lo_len.mul;
    Index add = alt.hi_len.add + alt.lo_len.add;
    return mul * (p * (p - 1) / 2) + add * p;
  }

  Index pair_of(const AlternatingBlocksTail& alt, Index off) const {
    Index lo = 0, hi = 1;
    while (pair_cum_length(hi) <= off) hi *= 2;
    while (lo + 1 < hi) {
      Index mid = lo + (hi - lo) / 2;
      if (pair_cum_length(mid) <= off) lo = mid; else hi = mid;
    }
    (void)alt;
    return lo;
  }

  std::vector<WeightBlock> prefix_;
  TailRule tail_;
  Index tail_start_ = 0;
  std::vector<Index> starts_;   // starts_[k] = first index of block k; last = tail start
  std::vector<double> cum_log_; // cum_log_[k] = sum of logs over blocks < k
};

}  // namespace linchaos
