#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <variant>
#include <vector>

#include "linchaos/operator_spec.hpp"

namespace linchaos {

class budget_error : public std::runtime_error {
 public:
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr std::uint64_t kDefaultOrbitBudget = std::uint64_t(1) << 26;
inline constexpr Index kIndexInf = std::numeric_limits<Index>::max();
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Horizon-indexed log-norm trace n -> log ||T^n x||; -inf marks exact zero.
struct OrbitRecord {
  SparseVector seed;
  Index horizon = 0;
  std::vector<double> lognorms;  // size horizon + 1
};

// log ||T^n x|| = a + b * (n - begin) on [begin, end); a = -inf on zero
// stretches.
struct ProfileSegment {
  Index begin = 0;
  Index end = 0;  // exclusive; kIndexInf for a final infinite segment
  double a = kNegInf;
  double b = 0.0;

  double value(Index n) const { return a == kNegInf ? kNegInf : a + b * double(n - begin); }
};

namespace detail {

// One support entry's contribution to the orbit norm, as a piecewise-affine
// function of the step count. Slopes come from the weight rules, intercepts
// are re-anchored at every breakpoint from exact log products, so values
// never drift across long segments.
struct Branch {
  std::vector<ProfileSegment> pieces;  // cover [0, death)
  Index death = kIndexInf;

  double value(Index n) const {
    if (n >= death) return kNegInf;
    auto it = std::upper_bound(pieces.begin(), pieces.end(), n,
                               [](Index v, const ProfileSegment& s) { return v < s.begin; });
    return std::prev(it)->value(n);
  }
};

inline double vshare_exponent(const SpaceSpec& s) {
  return s.kind == SpaceKind::c0 ? 1.0 : 1.0 / s.p;
}

// Rule-derived slope of (1/p) log v at index i -> i+dir inside a region with
// no change points; only constant and geometric pieces are profile-exact.
inline std::optional<double> v_step_log(const WeightSequence& v, Index i_from, Index i_to) {
  // Requires |i_to - i_from| == 1 and both on the same side of all change
  // points; callers arrange breakpoints so this holds within a piece.
  if (std::holds_alternative<PowerLawTail>(v.tail())) {
    if (std::max(i_from, i_to) >= v.tail_start()) return std::nullopt;
  }
  if (i_from < v.tail_start() && i_to < v.tail_start()) return 0.0;  // same const block
  if (const auto* g = std::get_if<GeometricTail>(&v.tail())) {
    if (i_from >= v.tail_start() && i_to >= v.tail_start()) {
      return (i_to > i_from ? 1.0 : -1.0) * g->ratio.log_mag();
    }
  }
  if (i_from >= v.tail_start() && i_to >= v.tail_start()) return 0.0;  // const/alt tail
  return 0.0;  // crossing prefix/tail boundary: breakpoint sits here anyway
}

}  // namespace detail

// Exact piecewise-affine profile of n -> log ||T^n x||. Available for shift
// operators whose touched weight regions are piecewise constant (or
// geometric for the space weights), with the extra requirement that all
// live branches share a slope wherever the support has more than one entry
// (true for constant-weight operators and for plain shifts on geometric
// spaces). Returns nullopt otherwise; callers then fall back to enumeration.
class OrbitProfile {
 public:
  const std::vector<ProfileSegment>& segments() const { return segs_; }
  Index built_to() const { return built_to_; }

  double log_norm(Index n) const {
    return seg_at(n).value(n);
  }

  // count of n in [lo, hi) with log value strictly below tau.
  Index count_below(Index lo, Index hi, double tau) const {
    return count(lo, hi, tau, true);
  }
  Index count_above(Index lo, Index hi, double tau) const {
    return count(lo, hi, tau, false);
  }

  std::optional<Index> first_below(Index from, Index to, double tau) const {
    return first(from, to, tau, true);
  }
  std::optional<Index> first_above(Index from, Index to, double tau) const {
    return first(from, to, tau, false);
  }

  double max_log(Index lo, Index hi) const {
    check_range(lo, hi);
    double best = kNegInf;
    for (const auto& s : segs_) {
      Index a = std::max(lo, s.begin), b = std::min(hi, seg_end(s));
      if (a >= b) continue;
      best = std::max(best, std::max(s.value(a), s.value(b - 1)));
    }
    return best;
  }

  double min_log(Index lo, Index hi) const {
    check_range(lo, hi);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : segs_) {
      Index a = std::max(lo, s.begin), b = std::min(hi, seg_end(s));
      if (a >= b) continue;
      best = std::min(best, std::min(s.value(a), s.value(b - 1)));
    }
    return best;
  }

  std::vector<Index> boundaries(Index limit) const {
    std::vector<Index> pts;
    for (const auto& s : segs_) {
      if (s.begin > 0 && s.begin <= limit) pts.push_back(s.begin);
    }
    return pts;
  }

  static std::optional<OrbitProfile> build(const OperatorSpec& T, const SparseVector& x,
                                           Index horizon);

 private:
  static Index seg_end(const ProfileSegment& s) { return s.end; }

  void check_range(Index lo, Index hi) const {
    if (hi > built_to_ && built_to_ != kIndexInf)
      throw std::out_of_range("OrbitProfile: query beyond built horizon");
    (void)lo;
  }

  const ProfileSegment& seg_at(Index n) const {
    check_range(n, n + 1);
    auto it = std::upper_bound(segs_.begin(), segs_.end(), n,
                               [](Index v, const ProfileSegment& s) { return v < s.begin; });
    return *std::prev(it);
  }

  // First n in [a,b) within one affine segment satisfying the comparison,
  // with neighbour adjustment against floating error at the boundary.
  static std::optional<Index> seg_first(const ProfileSegment& s, Index a, Index b, double tau,
                                        bool below) {
    auto ok = [&](Index n) {
      double v = s.value(n);
      return below ? v < tau : v > tau;
    };
    if (a >= b) return std::nullopt;
    if (s.a == kNegInf) return below ? std::optional<Index>(a) : std::nullopt;
    if (s.b == 0.0) return ok(a) ? std::optional<Index>(a) : std::nullopt;
    bool improving = below ? (s.b < 0.0) : (s.b > 0.0);
    if (ok(a)) return a;
    if (!improving) return std::nullopt;
    // value crosses tau once; locate by closed form then adjust.
    double t = (tau - s.a) / s.b;  // crossing offset from s.begin
    double fa = double(a - s.begin);
    double guess = std::max(fa, t);
    Index n = s.begin + Index(std::min(guess, double(b - s.begin)));
    Index lo = (n > s.begin + 2) ? n - 2 : s.begin;
    for (Index m = std::max(lo, a); m < b; ++m) {
      if (ok(m)) return m;
      if (m > n + 2) break;
    }
    for (Index m = std::max(lo, a); m < b; ++m) {
      if (ok(m)) return m;
    }
    return std::nullopt;
  }

  Index count(Index lo, Index hi, double tau, bool below) const {
    check_range(lo, hi);
    Index total = 0;
    for (const auto& s : segs_) {
      Index a = std::max(lo, s.begin), b = std::min(hi, s.end);
      if (a >= b) continue;
      total += seg_count(s, a, b, tau, below);
    }
    return total;
  }

  static Index seg_count(const ProfileSegment& s, Index a, Index b, double tau, bool below) {
    auto ok = [&](Index n) {
      double v = s.value(n);
      return below ? v < tau : v > tau;
    };
    if (s.a == kNegInf) return below ? b - a : 0;
    if (s.b == 0.0) return ok(a) ? b - a : 0;
    // Monotone within the segment: qualifying n form a prefix or suffix.
    bool rising = s.b > 0.0;
    bool prefix_qualifies = below ? rising : !rising;
    double t = (tau - s.a) / s.b;  // real crossing offset
    double off = t - double(a - s.begin);
    Index len = b - a;
    auto clamp_cnt = [&](double c) -> Index {
      if (c <= 0) return 0;
      if (c >= double(len)) return len;
      return Index(c);
    };
    Index cnt = clamp_cnt(prefix_qualifies ? std::ceil(off) : double(len) - std::floor(off) - 1.0);
    // Adjust around the boundary for floating-point edge cases.
    if (prefix_qualifies) {
      while (cnt < len && ok(a + cnt)) ++cnt;
      while (cnt > 0 && !ok(a + cnt - 1)) --cnt;
    } else {
      while (cnt < len && ok(b - cnt - 1)) ++cnt;
      while (cnt > 0 && !ok(b - cnt)) --cnt;
    }
    return cnt;
  }

  std::optional<Index> first(Index from, Index to, double tau, bool below) const {
    check_range(from, to);
    for (const auto& s : segs_) {
      Index a = std::max(from, s.begin), b = std::min(to, s.end);
      if (a >= b) continue;
      auto r = seg_first(s, a, b, tau, below);
      if (r) return r;
    }
    return std::nullopt;
  }

  std::vector<ProfileSegment> segs_;
  Index built_to_ = kIndexInf;
};

inline std::optional<OrbitProfile> OrbitProfile::build(const OperatorSpec& T,
                                                       const SparseVector& x, Index horizon) {
  using detail::Branch;
  if (!T.is_shift()) return std::nullopt;
  const auto& sp = T.space;
  if (std::holds_alternative<PowerLawTail>(sp.v.tail())) return std::nullopt;
  const bool weighted = T.kind != OperatorKind::backward_shift;
  if (weighted && (std::holds_alternative<PowerLawTail>(T.weights.tail()) ||
                   std::holds_alternative<GeometricTail>(T.weights.tail())))
    return std::nullopt;

  const bool forward = T.kind == OperatorKind::weighted_forward_shift;
  const double vs = detail::vshare_exponent(sp);

  OrbitProfile prof;
  if (x.is_zero()) {
    prof.segs_.push_back({0, kIndexInf, kNegInf, 0.0});
    prof.built_to_ = kIndexInf;
    return prof;
  }

  // Per-branch breakpoints in n, from weight-rule change points.
  std::vector<Branch> branches;
  bool infinite_cover = true;
  for (const auto& [j, c] : x.entries()) {
    Branch br;
    std::set<Index> brk;
    brk.insert(0);
    if (forward) {
      br.death = kIndexInf;
      Index limit_pos = (horizon == kIndexInf) ? 0 : j + horizon + 2;
      if (horizon == kIndexInf &&
          (std::holds_alternative<AlternatingBlocksTail>(sp.v.tail()) ||
           (weighted && std::holds_alternative<AlternatingBlocksTail>(T.weights.tail()))))
        return std::nullopt;  // unbounded change points, need a horizon
      auto add_pos = [&](Index pos) {
        if (pos > j) brk.insert(pos - j);
        if (pos > j + 1) brk.insert(pos - j - 1);
      };
      for (Index cp : sp.v.change_points(limit_pos)) add_pos(cp);
      if (weighted) {
        for (Index cp : T.weights.change_points(limit_pos)) add_pos(cp);
      }
      if (std::holds_alternative<AlternatingBlocksTail>(sp.v.tail()) ||
          (weighted && std::holds_alternative<AlternatingBlocksTail>(T.weights.tail()))) {
        infinite_cover = false;
      }
    } else {
      br.death = j + 1;
      auto add_pos = [&](Index pos) {
        if (pos <= j) brk.insert(j - pos);
        if (pos + 1 <= j) brk.insert(j - pos - 1);
        if (pos + 1 <= j + 1 && j + 1 >= pos + 1) brk.insert(j + 1 - (pos + 1));
      };
      for (Index cp : sp.v.change_points(j + 1)) add_pos(cp);
      if (weighted) {
        for (Index cp : T.weights.change_points(j + 1)) add_pos(cp);
      }
    }

    // Exact value of this branch at step n.
    auto val = [&](Index n) -> double {
      Index pos = forward ? j + n : j - n;
      double v = c.abs().log_mag() + vs * sp.v.log_at(pos);
      if (weighted && n >= 1) {
        v += forward ? T.weights.log_product(j, j + n - 1) : T.weights.log_product(j - n + 1, j);
      }
      return v;
    };
    // Rule-derived slope for the piece starting at n (valid until the next
    // breakpoint).
    auto slope = [&](Index n) -> std::optional<double> {
      Index i_from = forward ? j + n : j - n;
      Index i_to = forward ? j + n + 1 : j - n - 1;
      auto dv = detail::v_step_log(sp.v, i_from, i_to);
      if (!dv) return std::nullopt;
      double s = vs * *dv;
      if (weighted) s += forward ? T.weights.log_at(j + n) : T.weights.log_at(j - n);
      return s;
    };

    std::vector<Index> bks(brk.begin(), brk.end());
    Index cover = forward ? (horizon == kIndexInf ? kIndexInf : horizon + 1) : br.death;
    for (std::size_t t = 0; t < bks.size(); ++t) {
      Index b0 = bks[t];
      if (b0 >= cover) break;
      Index b1 = (t + 1 < bks.size()) ? std::min(bks[t + 1], cover) : cover;
      if (b1 <= b0) continue;
      ProfileSegment seg;
      seg.begin = b0;
      seg.end = b1;
      seg.a = val(b0);
      if (b1 == b0 + 1) {
        seg.b = 0.0;
      } else {
        auto sl = slope(b0);
        if (!sl) return std::nullopt;
        seg.b = *sl;
      }
      br.pieces.push_back(seg);
    }
    branches.push_back(std::move(br));
  }

  // Merge branches; every region must be single-sloped.
  std::set<Index> cuts;
  cuts.insert(0);
  Index cover_to = kIndexInf;
  if (!infinite_cover || horizon != kIndexInf) cover_to = horizon == kIndexInf ? 0 : horizon + 1;
  bool all_die = true;
  Index max_death = 0;
  for (const auto& br : branches) {
    for (const auto& p : br.pieces) {
      cuts.insert(p.begin);
      if (p.end != kIndexInf) cuts.insert(p.end);
    }
    if (br.death == kIndexInf) {
      all_die = false;
    } else {
      cuts.insert(br.death);
      max_death = std::max(max_death, br.death);
    }
  }
  if (all_die) cover_to = kIndexInf;  // zero tail covers the rest exactly

  const double p_exp = sp.kind == SpaceKind::c0 ? 1.0 : sp.p;
  std::vector<Index> cut_list(cuts.begin(), cuts.end());
  for (std::size_t t = 0; t < cut_list.size(); ++t) {
    Index r0 = cut_list[t];
    Index r1 = (t + 1 < cut_list.size()) ? cut_list[t + 1] : cover_to;
    if (cover_to != kIndexInf) {
      if (r0 >= cover_to) break;
      r1 = std::min(r1, cover_to);
    }
    if (r1 != kIndexInf && r1 <= r0) continue;

    std::optional<double> common_slope;
    bool mixed = false;
    double acc = kNegInf;  // log of sum exp(p * branch value) at r0
    int live = 0;
    for (const auto& br : branches) {
      if (r0 >= br.death) continue;
      ++live;
      double v0 = br.value(r0);
      // Locate the branch piece to read its slope.
      double b = 0.0;
      for (const auto& pc : br.pieces) {
        if (r0 >= pc.begin && r0 < pc.end) {
          b = pc.b;
          break;
        }
      }
      if (r1 != r0 + 1) {  // slope only matters on length > 1
        if (!common_slope) {
          common_slope = b;
        } else if (*common_slope != b) {
          mixed = true;
        }
      }
      if (sp.kind == SpaceKind::c0) {
        acc = std::max(acc, v0);
      } else {
        double term = p_exp * v0;
        acc = acc == kNegInf ? term
                             : std::max(acc, term) + std::log1p(std::exp(std::min(acc, term) -
                                                                         std::max(acc, term)));
      }
    }
    if (mixed) return std::nullopt;
    ProfileSegment seg;
    seg.begin = r0;
    seg.end = r1;
    if (live == 0) {
      seg.a = kNegInf;
      seg.b = 0.0;
      seg.end = kIndexInf;
      prof.segs_.push_back(seg);
      break;
    }
    seg.a = sp.kind == SpaceKind::c0 ? acc : acc / p_exp;
    seg.b = common_slope.value_or(0.0);
    prof.segs_.push_back(seg);
  }
  prof.built_to_ = prof.segs_.empty() ? 0 : prof.segs_.back().end;
  if (prof.built_to_ != kIndexInf && horizon != kIndexInf && prof.built_to_ < horizon + 1)
    return std::nullopt;
  return prof;
}

// Materialized orbit by iterated application. The budget caps
// (steps x support size) work; exceeded -> budget_error.
inline OrbitRecord orbit_enumerated(const OperatorSpec& T, const SparseVector& x, Index N,
                                    std::uint64_t budget = kDefaultOrbitBudget) {
  OrbitRecord rec;
  rec.seed = x;
  rec.horizon = N;
  rec.lognorms.reserve(N + 1);
  SparseVector cur = x;
  std::uint64_t used = 0;
  for (Index n = 0; n <= N; ++n) {
    rec.lognorms.push_back(norm(cur, T.space).log_mag());
    if (n == N) break;
    used += cur.support_size() + 1;
    if (used > budget) throw budget_error("orbit: step x support budget exceeded");
    cur = apply(T, cur);
  }
  return rec;
}

// Orbit record via the closed-form profile when available (identical values,
// cheaper), else enumeration.
inline OrbitRecord orbit(const OperatorSpec& T, const SparseVector& x, Index N,
                         std::uint64_t budget = kDefaultOrbitBudget) {
  if (auto prof = OrbitProfile::build(T, x, N)) {
    OrbitRecord rec;
    rec.seed = x;
    rec.horizon = N;
    rec.lognorms.reserve(N + 1);
    if (std::uint64_t(N) + 1 > budget) throw budget_error("orbit: horizon exceeds budget");
    for (Index n = 0; n <= N; ++n) rec.lognorms.push_back(prof->log_norm(n));
    return rec;
  }
  return orbit_enumerated(T, x, N, budget);
}

// Uniform query surface over either an exact profile or a materialized
// record; detectors and criteria checks run against this.
class OrbitEvaluator {
 public:
  static OrbitEvaluator make(const OperatorSpec& T, const SparseVector& x, Index horizon,
                             std::uint64_t budget = kDefaultOrbitBudget) {
    OrbitEvaluator ev;
    if (auto prof = OrbitProfile::build(T, x, horizon)) {
      ev.impl_ = std::move(*prof);
      return ev;
    }
    ev.impl_ = orbit_enumerated(T, x, horizon, budget);
    return ev;
  }

  static OrbitEvaluator from_record(OrbitRecord rec) {
    OrbitEvaluator ev;
    ev.impl_ = std::move(rec);
    return ev;
  }

  bool closed_form() const { return std::holds_alternative<OrbitProfile>(impl_); }

  double log_norm(Index n) const {
    if (const auto* p = std::get_if<OrbitProfile>(&impl_)) return p->log_norm(n);
    const auto& r = std::get<OrbitRecord>(impl_);
    if (n > r.horizon) throw std::out_of_range("OrbitEvaluator: beyond horizon");
    return r.lognorms[n];
  }

  Index count_below(Index lo, Index hi, double tau) const {
    if (const auto* p = std::get_if<OrbitProfile>(&impl_)) return p->count_below(lo, hi, tau);
    const auto& r = rec(hi);
    Index c = 0;
    for (Index n = lo; n < hi; ++n) c += r.lognorms[n] < tau;
    return c;
  }

  Index count_above(Index lo, Index hi, double tau) const {
    if (const auto* p = std::get_if<OrbitProfile>(&impl_)) return p->count_above(lo, hi, tau);
    const auto& r = rec(hi);
    Index c = 0;
    for (Index n = lo; n < hi; ++n) c += r.lognorms[n] > tau;
    return c;
  }

  std::optional<Index> first_below(Index from, Index to, double tau) const {
    if (const auto* p = std::get_if<OrbitProfile>(&impl_)) return p->first_below(from, to, tau);
    const auto& r = rec(to);
    for (Index n = from; n < to; ++n) {
      if (r.lognorms[n] < tau) return n;
    }
    return std::nullopt;
  }

  std::optional<Index> first_above(Index from, Index to, double tau) const {
    if (const auto* p = std::get_if<OrbitProfile>(&impl_)) return p->first_above(from, to, tau);
    const auto& r = rec(to);
    for (Index n = from; n < to; ++n) {
      if (r.lognorms[n] > tau) return n;
    }
    return std::nullopt;
  }

  double max_log(Index lo, Index hi) const {
    if (const auto* p = std::get_if<OrbitProfile>(&impl_)) return p->max_log(lo, hi);
    const auto& r = rec(hi);
    double best = kNegInf;
    for (Index n = lo; n < hi; ++n) best = std::max(best, r.lognorms[n]);
    return best;
  }

  double min_log(Index lo, Index hi) const {
    if (const auto* p = std::get_if<OrbitProfile>(&impl_)) return p->min_log(lo, hi);
    const auto& r = rec(hi);
    double best = std::numeric_limits<double>::infinity();
    for (Index n = lo; n < hi; ++n) best = std::min(best, r.lognorms[n]);
    return best;
  }

  // Density checkpoints: powers of two, profile boundaries, and the horizon.
  std::vector<Index> checkpoints(Index horizon) const {
    std::set<Index> pts;
    for (Index n = 1; n <= horizon && n > 0; n *= 2) pts.insert(n);
    pts.insert(horizon);
    if (const auto* p = std::get_if<OrbitProfile>(&impl_)) {
      for (Index b : p->boundaries(horizon)) {
        if (b >= 1) {
          pts.insert(b);
          if (b > 1) pts.insert(b - 1);
        }
      }
    }
    return {pts.begin(), pts.end()};
  }

 private:
  const OrbitRecord& rec(Index need) const {
    const auto& r = std::get<OrbitRecord>(impl_);
    if (need > r.horizon + 1) throw std::out_of_range("OrbitEvaluator: beyond horizon");
    return r;
  }

  std::variant<OrbitProfile, OrbitRecord> impl_;
};

}  // namespace linchaos
