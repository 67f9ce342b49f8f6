#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "linchaos/certificate.hpp"
#include "linchaos/detectors.hpp"
#include "linchaos/orbit_stats.hpp"
#include "linchaos/power_norm.hpp"

namespace linchaos::criteria {

inline constexpr double kLn3 = 1.0986122886681098;

// sup-verdicts always carry re-verifiable evidence: an infinite supremum is
// reported with a witness sequence achieving >= 3^k at the k-th entry,
// never as a bare flag.
struct GrowthWitness {
  Index n = 0;
  Index m = 0;
  double log_value = 0.0;  // log of the achieved ratio/product
};

struct SupremumVerdict {
  enum class Kind { finite, infinite, unknown };
  Kind kind = Kind::finite;
  LogReal value;           // finite case
  Index witness_n = 0;     // finite case argmax pair
  Index witness_m = 0;
  std::vector<GrowthWitness> witnesses;  // infinite case
  Index search_bound = 0;

  bool is_infinite() const { return kind == Kind::infinite; }
};

namespace detail {

inline bool tail_decays_to_zero(const WeightSequence& s) {
  if (const auto* g = std::get_if<GeometricTail>(&s.tail()))
    return g->ratio < LogReal::one();
  if (const auto* p = std::get_if<PowerLawTail>(&s.tail())) return p->alpha < 0;
  return false;
}

// Smallest tail index i with log s(i) < bound (tails decaying to zero).
inline Index tail_index_below(const WeightSequence& s, double bound) {
  Index t0 = s.tail_start();
  if (const auto* g = std::get_if<GeometricTail>(&s.tail())) {
    double lq = g->ratio.log_mag();
    double need = (bound - g->base.log_mag()) / lq;  // lq < 0
    Index i = t0 + (need <= 0 ? 0 : Index(std::ceil(need)));
    while (s.log_at(i) >= bound) ++i;
    return i;
  }
  const auto& p = std::get<PowerLawTail>(s.tail());
  double arg = std::exp(bound / p.alpha);  // (i+o)^alpha < bound
  std::int64_t i = std::int64_t(std::ceil(arg)) - p.offset;
  Index r = Index(std::max<std::int64_t>(i, std::int64_t(t0)));
  while (s.log_at(r) >= bound) ++r;
  return r;
}

// min log s over [j, infinity) for non-vanishing tails.
inline double suffix_inf_log(const WeightSequence& s, Index j) {
  double best = std::numeric_limits<double>::infinity();
  const auto& blocks = s.prefix_blocks();
  Index pos = 0;
  for (const auto& b : blocks) {
    Index end = pos + b.length;
    if (end > j) best = std::min(best, b.value.log_mag());
    pos = end;
  }
  Index t = std::max(j, s.tail_start());
  if (const auto* c = std::get_if<ConstantTail>(&s.tail())) {
    best = std::min(best, c->value.log_mag());
  } else if (std::get_if<GeometricTail>(&s.tail()) || std::get_if<PowerLawTail>(&s.tail())) {
    best = std::min(best, s.log_at(t));  // non-decaying: infimum at the front
  } else {
    const auto& alt = std::get<AlternatingBlocksTail>(s.tail());
    best = std::min(best, min(alt.hi, alt.lo).log_mag());
  }
  return best;
}

inline std::vector<Index> ratio_candidates(const WeightSequence& s) {
  std::vector<Index> cs;
  Index pos = 0;
  for (const auto& b : s.prefix_blocks()) {
    cs.push_back(pos);
    cs.push_back(pos + b.length - 1);
    pos += b.length;
  }
  cs.push_back(s.tail_start());
  cs.push_back(s.tail_start() + 1);
  return cs;
}

}  // namespace detail

// M_v = sup{ v_n / v_m : m > n }. Exact for the closed-form tails; an
// infinite verdict carries (n_k, m_k) with v_{n_k}/v_{m_k} > 3^k and gaps
// m_k - n_k increasing.
inline SupremumVerdict compute_Mv(const WeightSequence& v, Index search_bound = 1u << 20,
                                  int witness_count = 8) {
  SupremumVerdict verdict;
  verdict.search_bound = search_bound;
  if (detail::tail_decays_to_zero(v)) {
    verdict.kind = SupremumVerdict::Kind::infinite;
    Index nstar = 0;
    double best = v.log_at(0);
    for (Index c : detail::ratio_candidates(v)) {
      if (v.log_at(c) > best) {
        best = v.log_at(c);
        nstar = c;
      }
    }
    Index prev_m = std::max<Index>(nstar, v.tail_start());
    for (int k = 1; k <= witness_count; ++k) {
      double bound = best - double(k) * kLn3;
      Index m = std::max(detail::tail_index_below(v, bound), prev_m + 1);
      while (v.log_at(nstar) - v.log_at(m) <= double(k) * kLn3) ++m;
      verdict.witnesses.push_back({nstar, m, v.log_at(nstar) - v.log_at(m)});
      prev_m = m;
    }
    return verdict;
  }
  double best = -std::numeric_limits<double>::infinity();
  Index bn = 0, bm = 1;
  for (Index n : detail::ratio_candidates(v)) {
    double cand = v.log_at(n) - detail::suffix_inf_log(v, n + 1);
    if (cand > best) {
      best = cand;
      bn = n;
      // representative m: first later index attaining the suffix infimum
      bm = n + 1;
      double inf = detail::suffix_inf_log(v, n + 1);
      for (Index m = n + 1; m < n + 4 + v.tail_start(); ++m) {
        if (v.log_at(m) <= inf + 1e-15) {
          bm = m;
          break;
        }
      }
    }
  }
  if (const auto* p = std::get_if<PowerLawTail>(&v.tail())) {
    if (p->alpha > 0 && 0.0 > best) {
      best = 0.0;  // consecutive ratios increase to 1; supremum in the limit
      bn = search_bound;
      bm = search_bound + 1;
    }
  }
  verdict.kind = SupremumVerdict::Kind::finite;
  verdict.value = LogReal::exp_of(best);
  verdict.witness_n = bn;
  verdict.witness_m = bm;
  return verdict;
}

namespace detail {

struct Window {
  Index a = 0, b = 0;
  double sum = -std::numeric_limits<double>::infinity();
};

// Exact maximum-subarray over runs of identical log-weights (Kadane on the
// run-length representation).
inline Window max_window_over_runs(const std::vector<std::pair<double, Index>>& runs,
                                   Index start_pos) {
  Window best;
  double cur = -std::numeric_limits<double>::infinity();
  Index cur_start = 0;
  Index pos = start_pos;
  for (const auto& [lv, len] : runs) {
    if (len == 0) continue;
    Index end = pos + len;
    if (lv >= 0) {
      if (cur < 0) {
        cur = 0;
        cur_start = pos;
      }
      cur += double(len) * lv;
      if (cur > best.sum) best = {cur_start, end - 1, cur};
    } else {
      // candidates: extend by one element, or restart with a single element
      if (cur + lv > best.sum) best = {cur_start, pos, cur + lv};
      if (lv > best.sum) best = {pos, pos, lv};
      double extended = cur + double(len) * lv;
      if (lv > extended) {
        cur = lv;
        cur_start = end - 1;
      } else {
        cur = extended;
      }
    }
    pos = end;
  }
  return best;
}

}  // namespace detail

// M_w = sup over nonempty index windows of prod |w_k|. (The window product
// convention follows the conjugation to M_v: windows of length >= 1.)
// Log-domain maximum-subarray over the prefix runs plus closed-form tail
// analysis; infinite verdicts carry window witnesses with products > 3^k.
inline SupremumVerdict compute_Mw(const WeightSequence& w, Index search_bound = 1u << 20,
                                  int witness_count = 8) {
  if (!w.sup_value().has_value())
    throw std::invalid_argument("compute_Mw: weights unbounded, operator invalid");
  SupremumVerdict verdict;
  verdict.search_bound = search_bound;

  // Decide infinite growth from the tail rule.
  bool infinite = false;
  Index grow_from = w.tail_start();
  if (const auto* c = std::get_if<ConstantTail>(&w.tail())) {
    infinite = c->value > LogReal::one();
  } else if (const auto* g = std::get_if<GeometricTail>(&w.tail())) {
    infinite = !(g->ratio < LogReal::one()) && g->base > LogReal::one();
  } else if (const auto* alt = std::get_if<AlternatingBlocksTail>(&w.tail())) {
    if (max(alt->hi, alt->lo) > LogReal::one()) {
      if (alt->hi_len.mul > 0 || alt->lo_len.mul > 0) {
        infinite = true;  // unbounded runs of the larger value
      } else {
        double drift = double(alt->hi_len.add) * alt->hi.log_mag() +
                       double(alt->lo_len.add) * alt->lo.log_mag();
        infinite = drift > 0;
      }
    }
  }

  if (infinite) {
    verdict.kind = SupremumVerdict::Kind::infinite;
    const auto* alt = std::get_if<AlternatingBlocksTail>(&w.tail());
    bool use_runs = alt && (alt->hi_len.mul > 0 || alt->lo_len.mul > 0) &&
                    max(alt->hi, alt->lo) > LogReal::one();
    for (int k = 1; k <= witness_count; ++k) {
      double target = double(k) * kLn3;
      Index a, b;
      if (use_runs) {
        // a single run of the larger value long enough to clear 3^k
        bool hi_phase = !(alt->hi < alt->lo);
        double lbig = max(alt->hi, alt->lo).log_mag();
        Index need = Index(std::ceil(target / lbig)) + 1;
        auto run = w.first_run_at_least(need, hi_phase);
        a = run->second;
        b = a + need - 1;
      } else {
        // growth accumulates from the tail start
        a = grow_from;
        b = a + 1;
        while (w.log_product(a, b) <= target) {
          b += std::max<Index>(1, (b - a) / 2);
        }
        while (b > a + 1 && w.log_product(a, b - 1) > target) --b;
      }
      while (w.log_product(a, b) <= target) ++b;
      verdict.witnesses.push_back({a, b, w.log_product(a, b)});
    }
    return verdict;
  }

  // Finite: exact scan region past which no window can improve.
  std::vector<std::pair<double, Index>> runs;
  for (const auto& b : w.prefix_blocks()) runs.push_back({b.value.log_mag(), b.length});
  if (const auto* c = std::get_if<ConstantTail>(&w.tail())) {
    runs.push_back({c->value.log_mag(), 2});
  } else if (std::get_if<GeometricTail>(&w.tail()) || std::get_if<PowerLawTail>(&w.tail())) {
    // decaying tail: extensions only help while log values stay >= 0
    Index t0 = w.tail_start();
    Index stop = detail::tail_index_below(w, 0.0);
    for (Index i = t0; i <= stop + 1; ++i) runs.push_back({w.log_at(i), 1});
  } else {
    const auto& alt = std::get<AlternatingBlocksTail>(w.tail());
    for (Index p = 0; p < 2; ++p) {
      runs.push_back({alt.hi.log_mag(), alt.hi_len.at(p)});
      runs.push_back({alt.lo.log_mag(), alt.lo_len.at(p)});
    }
  }
  detail::Window win = detail::max_window_over_runs(runs, 0);
  verdict.kind = SupremumVerdict::Kind::finite;
  verdict.value = LogReal::exp_of(win.sum);
  verdict.witness_n = win.a;
  verdict.witness_m = win.b;
  return verdict;
}

// ---------------------------------------------------------------------------

struct SDCCWitness {
  double r = 0.0;  // SDCC constant, > 1
  Index m_max = 0;
  std::vector<SparseVector> vectors;  // vectors[m-1] works for level m
  std::vector<Index> decay_step;      // step where the orbit is certified small
};

struct SDCCSearchResult {
  bool found = false;
  SDCCWitness witness;
  Index failing_m = 0;
  std::string reason;
};

// For each m <= m_max find a pool vector x with ||T^i x|| >= r^i ||x|| for
// i = 1..m and an orbit certified to vanish (exact zero for nilpotent
// action on finite support, else decay below decay_tol * ||x||).
inline SDCCSearchResult sdcc_witness_search(const OperatorSpec& T, double r, Index m_max,
                                            const std::vector<SparseVector>& pool,
                                            Index probe_horizon = 4096,
                                            double decay_tol = 1e-6,
                                            std::uint64_t budget = kDefaultOrbitBudget) {
  if (!(r > 1.0)) throw std::invalid_argument("sdcc_witness_search: r > 1 required");
  SDCCSearchResult res;
  res.witness.r = r;
  res.witness.m_max = m_max;
  const double logr = std::log(r);

  struct PoolEntry {
    const SparseVector* x;
    OrbitEvaluator ev;
    double log0;
    std::optional<Index> decay_at;
  };
  std::vector<PoolEntry> entries;
  for (const auto& x : pool) {
    if (x.is_zero()) continue;
    OrbitEvaluator ev = OrbitEvaluator::make(T, x, probe_horizon, budget);
    double log0 = ev.log_norm(0);
    std::optional<Index> decay =
        ev.first_below(1, probe_horizon + 1, log0 + std::log(decay_tol));
    entries.push_back({&x, std::move(ev), log0, decay});
  }
  if (entries.empty()) {
    res.failing_m = 1;
    res.reason = "pool-exhausted";
    return res;
  }
  for (Index m = 1; m <= m_max; ++m) {
    const PoolEntry* pick = nullptr;
    for (const auto& e : entries) {
      if (!e.decay_at) continue;  // condition (i) not certifiable
      bool ok = true;
      for (Index i = 1; i <= m; ++i) {
        if (!(e.ev.log_norm(i) >= double(i) * logr + e.log0)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        pick = &e;
        break;
      }
    }
    if (!pick) {
      res.failing_m = m;
      res.reason = "no pool vector satisfies both conditions";
      return res;
    }
    res.witness.vectors.push_back(*pick->x);
    res.witness.decay_step.push_back(*pick->decay_at);
  }
  res.found = true;
  return res;
}

// ---------------------------------------------------------------------------

// y-vectors are given syntactically as finite combinations of the x-family.
struct SpanCombo {
  std::vector<std::pair<double, std::size_t>> terms;  // (coefficient, x index)
};

struct DCCCheckResult {
  bool ok = false;
  std::vector<double> ratios;  // per-m counting ratio at N_m
  Index failing_m = 0;
  std::string reason;
};

// Condition (a): every x_m orbit decays (exact-zero fast path); condition
// (b): card{0 <= i < N_m : ||T^i y_m|| >= m ||y_m||} / N_m >= 1 - 1/m.
inline DCCCheckResult dcc_witness_check(const OperatorSpec& T,
                                        const std::vector<SparseVector>& xs,
                                        const std::vector<SpanCombo>& ys,
                                        const std::vector<Index>& Ns, Index probe_horizon,
                                        double decay_tol = 1e-6,
                                        std::uint64_t budget = kDefaultOrbitBudget) {
  if (ys.size() != Ns.size()) throw std::invalid_argument("dcc_witness_check: |ys| != |Ns|");
  for (std::size_t m = 1; m < Ns.size(); ++m) {
    if (Ns[m - 1] >= Ns[m]) throw std::invalid_argument("dcc_witness_check: Ns must increase");
  }
  DCCCheckResult res;
  for (const auto& x : xs) {
    if (x.is_zero()) throw std::invalid_argument("dcc_witness_check: zero x vector");
    OrbitEvaluator ev = OrbitEvaluator::make(T, x, probe_horizon, budget);
    if (!ev.first_below(1, probe_horizon + 1, ev.log_norm(0) + std::log(decay_tol))) {
      res.reason = "condition (a): orbit did not decay within probe horizon";
      return res;
    }
  }
  for (std::size_t t = 0; t < ys.size(); ++t) {
    SparseVector y;
    for (const auto& [coef, idx] : ys[t].terms) {
      if (idx >= xs.size())
        throw std::invalid_argument("dcc_witness_check: combo index outside the x family");
      y = axpy(LogReal::from_linear(coef), xs[idx], y);
    }
    if (y.is_zero()) throw std::invalid_argument("dcc_witness_check: zero y vector");
    Index m = Index(t) + 1;
    Index N = Ns[t];
    OrbitEvaluator ev = OrbitEvaluator::make(T, y, N, budget);
    double bar = std::log(double(m)) + ev.log_norm(0);
    Index cnt = N - ev.count_below(0, N, bar);  // ||T^i y|| >= m ||y||
    double ratio = double(cnt) / double(N);
    res.ratios.push_back(ratio);
    if (!(ratio >= 1.0 - 1.0 / double(m))) {
      res.failing_m = m;
      res.reason = "condition (b): counting ratio below 1 - 1/m";
      return res;
    }
  }
  res.ok = true;
  return res;
}

// ---------------------------------------------------------------------------

struct LYCCEvidence {
  bool holds = false;
  std::vector<IndexValue> decay_chain;       // common decay subsequence (a)
  std::vector<GrowthWitness> growth;         // restriction-norm growth (b)
  std::vector<SparseVector> growth_samples;  // normalized span samples used
  std::string failing;                       // "a" or "b" when !holds
};

// Normalized {-1,0,1}-combinations of X0 up to the given depth.
inline std::vector<SparseVector> span_samples(const std::vector<SparseVector>& X0,
                                              const SpaceSpec& space, int depth = 3,
                                              std::size_t cap = 4096) {
  std::vector<SparseVector> out;
  std::size_t n = X0.size();
  std::vector<std::size_t> idx;
  auto emit = [&](const std::vector<int>& signs) {
    SparseVector s;
    for (std::size_t t = 0; t < idx.size(); ++t) {
      s = axpy(LogReal::from_linear(double(signs[t])), X0[idx[t]], s);
    }
    if (s.is_zero()) return;
    LogReal nm = norm(s, space);
    out.push_back(s.scaled(LogReal::one() / nm));
  };
  std::vector<int> signs;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (out.size() >= cap) return;
    if (!idx.empty()) emit(signs);
    if (int(idx.size()) == depth) return;
    for (std::size_t j = from; j < n && out.size() < cap; ++j) {
      idx.push_back(j);
      for (int sg : {1, -1}) {
        signs.push_back(sg);
        self(self, j + 1);
        signs.pop_back();
      }
      idx.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// Li-Yorke Chaos Criterion instance check: (a) a common subsequence along
// which every X0 orbit decays with geometric envelope, (b) growth witnesses
// for sup_n ||T^n|_Y|| = infinity via lower bounds over normalized span
// samples, values >= 3^k.
inline LYCCEvidence lycc_evidence(const OperatorSpec& T, const std::vector<SparseVector>& X0,
                                  Index horizon, int k_min = 3, int depth = 3,
                                  std::uint64_t budget = kDefaultOrbitBudget) {
  if (X0.empty()) throw std::invalid_argument("lycc_evidence: X0 empty");
  LYCCEvidence ev;

  std::vector<OrbitEvaluator> evals;
  double c0 = kNegInf;
  for (const auto& x : X0) {
    evals.push_back(OrbitEvaluator::make(T, x, horizon, budget));
    c0 = std::max(c0, evals.back().log_norm(0));
  }
  // (a): n_k with max_j ||T^{n_k} x_j|| < C * 2^-k
  Index pos = 1;
  for (int k = 1; k <= k_min; ++k) {
    double bar = c0 - double(k) * kLn2;
    std::optional<Index> found;
    Index n = pos;
    while (n <= horizon) {
      auto cand = evals[0].first_below(n, horizon + 1, bar);
      if (!cand) break;
      bool all = true;
      double worst = kNegInf;
      for (auto& e : evals) {
        double v = e.log_norm(*cand);
        worst = std::max(worst, v);
        if (!(v < bar)) {
          all = false;
          break;
        }
      }
      if (all) {
        found = *cand;
        ev.decay_chain.push_back({*cand, worst});
        break;
      }
      n = *cand + 1;
    }
    if (!found) {
      ev.failing = "a";
      return ev;
    }
    pos = *found + 1;
  }

  // (b): growth witnesses over normalized span samples
  ev.growth_samples = span_samples(X0, T.space, depth);
  std::vector<OrbitEvaluator> sev;
  for (const auto& s : ev.growth_samples) {
    sev.push_back(OrbitEvaluator::make(T, s, horizon, budget));
  }
  Index gpos = 1;
  for (int k = 1; k <= k_min; ++k) {
    double bar = double(k) * kLn3;
    std::optional<Index> best;
    std::size_t best_sample = 0;
    for (std::size_t s = 0; s < sev.size(); ++s) {
      auto cand = sev[s].first_above(gpos, horizon + 1, bar);
      if (cand && (!best || *cand < *best)) {
        best = *cand;
        best_sample = s;
      }
    }
    if (!best) {
      ev.failing = "b";
      return ev;
    }
    ev.growth.push_back({*best, best_sample, sev[best_sample].log_norm(*best)});
    gpos = *best + 1;
  }
  ev.holds = true;
  return ev;
}

// ---------------------------------------------------------------------------

struct SummabilityReport {
  enum class Verdict { summable_certified, not_certified };
  Verdict linear = Verdict::not_certified;
  Verdict squared = Verdict::not_certified;
  std::vector<double> term_logs;  // log of 1/||T^{m_k}||
  LogReal partial_sum, tail_bound, total_bound;
  LogReal partial_sum_sq, tail_bound_sq, total_bound_sq;
  double q_log = 0.0;  // certified ratio bound (log), linear variant
  std::size_t k0 = 0;
};

// Partial sums of 1/||T^{m_k}|| with a geometric-decay certificate:
// summability is certified only when some k0 has term ratios <= q < 1 for
// all k0 <= k < K, with the tail bound t_K q/(1-q) appended. Convergence is
// never asserted from truncation alone.
inline SummabilityReport series_summability_test(const OperatorSpec& T,
                                                 const std::vector<Index>& ms) {
  if (ms.size() < 2) throw std::invalid_argument("series_summability_test: need K >= 2 terms");
  SummabilityReport rep;
  for (Index m : ms) {
    PowerNormResult pn = power_norm(T, m);
    if (!pn.exact)
      throw std::invalid_argument("series_summability_test: power_norm not exact for this kind");
    rep.term_logs.push_back(-pn.value.log_mag());
  }
  auto run = [&](double scale, SummabilityReport::Verdict& verdict, LogReal& partial,
                 LogReal& tail, LogReal& total, bool record_q) {
    LogReal sum = LogReal::zero();
    for (double tl : rep.term_logs) sum = sum + LogReal::exp_of(scale * tl);
    partial = sum;
    // best (largest) suffix ratio for each candidate k0; certify on q < 1
    const std::size_t K = rep.term_logs.size();
    std::optional<std::pair<std::size_t, double>> bestq;
    for (std::size_t k0 = 0; k0 + 1 < K && k0 <= K / 2; ++k0) {
      double q = -std::numeric_limits<double>::infinity();
      for (std::size_t k = k0; k + 1 < K; ++k) {
        q = std::max(q, scale * (rep.term_logs[k + 1] - rep.term_logs[k]));
      }
      if (q < 0 && (!bestq || q < bestq->second)) bestq = {k0, q};
    }
    if (bestq) {
      verdict = SummabilityReport::Verdict::summable_certified;
      double lq = bestq->second;
      // tail <= t_K * q / (1 - q)
      LogReal q = LogReal::exp_of(lq);
      LogReal tK = LogReal::exp_of(scale * rep.term_logs.back());
      tail = tK * q / (LogReal::one() - q);
      total = partial + tail;
      if (record_q) {
        rep.q_log = lq;
        rep.k0 = bestq->first;
      }
    } else {
      verdict = SummabilityReport::Verdict::not_certified;
      tail = LogReal::zero();
      total = partial;
    }
  };
  run(1.0, rep.linear, rep.partial_sum, rep.tail_bound, rep.total_bound, true);
  run(2.0, rep.squared, rep.partial_sum_sq, rep.tail_bound_sq, rep.total_bound_sq, false);
  return rep;
}

// ---------------------------------------------------------------------------

struct ConsistencyReport {
  bool ok = true;
  std::vector<std::string> diagnostics;
  SpectralRadiusInterval radius;
};

// Necessary spectral consequences of accepted evidence: any Li-Yorke-grade
// certificate forces r(T) >= 1, an SDCC witness with constant r forces
// r(T) >= r. A violation indicates an implementation bug, not new
// mathematics, so the check compares against the interval's upper end.
inline ConsistencyReport spectral_consistency_check(const OperatorSpec& T,
                                                    const std::vector<Certificate>& certs,
                                                    const std::vector<double>& sdcc_constants = {},
                                                    Index n_max = 64) {
  ConsistencyReport rep;
  rep.radius = spectral_radius_estimate(T, n_max);
  const double tol = 1e-9;
  double r_hi = rep.radius.upper.is_zero() ? 0.0 : std::exp(rep.radius.upper.log_mag());
  for (const auto& c : certs) {
    if (!(r_hi >= 1.0 - tol)) {
      rep.ok = false;
      rep.diagnostics.push_back(std::string("certificate '") + claim_name(c.claim) +
                                "' requires r(T) >= 1 but upper estimate is " +
                                std::to_string(r_hi));
    }
  }
  for (double r : sdcc_constants) {
    if (!(r_hi >= r - tol)) {
      rep.ok = false;
      rep.diagnostics.push_back("SDCC witness requires r(T) >= " + std::to_string(r) +
                                " but upper estimate is " + std::to_string(r_hi));
    }
  }
  return rep;
}

}  // namespace linchaos::criteria
