#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "linchaos/certificate.hpp"
#include "linchaos/orbit_stats.hpp"
#include "linchaos/power_norm.hpp"

namespace linchaos {

inline constexpr double kLn2 = 0.6931471805599453;

namespace detail {

// Interleaved low/high index chains with geometric envelopes: lows below
// low * 2^-k and highs above high_for(k), alternating in time. liminf 0 and
// limsup infinity are undecidable at any finite horizon; the 2^{+-k}
// envelopes make the evidence strengthen with K.
template <typename HighFor>
inline bool interleaved_chains(const OrbitEvaluator& ev, Index horizon, double low_log,
                               HighFor high_for, int k_min, int k_cap,
                               std::vector<IndexValue>& lows, std::vector<IndexValue>& highs,
                               int& achieved, Index& blocking) {
  Index pos = 1;
  achieved = 0;
  for (int k = 1; k <= k_cap; ++k) {
    auto nk = ev.first_below(pos, horizon + 1, low_log - double(k) * kLn2);
    if (!nk) {
      blocking = pos;
      break;
    }
    auto mk = ev.first_above(*nk + 1, horizon + 1, high_for(k));
    if (!mk) {
      blocking = *nk + 1;
      break;
    }
    lows.push_back({*nk, ev.log_norm(*nk)});
    highs.push_back({*mk, ev.log_norm(*mk)});
    achieved = k;
    pos = *mk + 1;
  }
  return achieved >= k_min;
}

inline std::shared_ptr<const OrbitEvaluator> shared_eval(const OperatorSpec& T,
                                                         const SparseVector& x, Index horizon,
                                                         std::uint64_t budget) {
  return std::make_shared<const OrbitEvaluator>(OrbitEvaluator::make(T, x, horizon, budget));
}

}  // namespace detail

// Finite-horizon evidence that liminf ||T^n x|| = 0 and limsup = infinity:
// interleaved n_1 < m_1 < n_2 < m_2 < ... with ||T^{n_k} x|| < low * 2^-k
// and ||T^{m_k} x|| > high * 2^k.
inline DetectorResult irregular_test(const OperatorSpec& T, const SparseVector& x, Index horizon,
                                     const LogReal& low, const LogReal& high, int k_min = 3,
                                     int k_cap = 12,
                                     std::uint64_t budget = kDefaultOrbitBudget) {
  if (horizon < 10) throw std::invalid_argument("irregular_test: horizon >= 10 required");
  DetectorResult res;
  auto ev = detail::shared_eval(T, x, horizon, budget);
  std::vector<IndexValue> lows, highs;
  int achieved = 0;
  Index blocking = 0;
  bool ok = detail::interleaved_chains(
      *ev, horizon, low.log_mag(),
      [&](int k) { return high.log_mag() + double(k) * kLn2; }, k_min, k_cap, lows, highs,
      achieved, blocking);
  if (!ok) {
    res.accepted = false;
    res.rejection = {"interleaved low/high chain stalled", achieved, blocking, "", 0.0};
    return res;
  }
  res.accepted = true;
  Certificate& c = res.cert;
  c.claim = ClaimKind::irregular_vector;
  c.op = T;
  c.witnesses = {x};
  c.horizon = horizon;
  c.K = achieved;
  c.low_log = low.log_mag();
  c.high_log = high.log_mag();
  c.low_chain = std::move(lows);
  c.high_chain = std::move(highs);
  return res;
}

// Distributionally irregular vector evidence: both the small-norm set
// {n : ||T^n x|| < eps} and the large-norm set {n : ||T^n x|| > 1/eps}
// reach upper-density >= density_floor at some checkpoint, with geometric
// envelope subsequences (below eps/2^k, above 2^k/eps).
inline DetectorResult dirregular_test(const OperatorSpec& T, const SparseVector& x, Index horizon,
                                      const LogReal& eps, double density_floor = 0.9,
                                      int k_env = 3,
                                      std::uint64_t budget = kDefaultOrbitBudget) {
  DetectorResult res;
  auto ev = detail::shared_eval(T, x, horizon, budget);
  std::vector<Index> cps = ev->checkpoints(horizon);
  if (cps.size() < 3) throw std::invalid_argument("dirregular_test: too few density checkpoints");

  auto side = [&](bool below, double tau) -> std::pair<DensityEvidence, bool> {
    DensityEvidence de;
    de.below = below;
    de.tau_log = tau;
    IndexSet set = IndexSet::threshold(ev, below, tau);
    DensityReport rep = density(set, horizon, cps);
    de.checkpoints = rep.checkpoints;
    de.counts = rep.count_prefix;
    de.udens = rep.udens_estimate;
    de.ldens = rep.ldens_estimate;
    bool dens_ok = de.udens >= density_floor;
    Index pos = 1;
    bool env_ok = true;
    for (int k = 1; k <= k_env; ++k) {
      double bar = below ? tau - double(k) * kLn2 : tau + double(k) * kLn2;
      auto nk = below ? ev->first_below(pos, horizon + 1, bar)
                      : ev->first_above(pos, horizon + 1, bar);
      if (!nk) {
        env_ok = false;
        break;
      }
      de.envelope.push_back({*nk, ev->log_norm(*nk)});
      pos = *nk + 1;
    }
    return {de, dens_ok && env_ok};
  };

  auto [deA, okA] = side(true, eps.log_mag());
  auto [deB, okB] = side(false, -eps.log_mag());
  if (!okA || !okB) {
    res.accepted = false;
    res.rejection.reason = "density or envelope condition failed";
    res.rejection.failing_side = !okA ? "A" : "B";
    res.rejection.best_density = !okA ? deA.udens : deB.udens;
    return res;
  }
  res.accepted = true;
  Certificate& c = res.cert;
  c.claim = ClaimKind::distributionally_irregular_vector;
  c.op = T;
  c.witnesses = {x};
  c.horizon = horizon;
  c.K = k_env;
  c.epsilon_log = eps.log_mag();
  c.density_floor = density_floor;
  c.densities = {deA, deB};
  return res;
}

// Li-Yorke pair: the difference orbit has lows -> 0 (low bar delta * 2^-k)
// and highs above the fixed positive bar delta. limsup > 0 needs only the
// fixed bar, not growth.
inline DetectorResult liyorke_pair_test(const OperatorSpec& T, const SparseVector& x,
                                        const SparseVector& y, Index horizon, const LogReal& delta,
                                        int k_min = 3, int k_cap = 12,
                                        std::uint64_t budget = kDefaultOrbitBudget) {
  DetectorResult res;
  SparseVector d = x - y;
  if (d.is_zero()) {
    res.accepted = false;
    res.rejection = {"precondition: x == y", 0, 0, "", 0.0};
    return res;
  }
  auto ev = detail::shared_eval(T, d, horizon, budget);
  std::vector<IndexValue> lows, highs;
  int achieved = 0;
  Index blocking = 0;
  bool ok = detail::interleaved_chains(
      *ev, horizon, delta.log_mag(), [&](int) { return delta.log_mag(); }, k_min, k_cap, lows,
      highs, achieved, blocking);
  if (!ok) {
    res.accepted = false;
    res.rejection = {"interleaved low/high chain stalled", achieved, blocking, "", 0.0};
    return res;
  }
  res.accepted = true;
  Certificate& c = res.cert;
  c.claim = ClaimKind::li_yorke_pair;
  c.op = T;
  c.witnesses = {x, y};
  c.horizon = horizon;
  c.K = achieved;
  c.delta_log = delta.log_mag();
  c.low_chain = std::move(lows);
  c.high_chain = std::move(highs);
  return res;
}

// Verifies that every pair of distinct sampled scalars alpha, beta gives a
// distributionally chaotic pair (alpha*u, beta*u): by homogeneity the
// evidence is the dirregular evidence of u scaled by |alpha - beta|. The
// counts are recomputed on the scaled vector and must match exactly.
inline bool scrambled_line_check(const OperatorSpec& T, const SparseVector& u,
                                 const std::vector<double>& sample_scalars, Index horizon,
                                 const LogReal& eps, double density_floor = 0.9,
                                 std::uint64_t budget = kDefaultOrbitBudget,
                                 Certificate* out_cert = nullptr) {
  if (u.is_zero()) return false;
  DetectorResult base = dirregular_test(T, u, horizon, eps, density_floor, 3, budget);
  if (!base.accepted) return false;
  for (std::size_t i = 0; i < sample_scalars.size(); ++i) {
    for (std::size_t j = i + 1; j < sample_scalars.size(); ++j) {
      double gap = std::abs(sample_scalars[i] - sample_scalars[j]);
      if (gap == 0.0) continue;  // not distinct: vacuous
      LogReal scale = LogReal::from_linear(gap);
      SparseVector d = u.scaled(scale);
      auto ev = detail::shared_eval(T, d, horizon, budget);
      for (const DensityEvidence& de : base.cert.densities) {
        double tau = de.tau_log + scale.log_mag();
        for (std::size_t t = 0; t < de.checkpoints.size(); ++t) {
          Index n = de.checkpoints[t];
          Index cnt = de.below ? ev->count_below(1, n + 1, tau) : ev->count_above(1, n + 1, tau);
          if (cnt != de.counts[t]) return false;
        }
        for (const IndexValue& iv : de.envelope) {
          double got = ev->log_norm(iv.n);
          double want = iv.lognorm == kNegInf ? kNegInf : iv.lognorm + scale.log_mag();
          if (got != want) return false;
        }
      }
    }
  }
  if (out_cert) {
    *out_cert = base.cert;
    out_cert->claim = ClaimKind::scrambled_line;
    out_cert->scalars = sample_scalars;
  }
  return true;
}

// Re-verification of a stored certificate: every evidence number is
// recomputed from the operator and witnesses and compared bit-identically.
// Returns the first mismatching field, or nullopt on success.
inline std::optional<std::string> verify_certificate(const Certificate& c,
                                                     std::uint64_t budget = kDefaultOrbitBudget) {
  auto fail = [&](const std::string& path) { return std::optional<std::string>(path); };
  SparseVector base;
  if (c.claim == ClaimKind::li_yorke_pair) {
    if (c.witnesses.size() != 2) return fail("witnesses: pair claim needs two vectors");
    base = c.witnesses[0] - c.witnesses[1];
  } else {
    if (c.witnesses.empty()) return fail("witnesses: empty");
    base = c.witnesses[0];
  }
  OrbitEvaluator ev = OrbitEvaluator::make(c.op, base, c.horizon, budget);

  auto check_chain = [&](const std::vector<IndexValue>& chain, const char* name,
                         auto bound_for, bool below) -> std::optional<std::string> {
    Index prev = 0;
    for (std::size_t k = 0; k < chain.size(); ++k) {
      const IndexValue& iv = chain[k];
      if (iv.n > c.horizon || (k > 0 && iv.n <= prev))
        return fail(std::string(name) + "[" + std::to_string(k) + "].n");
      double got = ev.log_norm(iv.n);
      if (got != iv.lognorm) return fail(std::string(name) + "[" + std::to_string(k) + "].lognorm");
      double bar = bound_for(int(k) + 1);
      if (below ? !(got < bar) : !(got > bar))
        return fail(std::string(name) + "[" + std::to_string(k) + "]: envelope violated");
      prev = iv.n;
    }
    return std::nullopt;
  };

  switch (c.claim) {
    case ClaimKind::irregular_vector:
    case ClaimKind::li_yorke_pair: {
      if (int(c.low_chain.size()) < c.K || int(c.high_chain.size()) < c.K)
        return fail("K: chains shorter than K");
      double low0 = c.claim == ClaimKind::irregular_vector ? c.low_log : c.delta_log;
      if (auto e = check_chain(c.low_chain, "low_chain",
                               [&](int k) { return low0 - double(k) * kLn2; }, true))
        return e;
      if (auto e = check_chain(
              c.high_chain, "high_chain",
              [&](int k) {
                return c.claim == ClaimKind::irregular_vector ? c.high_log + double(k) * kLn2
                                                              : c.delta_log;
              },
              false))
        return e;
      // interleaving n_k < m_k < n_{k+1}
      for (std::size_t k = 0; k < c.low_chain.size() && k < c.high_chain.size(); ++k) {
        if (!(c.low_chain[k].n < c.high_chain[k].n)) return fail("interleaving");
        if (k + 1 < c.low_chain.size() && !(c.high_chain[k].n < c.low_chain[k + 1].n))
          return fail("interleaving");
      }
      return std::nullopt;
    }
    case ClaimKind::distributionally_irregular_vector:
    case ClaimKind::scrambled_line: {
      if (c.densities.size() != 2) return fail("densities: need sides A and B");
      auto shared = std::make_shared<const OrbitEvaluator>(std::move(ev));
      for (std::size_t s = 0; s < 2; ++s) {
        const DensityEvidence& de = c.densities[s];
        std::string tag = s == 0 ? "densities.A" : "densities.B";
        if (de.checkpoints.size() != de.counts.size()) return fail(tag + ".counts: size");
        IndexSet set = IndexSet::threshold(shared, de.below, de.tau_log);
        DensityReport rep = density(set, c.horizon, de.checkpoints);
        for (std::size_t t = 0; t < de.checkpoints.size(); ++t) {
          if (rep.count_prefix[t] != de.counts[t])
            return fail(tag + ".counts[" + std::to_string(t) + "]");
        }
        if (rep.udens_estimate != de.udens) return fail(tag + ".udens");
        if (rep.ldens_estimate != de.ldens) return fail(tag + ".ldens");
        if (de.udens < c.density_floor) return fail(tag + ".udens: below floor");
        Index prev = 0;
        for (std::size_t k = 0; k < de.envelope.size(); ++k) {
          const IndexValue& iv = de.envelope[k];
          if (iv.n > c.horizon || (k > 0 && iv.n <= prev)) return fail(tag + ".envelope.n");
          double got = shared->log_norm(iv.n);
          if (got != iv.lognorm) return fail(tag + ".envelope[" + std::to_string(k) + "].lognorm");
          double bar = de.below ? de.tau_log - double(k + 1) * kLn2
                                : de.tau_log + double(k + 1) * kLn2;
          if (de.below ? !(got < bar) : !(got > bar))
            return fail(tag + ".envelope[" + std::to_string(k) + "]: bar violated");
          prev = iv.n;
        }
      }
      if (c.claim == ClaimKind::scrambled_line) {
        Certificate chk;
        if (!scrambled_line_check(c.op, c.witnesses[0], c.scalars, c.horizon,
                                  LogReal::exp_of(c.epsilon_log), c.density_floor, budget, &chk))
          return fail("scalars: scaled pair evidence failed");
      }
      return std::nullopt;
    }
    case ClaimKind::distributional_chaos:
      return std::nullopt;  // composite claims carry their parts
  }
  return fail("claim: unknown");
}

}  // namespace linchaos
