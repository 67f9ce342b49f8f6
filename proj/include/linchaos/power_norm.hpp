#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <variant>
#include <vector>

#include "linchaos/operator_spec.hpp"
#include "linchaos/orbit.hpp"

namespace linchaos {

struct PowerNormResult {
  LogReal value;           // exact norm when `exact`, else an upper bound
  bool exact = true;
  LogReal lower;           // bracket lower end (= value when exact)
  Index witness_k = 0;     // supremum-achieving window start, shift kinds
};

namespace detail {

// log of the shift supremand g(k) for ||T^n||:
//   backward:  (log v_k - log v_{k+n})/p + sum_{j=k+1}^{k+n} log w_j
//   forward:   (log v_{k+n} - log v_k)/p + sum_{j=k}^{k+n-1} log w_j
inline double shift_supremand(const OperatorSpec& T, Index n, Index k) {
  const auto& v = T.space.v;
  const double ip = vshare_exponent(T.space);
  double g;
  if (T.kind == OperatorKind::weighted_forward_shift) {
    g = ip * (v.log_at(k + n) - v.log_at(k));
    g += T.weights.log_product(k, k + n - 1);
  } else {
    g = ip * (v.log_at(k) - v.log_at(k + n));
    if (T.kind == OperatorKind::weighted_backward_shift) g += T.weights.log_product(k + 1, k + n);
  }
  return g;
}

inline void add_window_candidates(std::set<Index>& ks, Index cp, Index n) {
  auto push = [&](std::int64_t k) {
    if (k >= 0) ks.insert(Index(k));
  };
  std::int64_t c = std::int64_t(cp), nn = std::int64_t(n);
  push(c - nn - 1);
  push(c - nn);
  push(c - nn + 1);
  push(c - 1);
  push(c);
  push(c + 1);
}

// Limit of the supremand as k -> infinity, -inf when the windows vanish.
inline std::optional<double> shift_supremand_limit(const OperatorSpec& T, Index n) {
  const auto& v = T.space.v;
  const double ip = vshare_exponent(T.space);
  const bool forward = T.kind == OperatorKind::weighted_forward_shift;
  double vpart;
  if (std::holds_alternative<GeometricTail>(v.tail())) {
    double lq = std::get<GeometricTail>(v.tail()).ratio.log_mag();
    vpart = (forward ? 1.0 : -1.0) * double(n) * lq * ip;
  } else {
    vpart = 0.0;  // constant, power-law and alternating ratios tend to 1
  }
  if (T.kind == OperatorKind::backward_shift) return vpart;
  const auto& w = T.weights;
  if (const auto* c = std::get_if<ConstantTail>(&w.tail()))
    return vpart + double(n) * c->value.log_mag();
  if (const auto* g = std::get_if<GeometricTail>(&w.tail())) {
    if (g->ratio < LogReal::one()) return kNegInf;
    return vpart + double(n) * g->base.log_mag();
  }
  if (const auto* p = std::get_if<PowerLawTail>(&w.tail())) {
    if (p->alpha < 0) return kNegInf;
    return vpart;  // alpha == 0
  }
  return std::nullopt;  // alternating: handled via explicit windows
}

}  // namespace detail

// Exact ||T^n|| for shift kinds, evaluated as a supremum over window
// positions: candidates at weight-rule change points (sliding-window sums
// over piecewise rules attain their maximum at alignment points) plus the
// closed-form tail limit. ScalarPlus yields only the (|lambda| + ||T||)^n
// upper bound, flagged; FiniteMatrix yields an induced-norm bracket.
inline PowerNormResult power_norm(const OperatorSpec& T, Index n) {
  PowerNormResult res;
  if (n == 0) {
    res.value = res.lower = LogReal::one();
    return res;
  }
  switch (T.kind) {
    case OperatorKind::backward_shift:
    case OperatorKind::weighted_backward_shift:
    case OperatorKind::weighted_forward_shift: {
      const auto& v = T.space.v;
      std::set<Index> ks{0, 1};
      for (Index cp : v.change_points(v.tail_start())) detail::add_window_candidates(ks, cp, n);
      detail::add_window_candidates(ks, v.tail_start(), n);
      bool weighted = T.kind != OperatorKind::backward_shift;
      Index kstar = v.tail_start();
      if (weighted) {
        const auto& w = T.weights;
        Index wlimit = w.tail_start();
        if (const auto* alt = std::get_if<AlternatingBlocksTail>(&w.tail())) {
          // Scan far enough that either a run of the larger value swallows a
          // whole window (then that value^n is the exact ceiling) or the
          // pattern repeats.
          if (auto run = w.first_run_at_least(n, !(alt->hi < alt->lo))) {
            wlimit = run->second + 1;
          } else {
            Index period = alt->hi_len.add + alt->lo_len.add;
            wlimit = w.tail_start() + 2 * period + n + 1;
          }
        }
        for (Index cp : w.change_points(wlimit + n + 1))
          detail::add_window_candidates(ks, cp, n);
        detail::add_window_candidates(ks, wlimit, n);
        kstar = std::max(kstar, wlimit);
      }
      ks.insert(kstar);
      ks.insert(kstar + 1);

      double best = kNegInf;
      Index bestk = 0;
      for (Index k : ks) {
        double g = detail::shift_supremand(T, n, k);
        if (g > best) {
          best = g;
          bestk = k;
        }
      }
      auto lim = detail::shift_supremand_limit(T, n);
      bool exact = true;
      if (lim && *lim > best) {
        best = *lim;  // supremum approached in the limit, not attained
        bestk = kIndexInf;
      }
      if (std::holds_alternative<PowerLawTail>(v.tail()) && weighted &&
          std::holds_alternative<PowerLawTail>(T.weights.tail())) {
        exact = false;  // mixed power-law tails: monotonicity not analyzed
      }
      res.value = LogReal::exp_of(best);
      res.lower = res.value;
      res.exact = exact;
      res.witness_k = bestk;
      return res;
    }
    case OperatorKind::scalar_plus: {
      PowerNormResult in = power_norm(*T.inner, 1);
      LogReal bound = (T.lambda.abs() + in.value).pow(double(n));
      res.value = bound;
      res.lower = LogReal::zero();
      res.exact = false;
      return res;
    }
    case OperatorKind::finite_matrix: {
      const std::size_t d = T.dim();
      // A^n in plain double arithmetic (small n, small d), then the induced
      // norm of D A^n D^{-1} with D = diag(v_i^{1/p}).
      std::vector<std::vector<double>> M(d, std::vector<double>(d, 0.0));
      for (std::size_t i = 0; i < d; ++i) M[i][i] = 1.0;
      for (Index t = 0; t < n; ++t) {
        std::vector<std::vector<double>> R(d, std::vector<double>(d, 0.0));
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t kk = 0; kk < d; ++kk)
            for (std::size_t j = 0; j < d; ++j) R[i][j] += T.matrix[i][kk] * M[kk][j];
        M = std::move(R);
      }
      const double ip = detail::vshare_exponent(T.space);
      std::vector<double> dv(d);
      for (std::size_t i = 0; i < d; ++i) dv[i] = std::exp(ip * T.space.v.log_at(i));
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) M[i][j] *= dv[i] / dv[j];

      double col1 = 0, rowinf = 0;
      for (std::size_t j = 0; j < d; ++j) {
        double c = 0;
        for (std::size_t i = 0; i < d; ++i) c += std::abs(M[i][j]);
        col1 = std::max(col1, c);
      }
      for (std::size_t i = 0; i < d; ++i) {
        double r = 0;
        for (std::size_t j = 0; j < d; ++j) r += std::abs(M[i][j]);
        rowinf = std::max(rowinf, r);
      }
      double p = T.space.kind == SpaceKind::c0 ? std::numeric_limits<double>::infinity()
                                               : T.space.p;
      auto vec_norm = [&](const std::vector<double>& x) {
        if (!std::isfinite(p)) {
          double m = 0;
          for (double xi : x) m = std::max(m, std::abs(xi));
          return m;
        }
        double s = 0;
        for (double xi : x) s += std::pow(std::abs(xi), p);
        return std::pow(s, 1.0 / p);
      };
      // Lower bound: best column image, sharpened by normalized power
      // application of M^T M started from each coordinate (64 rounds).
      double lower = 0;
      for (std::size_t j = 0; j < d; ++j) {
        std::vector<double> col(d);
        for (std::size_t i = 0; i < d; ++i) col[i] = M[i][j];
        lower = std::max(lower, vec_norm(col));
      }
      if (p == 2.0) {
        for (std::size_t s0 = 0; s0 < d; ++s0) {
          std::vector<double> x(d, 0.0);
          x[s0] = 1.0;
          for (int it = 0; it < 64; ++it) {
            std::vector<double> y(d, 0.0), z(d, 0.0);
            for (std::size_t i = 0; i < d; ++i)
              for (std::size_t j = 0; j < d; ++j) y[i] += M[i][j] * x[j];
            for (std::size_t j = 0; j < d; ++j)
              for (std::size_t i = 0; i < d; ++i) z[j] += M[i][j] * y[i];
            double nz = vec_norm(z);
            if (nz == 0) break;
            for (auto& e : z) e /= nz;
            x = z;
          }
          std::vector<double> y(d, 0.0);
          for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) y[i] += M[i][j] * x[j];
          double nx = vec_norm(x);
          if (nx > 0) lower = std::max(lower, vec_norm(y) / nx);
        }
      }
      double upper;
      if (p == 1.0) {
        upper = lower = col1;
      } else if (!std::isfinite(p)) {
        upper = lower = rowinf;
      } else if (p == 2.0) {
        double frob = 0;
        for (auto& row : M)
          for (double e : row) frob += e * e;
        upper = std::min(std::sqrt(col1 * rowinf), std::sqrt(frob));
      } else {
        upper = std::pow(col1, 1.0 / p) * std::pow(rowinf, 1.0 - 1.0 / p);
      }
      upper = std::max(upper, lower);
      res.value = LogReal::from_linear(upper);
      res.lower = LogReal::from_linear(lower);
      res.exact = (upper == lower) || (upper - lower) <= 1e-12 * upper;
      if (res.exact) res.value = res.lower;
      return res;
    }
  }
  throw std::logic_error("power_norm: unknown kind");
}

struct SpectralRadiusInterval {
  LogReal lower;
  LogReal upper;
  bool degenerate() const {
    if (lower.is_zero() && upper.is_zero()) return true;
    return !lower.is_zero() && !upper.is_zero() &&
           std::abs(lower.log_mag() - upper.log_mag()) <= 1e-12;
  }
};

namespace detail {

// Closed-form Gelfand limit for shift kinds: the space-weight rate times the
// operator-weight rate, each read off the tail rule.
inline LogReal shift_radius_limit(const OperatorSpec& T) {
  const auto& v = T.space.v;
  const double ip = vshare_exponent(T.space);
  const bool forward = T.kind == OperatorKind::weighted_forward_shift;
  double lograte = 0.0;
  if (const auto* g = std::get_if<GeometricTail>(&v.tail())) {
    lograte += (forward ? 1.0 : -1.0) * ip * g->ratio.log_mag();
  }
  if (T.kind != OperatorKind::backward_shift) {
    const auto& w = T.weights;
    if (const auto* c = std::get_if<ConstantTail>(&w.tail())) {
      lograte += c->value.log_mag();
    } else if (const auto* g = std::get_if<GeometricTail>(&w.tail())) {
      if (g->ratio < LogReal::one()) return LogReal::zero();
      lograte += g->base.log_mag();
    } else if (const auto* p = std::get_if<PowerLawTail>(&w.tail())) {
      if (p->alpha < 0) return LogReal::zero();
    } else {
      const auto& alt = std::get<AlternatingBlocksTail>(w.tail());
      if (alt.hi_len.mul > 0 || alt.lo_len.mul > 0) {
        // Growing blocks: arbitrarily long constant runs of the larger value.
        lograte += max(alt.hi, alt.lo).log_mag();
      } else {
        double lh = double(alt.hi_len.add), ll = double(alt.lo_len.add);
        lograte += (lh * alt.hi.log_mag() + ll * alt.lo.log_mag()) / (lh + ll);
      }
    }
  }
  return LogReal::exp_of(lograte);
}

}  // namespace detail

// [achieved lower bound, inf_n ||T^n||^{1/n}]. Shift kinds use the
// closed-form limit as the lower end, which makes constant- and
// geometric-tail intervals degenerate.
inline SpectralRadiusInterval spectral_radius_estimate(const OperatorSpec& T, Index n_max = 64) {
  SpectralRadiusInterval iv;
  if (T.is_shift()) {
    LogReal limit = detail::shift_radius_limit(T);
    LogReal upper = LogReal::zero();
    bool first = true;
    for (Index n = 1; n <= n_max; n = (n < 8 ? n + 1 : n * 2)) {
      PowerNormResult pn = power_norm(T, n);
      LogReal root = pn.value.pow(1.0 / double(n));
      upper = first ? root : min(upper, root);
      first = false;
    }
    iv.lower = limit;
    iv.upper = max(limit, upper);
    return iv;
  }
  if (T.kind == OperatorKind::scalar_plus) {
    SpectralRadiusInterval in = spectral_radius_estimate(*T.inner, n_max);
    LogReal al = T.lambda.abs();
    LogReal lo1 = al - in.upper;
    LogReal lo2 = in.lower - al;
    iv.lower = max(max(lo1, lo2), LogReal::zero());
    iv.upper = al + in.upper;
    return iv;
  }
  if (T.kind == OperatorKind::finite_matrix) {
    LogReal upper = LogReal::zero();
    bool first = true;
    for (Index n = 1; n <= n_max; n = (n < 8 ? n + 1 : n * 2)) {
      PowerNormResult pn = power_norm(T, n);
      LogReal root = pn.value.pow(1.0 / double(n));
      upper = first ? root : min(upper, root);
      first = false;
    }
    // Dominant eigenvalue modulus by power iteration, as the achieved lower
    // estimate (exact for the diagonal/normal negative-test instances).
    const std::size_t d = T.dim();
    double best = 0.0;
    for (std::size_t s0 = 0; s0 < d; ++s0) {
      std::vector<double> x(d, 0.0);
      x[s0] = 1.0;
      double ratio = 0.0;
      for (int it = 0; it < 256; ++it) {
        std::vector<double> y(d, 0.0);
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j) y[i] += T.matrix[i][j] * x[j];
        double ny = 0, nx = 0;
        for (std::size_t i = 0; i < d; ++i) {
          ny += y[i] * y[i];
          nx += x[i] * x[i];
        }
        ny = std::sqrt(ny);
        nx = std::sqrt(nx);
        if (ny == 0 || nx == 0) {
          ratio = 0;
          break;
        }
        ratio = ny / nx;
        for (auto& e : y) e /= ny;
        x = y;
      }
      best = std::max(best, ratio);
    }
    iv.lower = LogReal::from_linear(best);
    iv.upper = max(iv.lower, upper);
    iv.lower = min(iv.lower, iv.upper);
    return iv;
  }
  throw std::logic_error("spectral_radius_estimate: unknown kind");
}

}  // namespace linchaos
