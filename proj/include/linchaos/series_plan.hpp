#pragma once

#include <string>
#include <vector>

#include "linchaos/log_real.hpp"
#include "linchaos/space.hpp"
#include "linchaos/sparse_vector.hpp"

namespace linchaos::construct {

// One term of a truncated series construction.
struct SeriesTerm {
  LogReal coefficient;
  SparseVector vector;   // term vector, coefficient not yet applied
  Index source_index = 0;
};

// Truncated series with an explicit bound on everything dropped. The tail
// bound must stay far below the margins of the inequalities the truncated
// sum is asked to satisfy.
struct SeriesPlan {
  std::vector<SeriesTerm> terms;
  Index truncation = 0;
  LogReal tail_bound;  // norm bound on the dropped tail; zero when nothing dropped
  std::vector<std::string> envelope_targets;

  SparseVector assemble() const {
    SparseVector u;
    for (const auto& t : terms) u = axpy(t.coefficient, t.vector, u);
    return u;
  }
};

struct VerifiedInequality {
  std::string name;
  double achieved_log = 0.0;  // log of the measured value
  double required_log = 0.0;  // log of the bound
  bool greater = true;        // sense: achieved > required (else <)
  bool holds = false;
};

struct ConstructionReport {
  bool verified = false;
  std::vector<VerifiedInequality> checks;

  // Smallest linear margin |achieved - required| among passing checks.
  LogReal min_margin() const {
    LogReal m;
    bool first = true;
    for (const auto& c : checks) {
      if (!c.holds) continue;
      LogReal a = LogReal::exp_of(c.achieved_log);
      LogReal r = LogReal::exp_of(c.required_log);
      LogReal diff = (a - r).abs();
      if (first || diff < m) {
        m = diff;
        first = false;
      }
    }
    return first ? LogReal::zero() : m;
  }

  void add(std::string name, double achieved_log, double required_log, bool greater) {
    bool holds = greater ? achieved_log > required_log : achieved_log < required_log;
    checks.push_back({std::move(name), achieved_log, required_log, greater, holds});
  }

  void finalize() {
    verified = !checks.empty();
    for (const auto& c : checks) verified = verified && c.holds;
  }
};

}  // namespace linchaos::construct
