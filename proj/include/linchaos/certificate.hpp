#pragma once

#include <string>
#include <vector>

#include "linchaos/operator_spec.hpp"
#include "linchaos/orbit_stats.hpp"

namespace linchaos {

enum class ClaimKind {
  li_yorke_pair,
  irregular_vector,
  distributionally_irregular_vector,
  scrambled_line,
  distributional_chaos,
};

inline const char* claim_name(ClaimKind c) {
  switch (c) {
    case ClaimKind::li_yorke_pair: return "li_yorke_pair";
    case ClaimKind::irregular_vector: return "irregular_vector";
    case ClaimKind::distributionally_irregular_vector: return "distributionally_irregular_vector";
    case ClaimKind::scrambled_line: return "scrambled_line";
    case ClaimKind::distributional_chaos: return "distributional_chaos";
  }
  return "?";
}

struct IndexValue {
  Index n = 0;
  double lognorm = kNegInf;
  bool operator==(const IndexValue&) const = default;
};

// One side of distributional evidence: the set {n : lognorm <|> tau} with
// counts at checkpoints and a geometric-envelope witness subsequence.
struct DensityEvidence {
  bool below = true;
  double tau_log = 0.0;
  std::vector<Index> checkpoints;
  std::vector<Index> counts;
  double udens = 0.0;
  double ldens = 0.0;
  std::vector<IndexValue> envelope;
};

// Machine-checkable evidence bundle for a chaos claim. Every numeric field
// is recomputable from the operator and witnesses; re-verification must
// reproduce the stored values bit-identically.
struct Certificate {
  ClaimKind claim = ClaimKind::irregular_vector;
  OperatorSpec op;
  std::vector<SparseVector> witnesses;
  Index horizon = 0;
  int K = 0;

  // Thresholds (natural-log values; meaning depends on the claim).
  double low_log = 0.0;
  double high_log = 0.0;
  double delta_log = 0.0;
  double epsilon_log = 0.0;
  double density_floor = 0.0;

  std::vector<IndexValue> low_chain;
  std::vector<IndexValue> high_chain;
  std::vector<DensityEvidence> densities;  // small side then large side
  std::vector<double> scalars;             // scrambled-line sample scalars
};

// Diagnostics attached to a detector rejection.
struct Rejection {
  std::string reason;
  int best_K = 0;
  Index blocking_index = 0;
  std::string failing_side;
  double best_density = 0.0;
};

struct DetectorResult {
  bool accepted = false;
  Certificate cert;
  Rejection rejection;
};

}  // namespace linchaos
