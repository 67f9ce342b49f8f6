#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "linchaos/detectors.hpp"
#include "linchaos/orbit_stats.hpp"

using namespace linchaos;

namespace {

SpaceSpec ell2() { return SpaceSpec::ell(2.0); }

OperatorSpec shift_w2() {
  return OperatorSpec::weighted_backward(WeightSequence::constant(2.0), ell2());
}

// Forward-shift weights whose running product oscillates: crest 2 at every
// peak, trough 2^-k at the k-th trough.
OperatorSpec oscillating_shift(int pairs) {
  std::vector<double> w;
  for (int k = 1; k <= pairs; ++k) {
    for (int t = 0; t < k; ++t) w.push_back(2.0);        // climb -(k-1) -> 1
    for (int t = 0; t < k + 1; ++t) w.push_back(0.5);    // descend 1 -> -k
  }
  return OperatorSpec::weighted_forward(
      WeightSequence::from_values(std::move(w), ConstantTail{LogReal::one()}), ell2());
}

// Brute-force distributional function: both orbits iterated separately,
// distances via per-step subtraction.
double brute_F(const OperatorSpec& T, const SparseVector& x, const SparseVector& y, Index n,
               double tau) {
  SparseVector cx = x, cy = y;
  Index cnt = 0;
  for (Index i = 0; i < n; ++i) {
    LogReal d = norm(cx - cy, T.space);
    if (d < LogReal::from_linear(tau)) ++cnt;
    cx = apply(T, cx);
    cy = apply(T, cy);
  }
  return double(cnt) / double(n);
}

}  // namespace

TEST_CASE("distributional function golden values") {
  auto T = shift_w2();
  SparseVector x = SparseVector::basis(5);
  SparseVector zero;

  CHECK(distributional_function(T, x, x, 7, LogReal::from_linear(0.1)) == 1.0);
  CHECK(distributional_function(T, x, zero, 10, LogReal::one()) == 0.4);
  CHECK(distributional_function(T, x, zero, 10, LogReal::from_linear(64.0)) == 1.0);
}

TEST_CASE("distributional function equals brute force on the difference orbit") {
  auto T = shift_w2();
  std::mt19937 rng(42);
  std::uniform_int_distribution<Index> idx(0, 12);
  for (int t = 0; t < 20; ++t) {
    SparseVector x = SparseVector::basis(idx(rng), LogReal::from_linear(1.5));
    SparseVector y = SparseVector::basis(idx(rng));
    // tau values chosen off the orbit's exact value grid; a tie at tau is a
    // legitimate boundary where two floating paths may differ.
    for (double tau : {0.3, 1.1, 3.7, 99.5}) {
      CHECK(distributional_function(T, x, y, 20, LogReal::from_linear(tau)) ==
            brute_F(T, x, y, 20, tau));
    }
  }
}

TEST_CASE("translation invariance: F_xy equals F_{x-y,0} exactly") {
  auto T = shift_w2();
  std::mt19937 rng(43);
  std::uniform_int_distribution<Index> idx(0, 12);
  for (int t = 0; t < 20; ++t) {
    SparseVector x = SparseVector::basis(idx(rng), LogReal::from_linear(1.5));
    SparseVector y = SparseVector::basis(idx(rng));
    for (double tau : {0.25, 1.0, 3.0, 100.0}) {
      CHECK(distributional_function(T, x, y, 20, LogReal::from_linear(tau)) ==
            distributional_function(T, x - y, SparseVector(), 20, LogReal::from_linear(tau)));
    }
  }
}

TEST_CASE("distributional function monotone in tau") {
  auto T = shift_w2();
  SparseVector x = SparseVector::basis(7, LogReal::from_linear(0.7));
  double prev = 0.0;
  for (double tau : {0.01, 0.1, 1.0, 10.0, 1000.0}) {
    double f = distributional_function(T, x, SparseVector(), 25, LogReal::from_linear(tau));
    CHECK(f >= prev);
    prev = f;
  }
}

TEST_CASE("density of simple sets") {
  SECTION("even numbers at horizon 10^4") {
    std::vector<Index> evens;
    for (Index n = 2; n <= 10000; n += 2) evens.push_back(n);
    IndexSet A = IndexSet::explicit_set(evens);
    std::vector<Index> cps;
    for (Index n = 1000; n <= 10000; n += 1000) cps.push_back(n);
    DensityReport rep = density(A, 10000, cps);
    CHECK(rep.udens_estimate == Catch::Approx(0.5).margin(1e-3));
    CHECK(rep.ldens_estimate == Catch::Approx(0.5).margin(1e-3));
  }

  SECTION("union of dyadic blocks at horizon 2^20") {
    std::vector<Index> idxs;
    for (Index k = 0; k <= 9; ++k) {
      Index lo = Index(1) << (2 * k), hi = Index(1) << (2 * k + 1);
      for (Index n = lo; n < hi; ++n) idxs.push_back(n);
    }
    Index horizon = Index(1) << 20;
    idxs.push_back(horizon);  // start of the next block
    IndexSet A = IndexSet::explicit_set(idxs);
    std::vector<Index> cps;
    for (Index n = 2; n <= horizon; n *= 2) cps.push_back(n);
    DensityReport rep = density(A, horizon, cps);
    CHECK(rep.udens_estimate == Catch::Approx(2.0 / 3.0).margin(0.01));
    CHECK(rep.ldens_estimate == Catch::Approx(1.0 / 3.0).margin(0.01));
  }

  SECTION("empty set and empty checkpoints") {
    IndexSet empty = IndexSet::explicit_set({});
    DensityReport rep = density(empty, 100, {10, 100});
    CHECK(rep.udens_estimate == 0.0);
    CHECK(rep.ldens_estimate == 0.0);
    CHECK_THROWS_AS(density(empty, 100, {}), std::invalid_argument);
  }
}

TEST_CASE("set and complement counts add to n at every checkpoint") {
  auto T = shift_w2();
  auto ev = std::make_shared<const OrbitEvaluator>(
      OrbitEvaluator::make(T, SparseVector::basis(40), 200, kDefaultOrbitBudget));
  double tau = std::log(5.0);
  IndexSet A = IndexSet::threshold(ev, true, tau);
  for (Index n : {7, 40, 41, 100, 200}) {
    Index below = A.count_upto(n);
    Index not_below = 0;
    for (Index i = 1; i <= n; ++i) not_below += !(ev->log_norm(i) < tau);
    CHECK(below + not_below == n);
  }
}

TEST_CASE("irregular test on oscillating block orbit") {
  auto T = oscillating_shift(8);
  SparseVector e0 = SparseVector::basis(0);
  DetectorResult r =
      irregular_test(T, e0, 100, LogReal::one(), LogReal::from_linear(0.2), 3);
  REQUIRE(r.accepted);
  CHECK(r.cert.K >= 3);
  CHECK(verify_certificate(r.cert) == std::nullopt);

  // trough_decay = 1 control: periodic orbit in {1, 2}, liminf stays 1
  std::vector<double> flat;
  for (int k = 0; k < 12; ++k) {
    flat.push_back(2.0);
    flat.push_back(0.5);
  }
  auto P = OperatorSpec::weighted_forward(
      WeightSequence::from_values(std::move(flat), ConstantTail{LogReal::one()}), ell2());
  DetectorResult rp = irregular_test(P, e0, 20, LogReal::one(), LogReal::from_linear(0.2), 3);
  CHECK_FALSE(rp.accepted);
}

TEST_CASE("irregular test rejections") {
  auto M = OperatorSpec::finite({{0.5, 0.0}, {0.0, 1.0 / 3.0}}, ell2());
  DetectorResult r1 =
      irregular_test(M, SparseVector::from_linear({1.0, 1.0}), 500, LogReal::one(), LogReal::one());
  CHECK_FALSE(r1.accepted);

  auto T = shift_w2();
  DetectorResult r2 =
      irregular_test(T, SparseVector::basis(5), 100, LogReal::one(), LogReal::one());
  CHECK_FALSE(r2.accepted);
  CHECK(r2.rejection.best_K <= 1);
}

TEST_CASE("dirregular test basics") {
  SECTION("long doubling ramp accepts") {
    auto T = shift_w2();
    DetectorResult r =
        dirregular_test(T, SparseVector::basis(256), 4096, LogReal::one(), 0.9);
    REQUIRE(r.accepted);
    CHECK(verify_certificate(r.cert) == std::nullopt);
    CHECK(r.cert.densities[0].udens >= 0.9);
    CHECK(r.cert.densities[1].udens >= 0.9);
  }

  SECTION("isometric shift rejects") {
    auto B = OperatorSpec::backward(ell2());
    DetectorResult r = dirregular_test(B, SparseVector::basis(64), 1024, LogReal::from_linear(0.5));
    CHECK_FALSE(r.accepted);
    CHECK(r.rejection.failing_side == "B");
  }

  SECTION("short ramp rejects on side B at default floor") {
    auto T = shift_w2();
    DetectorResult r = dirregular_test(T, SparseVector::basis(5), 4096, LogReal::from_linear(0.1));
    CHECK_FALSE(r.accepted);
    CHECK(r.rejection.failing_side == "B");
  }
}

TEST_CASE("li-yorke pair test") {
  auto T = oscillating_shift(8);
  SparseVector e0 = SparseVector::basis(0);
  DetectorResult r = liyorke_pair_test(T, e0, SparseVector(), 100, LogReal::from_linear(1.5));
  REQUIRE(r.accepted);
  CHECK(verify_certificate(r.cert) == std::nullopt);

  DetectorResult same = liyorke_pair_test(T, e0, e0, 100, LogReal::one());
  CHECK_FALSE(same.accepted);
  CHECK(same.rejection.reason.find("precondition") != std::string::npos);
}

TEST_CASE("scrambled line check") {
  auto T = shift_w2();
  SparseVector u = SparseVector::basis(256);
  CHECK(scrambled_line_check(T, u, {1.0, 2.0, -1.0}, 4096, LogReal::one()));
  CHECK(scrambled_line_check(T, u, {1.0, 1.0}, 4096, LogReal::one()));
  CHECK_FALSE(scrambled_line_check(T, SparseVector(), {1.0, 2.0}, 4096, LogReal::one()));

  Certificate cert;
  REQUIRE(scrambled_line_check(T, u, {1.0, 2.0, -1.0}, 4096, LogReal::one(), 0.9,
                               kDefaultOrbitBudget, &cert));
  CHECK(cert.claim == ClaimKind::scrambled_line);
  CHECK(verify_certificate(cert) == std::nullopt);
}

TEST_CASE("detector verdicts are scale invariant") {
  auto T = oscillating_shift(8);
  SparseVector x = SparseVector::basis(0);
  LogReal alpha = LogReal::from_log(1, 200.0);  // far outside double range

  DetectorResult r1 = irregular_test(T, x, 100, LogReal::one(), LogReal::from_linear(0.2), 3);
  DetectorResult r2 = irregular_test(T, x.scaled(alpha), 100, alpha, alpha * LogReal::from_linear(0.2), 3);
  REQUIRE(r1.accepted);
  REQUIRE(r2.accepted);
  REQUIRE(r1.cert.K == r2.cert.K);
  for (int k = 0; k < r1.cert.K; ++k) {
    CHECK(r1.cert.low_chain[k].n == r2.cert.low_chain[k].n);
    CHECK(r1.cert.high_chain[k].n == r2.cert.high_chain[k].n);
  }

  auto S = shift_w2();
  SparseVector u = SparseVector::basis(256);
  DetectorResult d1 = dirregular_test(S, u, 4096, LogReal::one());
  DetectorResult d2 = dirregular_test(S, u.scaled(alpha), 4096, alpha);
  REQUIRE(d1.accepted);
  REQUIRE(d2.accepted);
  for (int s = 0; s < 2; ++s) {
    CHECK(d1.cert.densities[s].counts == d2.cert.densities[s].counts);
  }
}

TEST_CASE("tampered certificates fail re-verification with a named field") {
  auto T = shift_w2();
  DetectorResult r = dirregular_test(T, SparseVector::basis(256), 4096, LogReal::one());
  REQUIRE(r.accepted);

  Certificate bad = r.cert;
  bad.densities[1].counts[2] += 1;
  auto err = verify_certificate(bad);
  REQUIRE(err.has_value());
  CHECK(err->find("counts") != std::string::npos);

  Certificate bad2 = r.cert;
  REQUIRE(!bad2.densities[1].envelope.empty());
  bad2.densities[1].envelope[0].lognorm += 1e-9;
  auto err2 = verify_certificate(bad2);
  REQUIRE(err2.has_value());
  CHECK(err2->find("lognorm") != std::string::npos);
}
