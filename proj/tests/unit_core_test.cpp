#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "linchaos/log_real.hpp"
#include "linchaos/operator_spec.hpp"
#include "linchaos/orbit.hpp"
#include "linchaos/power_norm.hpp"
#include "linchaos/space.hpp"
#include "linchaos/sparse_vector.hpp"
#include "linchaos/weight_sequence.hpp"

using namespace linchaos;

namespace {

bool log_close(const LogReal& a, double linear, double tol = 1e-12) {
  if (linear == 0.0) return a.is_zero();
  LogReal b = LogReal::from_linear(linear);
  return a.sign() == b.sign() && std::abs(a.log_mag() - b.log_mag()) <= tol * std::max(1.0, std::abs(b.log_mag()));
}

SpaceSpec ell2() { return SpaceSpec::ell(2.0); }

OperatorSpec shift_w2() {
  return OperatorSpec::weighted_backward(WeightSequence::constant(2.0), ell2());
}

SparseVector random_sparse(std::mt19937& rng, Index max_index, int max_entries) {
  std::uniform_int_distribution<Index> idx(0, max_index);
  std::uniform_real_distribution<double> mag(-50.0, 50.0);
  std::uniform_int_distribution<int> cnt(1, max_entries), sgn(0, 1);
  std::vector<SparseVector::Entry> es;
  int n = cnt(rng);
  for (int t = 0; t < n; ++t) {
    es.push_back({idx(rng), LogReal::from_log(sgn(rng) ? 1 : -1, mag(rng))});
  }
  return SparseVector(std::move(es));
}

}  // namespace

TEST_CASE("LogReal arithmetic") {
  LogReal two = LogReal::from_linear(2.0);
  LogReal three = LogReal::from_linear(3.0);
  CHECK(log_close(two * three, 6.0));
  CHECK(log_close(two + three, 5.0));
  CHECK(log_close(two - three, -1.0));
  CHECK(log_close(three / two, 1.5));
  CHECK((two - two).is_zero());
  CHECK(log_close(two.pow(10.0), 1024.0));
  CHECK(LogReal::from_linear(0.0).is_zero());
  CHECK(LogReal::from_linear(-2.0) < LogReal::zero());
  CHECK(two < three);
  CHECK(LogReal::from_linear(-3.0) < LogReal::from_linear(-2.0));

  // Addition across an extreme dynamic range keeps the dominant operand.
  LogReal huge = LogReal::exp_of(1e5);
  LogReal tiny = LogReal::exp_of(-1e5);
  CHECK(log_close(huge + tiny, 0.0, 1.0) == false);
  CHECK((huge + tiny).log_mag() == Catch::Approx(1e5).margin(1e-9));

  // Cancellation window: a subtraction landing far below the larger
  // operand collapses to exact zero.
  LogReal a = LogReal::exp_of(10.0);
  LogReal b = LogReal::from_log(-1, 10.0 - 1e-18);
  CHECK(a.add(b).is_zero());
  LogReal c = LogReal::from_log(-1, 9.0);
  CHECK(!a.add(c).is_zero());
}

TEST_CASE("axpy examples") {
  SparseVector e0 = SparseVector::basis(0);
  SparseVector e1 = SparseVector::basis(1);
  SparseVector e3 = SparseVector::basis(3);

  CHECK(axpy(LogReal::one(), e0, e0.scaled(LogReal::from_linear(-1.0))).is_zero());

  SparseVector r = axpy(LogReal::from_linear(2.0), e1, e0);
  CHECK(r.support_size() == 2);
  CHECK(log_close(r.at(0), 1.0));
  CHECK(log_close(r.at(1), 2.0));

  CHECK(axpy(LogReal::zero(), e1, e3) == e3);
}

TEST_CASE("weight products") {
  auto s2 = WeightSequence::constant(2.0);
  CHECK(log_close(s2.product(1, 5), 32.0));

  WeightSequence pl({{LogReal::one(), 1}}, PowerLawTail{-2.0 / 3.0, 0});
  CHECK(pl.log_product(1, 3) == Catch::Approx((-2.0 / 3.0) * std::log(6.0)).epsilon(1e-12));

  // prefix [1], then geometric halving from index 1
  WeightSequence geo({{LogReal::one(), 1}}, GeometricTail{LogReal::one(), LogReal::from_linear(0.5)});
  CHECK(log_close(geo.product(1, 4), 1.0 / 64.0));

  CHECK_THROWS_AS(s2.product(3, 2), std::invalid_argument);

  // product splitting identity
  WeightSequence mixed({{LogReal::from_linear(3.0), 2}, {LogReal::from_linear(0.25), 3}},
                       PowerLawTail{-1.0, 1});
  for (Index a = 0; a < 4; ++a) {
    for (Index b = a; b < 9; ++b) {
      for (Index c = b + 1; c < 12; ++c) {
        double lhs = mixed.log_product(a, b) + mixed.log_product(b + 1, c);
        CHECK(lhs == Catch::Approx(mixed.log_product(a, c)).margin(1e-9));
      }
    }
  }
}

TEST_CASE("norms") {
  CHECK(log_close(norm(SparseVector::basis(0), ell2()), 1.0));

  WeightSequence v12 = WeightSequence::from_values({1.0, 2.0}, ConstantTail{LogReal::one()});
  SparseVector x = SparseVector::from_linear({1.0, 1.0});
  CHECK(log_close(norm(x, SpaceSpec::ell(1.0, v12)), 3.0));
  CHECK(log_close(norm(x, SpaceSpec::c0v(v12)), 2.0));
  CHECK(norm(SparseVector(), ell2()).is_zero());

  // homogeneity is exact in log domain
  LogReal alpha = LogReal::from_log(-1, 123.456);
  SparseVector y = SparseVector::from_linear({3.0, -4.0});
  CHECK(norm(y.scaled(alpha), ell2()) == alpha.abs() * norm(y, ell2()));
}

TEST_CASE("norm triangle inequality on random vectors") {
  std::mt19937 rng(12345);
  for (int t = 0; t < 200; ++t) {
    SparseVector x = random_sparse(rng, 40, 6);
    SparseVector y = random_sparse(rng, 40, 6);
    LogReal lhs = norm(x + y, ell2());
    LogReal rhs = norm(x, ell2()) + norm(y, ell2());
    CHECK(lhs <= rhs * LogReal::exp_of(1e-9));
  }
}

TEST_CASE("apply examples") {
  auto T = shift_w2();
  SparseVector img = apply(T, SparseVector::basis(5));
  CHECK(img.support_size() == 1);
  CHECK(log_close(img.at(4), 2.0));

  auto B = OperatorSpec::backward(ell2());
  CHECK(apply(B, SparseVector::basis(0)).is_zero());

  auto IpT = OperatorSpec::scalar_plus(LogReal::one(), T);
  SparseVector r = apply(IpT, SparseVector::basis(1));
  CHECK(log_close(r.at(1), 1.0));
  CHECK(log_close(r.at(0), 2.0));
}

TEST_CASE("orbit of basis vector under doubling shift") {
  auto T = shift_w2();
  OrbitRecord rec = orbit(T, SparseVector::basis(5), 8);
  std::vector<double> expect = {1, 2, 4, 8, 16, 32, 0, 0, 0};
  REQUIRE(rec.lognorms.size() == 9);
  for (std::size_t n = 0; n < expect.size(); ++n) {
    if (expect[n] == 0) {
      CHECK(rec.lognorms[n] == kNegInf);
    } else {
      CHECK(rec.lognorms[n] == Catch::Approx(std::log(expect[n])).margin(1e-10));
    }
  }

  OrbitRecord zero = orbit(T, SparseVector(), 5);
  for (double v : zero.lognorms) CHECK(v == kNegInf);
}

TEST_CASE("orbit of basis under backward shift on decaying power-law space") {
  WeightSequence v({}, PowerLawTail{-1.0, 1});  // v_i = 1/(i+1)
  auto B = OperatorSpec::backward(SpaceSpec::ell(2.0, v));
  OrbitRecord rec = orbit(B, SparseVector::basis(9), 3);
  for (Index n = 0; n <= 3; ++n) {
    CHECK(rec.lognorms[n] == Catch::Approx(0.5 * std::log(1.0 / double(10 - n))).margin(1e-12));
  }
}

TEST_CASE("profile and enumeration agree") {
  std::mt19937 rng(777);

  SECTION("multi-entry seed under constant-weight backward shift") {
    auto T = shift_w2();
    for (int t = 0; t < 20; ++t) {
      SparseVector x = random_sparse(rng, 30, 5);
      auto prof = OrbitProfile::build(T, x, 40);
      REQUIRE(prof.has_value());
      OrbitRecord rec = orbit_enumerated(T, x, 40);
      for (Index n = 0; n <= 40; ++n) {
        if (rec.lognorms[n] == kNegInf) {
          CHECK(prof->log_norm(n) == kNegInf);
        } else {
          CHECK(prof->log_norm(n) == Catch::Approx(rec.lognorms[n]).margin(1e-10));
        }
      }
    }
  }

  SECTION("block-weight forward shift, single seed") {
    WeightSequence w({}, AlternatingBlocksTail{LogReal::from_linear(2.0), LogReal::from_linear(0.5),
                                               {0, 3}, {0, 2}});
    auto F = OperatorSpec::weighted_forward(w, ell2());
    auto prof = OrbitProfile::build(F, SparseVector::basis(0), 60);
    REQUIRE(prof.has_value());
    OrbitRecord rec = orbit_enumerated(F, SparseVector::basis(0), 60);
    for (Index n = 0; n <= 60; ++n) {
      CHECK(prof->log_norm(n) == Catch::Approx(rec.lognorms[n]).margin(1e-10));
    }
  }

  SECTION("geometric space weights, multi-entry seed under plain backward shift") {
    WeightSequence v({}, GeometricTail{LogReal::one(), LogReal::from_linear(0.5)});
    auto B = OperatorSpec::backward(SpaceSpec::ell(2.0, v));
    for (int t = 0; t < 20; ++t) {
      SparseVector x = random_sparse(rng, 25, 4);
      auto prof = OrbitProfile::build(B, x, 40);
      REQUIRE(prof.has_value());
      OrbitRecord rec = orbit_enumerated(B, x, 40);
      for (Index n = 0; n <= 40; ++n) {
        if (rec.lognorms[n] == kNegInf) {
          CHECK(prof->log_norm(n) == kNegInf);
        } else {
          CHECK(prof->log_norm(n) == Catch::Approx(rec.lognorms[n]).margin(1e-10));
        }
      }
    }
  }
}

TEST_CASE("profile counting matches brute force") {
  auto T = shift_w2();
  std::mt19937 rng(31415);
  for (int t = 0; t < 10; ++t) {
    SparseVector x = random_sparse(rng, 30, 5);
    auto prof = OrbitProfile::build(T, x, 64);
    REQUIRE(prof.has_value());
    OrbitRecord rec = orbit_enumerated(T, x, 64);
    for (double tau : {-20.0, -1.0, 0.0, 1.0, 5.0, 30.0}) {
      Index cb = 0, ca = 0;
      for (Index n = 1; n <= 64; ++n) {
        cb += rec.lognorms[n] < tau;
        ca += rec.lognorms[n] > tau;
      }
      CHECK(prof->count_below(1, 65, tau) == cb);
      CHECK(prof->count_above(1, 65, tau) == ca);
    }
  }
}

TEST_CASE("semigroup property on random seeds") {
  auto T = shift_w2();
  std::mt19937 rng(999);
  for (int t = 0; t < 50; ++t) {
    SparseVector x = random_sparse(rng, 20, 4);
    SparseVector lhs = apply_power(T, apply_power(T, x, 3), 4);
    SparseVector rhs = apply_power(T, x, 7);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("power norms of shifts") {
  auto T = shift_w2();
  PowerNormResult r5 = power_norm(T, 5);
  CHECK(r5.exact);
  CHECK(log_close(r5.value, 32.0));

  CHECK(log_close(power_norm(T, 0).value, 1.0));

  WeightSequence v({}, PowerLawTail{-1.0, 1});
  auto B = OperatorSpec::backward(SpaceSpec::ell(2.0, v));
  PowerNormResult r3 = power_norm(B, 3);
  CHECK(r3.exact);
  CHECK(log_close(r3.value, 2.0));
  CHECK(r3.witness_k == 0);

  // submultiplicativity
  for (Index m = 1; m <= 6; ++m) {
    for (Index n = 1; n <= 6; ++n) {
      LogReal lhs = power_norm(B, m + n).value;
      LogReal rhs = power_norm(B, m).value * power_norm(B, n).value;
      CHECK(lhs <= rhs * LogReal::exp_of(1e-10));
    }
  }

  // ||T^n x|| <= ||T^n|| ||x||
  std::mt19937 rng(2718);
  for (int t = 0; t < 30; ++t) {
    SparseVector x = random_sparse(rng, 15, 4);
    for (Index n : {1, 2, 5}) {
      LogReal lhs = norm(apply_power(B, x, n), B.space);
      LogReal rhs = power_norm(B, n).value * norm(x, B.space);
      CHECK(lhs <= rhs * LogReal::exp_of(1e-10));
    }
  }
}

TEST_CASE("power norm of block-weight shift") {
  // weights: blocks of 2s (length 3) then 1/2s (length 2); windows of
  // length 3 fit inside a hi run, so ||T^3|| = 8 exactly.
  WeightSequence w({}, AlternatingBlocksTail{LogReal::from_linear(2.0), LogReal::from_linear(0.5),
                                             {0, 3}, {0, 2}});
  auto F = OperatorSpec::weighted_forward(w, ell2());
  CHECK(log_close(power_norm(F, 3).value, 8.0));
  // length-5 windows cover one full period: best is 3 up, 2 down = 2.
  CHECK(log_close(power_norm(F, 5).value, 2.0));
}

TEST_CASE("spectral radius estimates") {
  auto T = shift_w2();
  auto iv = spectral_radius_estimate(T);
  CHECK(iv.degenerate());
  CHECK(log_close(iv.lower, 2.0));

  auto M = OperatorSpec::finite({{0.5, 0.0}, {0.0, 1.0 / 3.0}}, ell2());
  auto ivm = spectral_radius_estimate(M);
  CHECK(ivm.upper.linear() == Catch::Approx(0.5).margin(1e-9));
  CHECK(ivm.lower.linear() == Catch::Approx(0.5).margin(1e-9));

  WeightSequence v({}, PowerLawTail{-1.0, 1});
  auto B = OperatorSpec::backward(SpaceSpec::ell(2.0, v));
  auto ivb = spectral_radius_estimate(B);
  CHECK(log_close(ivb.lower, 1.0));
  CHECK(ivb.upper >= ivb.lower);

  WeightSequence vg({}, GeometricTail{LogReal::one(), LogReal::from_linear(0.5)});
  auto Bg = OperatorSpec::backward(SpaceSpec::ell(2.0, vg));
  auto ivg = spectral_radius_estimate(Bg);
  CHECK(ivg.degenerate());
  CHECK(ivg.lower.linear() == Catch::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("scalar plus power norm is a flagged bound") {
  auto T = shift_w2();
  auto IpT = OperatorSpec::scalar_plus(LogReal::one(), T);
  PowerNormResult r = power_norm(IpT, 3);
  CHECK_FALSE(r.exact);
  CHECK(log_close(r.value, 27.0));
}

TEST_CASE("orbit budget") {
  auto T = shift_w2();
  CHECK_THROWS_AS(orbit_enumerated(T, SparseVector::basis(5), 1 << 20, 1000), budget_error);
}
