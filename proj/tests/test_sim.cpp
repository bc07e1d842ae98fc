#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "etcabs/sim.hpp"
#include "helpers.hpp"

using namespace etcabs;

namespace {

EtcDesign stationary_design() {
  // A x = 0 on the first axis, K zeroes the input there: x = (1, 0) is an
  // equilibrium of the held loop and the trigger never fires.
  EtcDesign d;
  d.A = Matrix{{0, 0}, {0, -1}};
  d.B = Matrix{{0}, {1}};
  d.K = Matrix{{0.0, 1.0}};
  d.E = Matrix{{0}, {1}};
  d.Acl = d.A - d.B * d.K;
  d.P = d.M = d.Psi = Matrix::Identity(2, 2);
  d.N = 0.5 * Matrix::Identity(2, 2);
  d.mu = 2.0;
  d.lambda_max_A = 0.0;
  d.log_norm_A = 0.0;
  d.lambda_max_EtE = 1.0;
  return d;
}

}  // namespace

TEST_CASE("policy naming round-trips") {
  for (const char* name : {"zero", "max-aligned", "sinusoid", "random-phase"})
    CHECK(policy_name(parse_policy(name)) == name);
  CHECK_THROWS_AS(parse_policy("bogus"), EtcabsError);
}

TEST_CASE("every policy respects the disturbance budget") {
  const EtcDesign& d = test::bench_design();
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> ut(0.0, 8.0);
  for (Policy p : {Policy::kZero, Policy::kMaxAligned, Policy::kSinusoid,
                   Policy::kRandomPhase}) {
    for (int i = 0; i < 250; ++i) {
      Vector x = test::random_matrix(rng, 2, 1, 2.0);
      if (x.norm() < 1e-6) continue;
      Disturbance w = make_disturbance(p, 0.001, d, x, 1.0, rng());
      double bound = std::sqrt(0.001) * x.norm();
      double t = ut(rng);
      CHECK(w(t).norm() <= bound + 1e-12);
      if (p == Policy::kMaxAligned)  // saturates the budget
        CHECK(w(t).norm() == doctest::Approx(bound).epsilon(1e-9));
      if (p == Policy::kZero) CHECK(w(t).norm() == 0);
    }
  }
}

TEST_CASE("zero budget silences every policy") {
  const EtcDesign& d = test::bench_design();
  Vector x{{1.0, -0.5}};
  for (Policy p : {Policy::kMaxAligned, Policy::kSinusoid,
                   Policy::kRandomPhase}) {
    Disturbance w = make_disturbance(p, 0.0, d, x, 1.0, 7);
    CHECK(w(0.3).norm() == 0);
  }
}

TEST_CASE("stationary state hits the forced-sampling cap") {
  EtcDesign d = stationary_design();
  Vector x{{1.0, 0.0}};
  Disturbance none = [](double) { return Vector::Zero(1); };
  StepResult r = step_interval(d, 0.0, x, none, 1e-4, 1e-6, 2.0);
  CHECK(r.cap_hit);
  CHECK(r.tau == doctest::Approx(2.0));
  CHECK((r.x_next - x).norm() < 1e-9);
}

TEST_CASE("inter-sample times are strictly positive") {
  const EtcDesign& d = test::bench_design();
  std::mt19937_64 rng(62);
  for (int i = 0; i < 30; ++i) {
    Vector x = test::random_matrix(rng, 2, 1);
    if (x.norm() < 1e-3) continue;
    Disturbance w = make_disturbance(Policy::kMaxAligned, 0.001, d, x, 1.0, 1);
    StepResult r = step_interval(d, 0.001, x, w, 1e-4, 1e-6, 8.0);
    CHECK(r.tau > 0);
    CHECK(r.tau <= 8.0);
    CHECK(r.max_omega <= std::sqrt(0.001) * x.norm() + 1e-12);
  }
}

TEST_CASE("event time converges under step refinement") {
  const EtcDesign& d = test::bench_design();
  Vector x{{1.0, 0.0}};
  Disturbance w = make_disturbance(Policy::kMaxAligned, 0.001, d, x, 1.0, 3);
  StepResult coarse = step_interval(d, 0.001, x, w, 1e-4, 1e-6, 8.0);
  StepResult fine = step_interval(d, 0.001, x, w, 1e-5, 1e-6, 8.0);
  CHECK(!coarse.cap_hit);
  CHECK(std::abs(coarse.tau - fine.tau) < 1e-3);
}

TEST_CASE("full runs keep consistent bookkeeping") {
  const EtcDesign& d = test::bench_design();
  auto cones = make_cones(10, 2);
  SimConfig cfg;
  cfg.horizon = 5.0;
  cfg.policy = Policy::kSinusoid;
  cfg.seed = 99;
  Trace tr = run(d, 0.001, Vector{{1.0, 0.2}}, cfg, cones);
  REQUIRE(tr.tau_k.size() >= 1);
  CHECK(tr.t_k.size() == tr.tau_k.size() + 1);
  CHECK(tr.x_k.size() == tr.t_k.size());
  CHECK(tr.regions.size() == tr.t_k.size());
  CHECK(tr.cap_hit.size() == tr.tau_k.size());
  CHECK(tr.max_omega.size() == tr.tau_k.size());
  CHECK(tr.t_k.front() == 0.0);
  for (size_t k = 0; k < tr.tau_k.size(); ++k) {
    CHECK(tr.tau_k[k] > 0);
    CHECK(tr.t_k[k + 1] ==
          doctest::Approx(tr.t_k[k] + tr.tau_k[k]).epsilon(1e-12));
    CHECK(tr.regions[k] >= 1);
    CHECK(tr.regions[k] <= 20);
  }
  CHECK(tr.t_k.back() <= 5.0 + 1e-9);

  // determinism: the same seed reproduces the trace exactly
  Trace tr2 = run(d, 0.001, Vector{{1.0, 0.2}}, cfg, cones);
  REQUIRE(tr2.tau_k.size() == tr.tau_k.size());
  for (size_t k = 0; k < tr.tau_k.size(); ++k)
    CHECK(tr2.tau_k[k] == tr.tau_k[k]);
}

TEST_CASE("a short horizon marks the last interval incomplete") {
  const EtcDesign& d = test::bench_design();
  auto cones = make_cones(10, 2);
  SimConfig cfg;
  cfg.horizon = 1e-4;  // below any inter-sample time
  Trace tr = run(d, 0.001, Vector{{1.0, 0.0}}, cfg, cones);
  CHECK(tr.incomplete_last);
}

TEST_CASE("time-step halving barely moves the event times") {
  const EtcDesign& d = test::bench_design();
  auto cones = make_cones(10, 2);
  SimConfig a, b;
  a.horizon = b.horizon = 2.0;
  a.policy = b.policy = Policy::kMaxAligned;
  a.dt = 1e-4;
  b.dt = 5e-5;
  Trace ta = run(d, 0.001, Vector{{0.3, -1.0}}, a, cones);
  Trace tb = run(d, 0.001, Vector{{0.3, -1.0}}, b, cones);
  size_t m = std::min(ta.tau_k.size(), tb.tau_k.size());
  REQUIRE(m >= 1);
  for (size_t k = 0; k + 1 < m; ++k)
    CHECK(std::abs(ta.tau_k[k] - tb.tau_k[k]) < 2e-4);
}
