#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "helpers.hpp"

using namespace etcabs;
using etcabs::test::bench_plant;

TEST_CASE("benchmark gain reproduces the reference value") {
  const EtcDesign& d = test::bench_design();
  REQUIRE(d.K.rows() == 1);
  CHECK(std::abs(d.K(0, 0) - 0.2361) < 5e-4);
  CHECK(std::abs(d.K(0, 1) - 6.2367) < 5e-4);
}

TEST_CASE("residual meets tolerance with the design state weight") {
  PlantSpec p = bench_plant();
  Matrix P = solve_care(p);
  Matrix R = p.B * p.B.transpose() -
             p.E * p.E.transpose() / (p.gamma * p.gamma);
  Matrix res = P * p.A + p.A.transpose() * P + Matrix::Identity(2, 2) -
               P * R * P;
  CHECK(res.norm() <= 1e-9 * (1 + P.squaredNorm()));
  // stabilizing and positive definite
  CHECK(lambda_min(0.5 * (P + P.transpose())) > 0);
  Eigen::EigenSolver<Matrix> es(p.A - R * P);
  CHECK(es.eigenvalues().real().maxCoeff() < 0);
}

TEST_CASE("stable scalar plant with zero weight has the zero root") {
  PlantSpec p;
  p.A = Matrix{{-1}};
  p.B = Matrix{{1}};
  p.E = Matrix{{0}};
  p.gamma = 10;
  p.beta = 1;
  Matrix P = solve_care(p, Matrix::Zero(1, 1));
  CHECK(std::abs(P(0, 0)) < 1e-9);
  CHECK(std::abs((p.B.transpose() * P)(0, 0)) < 1e-9);
}

TEST_CASE("unstable scalar plant, zero weight, no disturbance channel") {
  PlantSpec p;
  p.A = Matrix{{1}};
  p.B = Matrix{{1}};
  p.E = Matrix{{0}};
  p.gamma = 1e9;  // 1/gamma^2 ~ 0: -P^2 + 2P = 0 -> P = 2
  p.beta = 1;
  Matrix P = solve_care(p, Matrix::Zero(1, 1));
  CHECK(P(0, 0) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("uncontrollable unstable plant is rejected with spectrum info") {
  PlantSpec p;
  p.A = Matrix{{1}};
  p.B = Matrix{{0}};
  p.E = Matrix{{0}};
  p.gamma = 1;
  p.beta = 1;
  CHECK_THROWS_AS(solve_care(p), RiccatiError);
}

TEST_CASE("M - N is exactly half (1-beta^2) I") {
  const EtcDesign& d = test::bench_design();
  Matrix diff = d.M - d.N;
  const double half = 0.5 * (1 - 0.25 * 0.25);
  CHECK((diff - half * Matrix::Identity(2, 2)).norm() == 0);
}

TEST_CASE("build_mn degenerate cases") {
  std::mt19937_64 rng(11);
  Matrix P = test::random_spd(rng, 3);
  Matrix B = test::random_matrix(rng, 3, 2);
  SUBCASE("beta = 1 collapses M and N") {
    auto [M, N] = build_mn(P, B, 1.0);
    Matrix PBBtP = P * B * B.transpose() * P;
    CHECK((M - PBBtP).norm() < 1e-12);
    CHECK((N - PBBtP).norm() < 1e-12);
  }
  SUBCASE("P = 0, beta = 0 gives scaled identities") {
    auto [M, N] = build_mn(Matrix::Zero(3, 3), B, 0.0);
    CHECK((M - Matrix::Identity(3, 3)).norm() == 0);
    CHECK((N - 0.5 * Matrix::Identity(3, 3)).norm() == 0);
  }
}

TEST_CASE("select_mu_psi satisfies the multiplier constraint") {
  SUBCASE("identity") {
    auto [mu, Psi] = select_mu_psi(Matrix::Identity(2, 2), 1.0);
    CHECK(mu == doctest::Approx(2.0));
    CHECK((Psi - Matrix::Identity(2, 2)).norm() == 0);
  }
  SUBCASE("negative definite M clamps mu at zero") {
    auto [mu, Psi] = select_mu_psi(-2.0 * Matrix::Identity(2, 2), 1.0);
    CHECK(mu == 0.0);
    CHECK(lambda_max(-2.0 * Matrix::Identity(2, 2) + Psi - mu * Matrix::Identity(2, 2)) <= 0);
  }
  SUBCASE("benchmark M") {
    const EtcDesign& d = test::bench_design();
    CHECK(d.mu == doctest::Approx(lambda_max(d.M) + 1.0));
    CHECK(lambda_max(d.M + d.Psi - d.mu * Matrix::Identity(2, 2)) <= 1e-12);
  }
}

TEST_CASE("design spectral quantities") {
  const EtcDesign& d = test::bench_design();
  CHECK(d.lambda_max_A == doctest::Approx(3 + std::sqrt(10.0)).epsilon(1e-12));
  CHECK(d.log_norm_A == doctest::Approx(d.lambda_max_A / 2));
  CHECK(d.lambda_max_EtE == doctest::Approx(1.0));
  Eigen::EigenSolver<Matrix> es(d.Acl);
  CHECK(es.eigenvalues().real().maxCoeff() < 0);  // closed loop Hurwitz
}

TEST_CASE("matrix identity bound (cross-term decoupling)") {
  // E G + G^T E^T <= E P E^T + G^T P^{-1} G for SPD P
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    int n = 2 + static_cast<int>(rng() % 3);
    Matrix E = test::random_matrix(rng, n, n);
    Matrix G = test::random_matrix(rng, n, n);
    Matrix P = test::random_spd(rng, n);
    Matrix gap = E * G + G.transpose() * E.transpose() -
                 E * P * E.transpose() -
                 G.transpose() * P.inverse() * G;
    CHECK(lambda_max(0.5 * (gap + gap.transpose())) <= 1e-9);
  }
}

TEST_CASE("log-norm exponential bound") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ut(0.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    int n = 2 + static_cast<int>(rng() % 3);
    Matrix A = test::random_matrix(rng, n, n);
    double mu = 0.5 * lambda_max(A + A.transpose());
    double t = ut(rng);
    double opnorm = expm(A * t).jacobiSvd().singularValues()(0);
    CHECK(opnorm <= std::exp(mu * t) * (1 + 1e-9) + 1e-9);
  }
}
