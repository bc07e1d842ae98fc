#include "etcabs/trigger.hpp"

#include <cmath>

#include "etcabs/matexp.hpp"

namespace etcabs {

Matrix transition_at(const EtcDesign& d, double t) {
  const Eigen::Index n = d.n();
  return Matrix::Identity(n, n) + exp_integral(d.A, t) * d.Acl;
}

double d_a(double lambda, double t) {
  const double z = lambda * t;
  if (std::abs(z) < 1e-6) {
    // t * (1 + z/2 + z^2/6 + z^3/24); the pole at lambda = 0 is removable.
    return t * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));
  }
  return (std::exp(z) - 1.0) / lambda;
}

Matrix phi_at(const EtcDesign& d, double W, double t) {
  const Eigen::Index n = d.n();
  const Matrix Lmi = transition_at(d, t) - Matrix::Identity(n, n);
  const double gain =
      t * W * d.mu * d.lambda_max_EtE * d_a(d.lambda_max_A, t);
  Matrix phi(2 * n, 2 * n);
  phi.topLeftCorner(n, n) = Lmi.transpose() * d.M * Lmi +
                            gain * Matrix::Identity(n, n) - d.N;
  phi.topRightCorner(n, n) = Lmi.transpose() * d.M;
  phi.bottomLeftCorner(n, n) = d.M * Lmi;
  phi.bottomRightCorner(n, n) = -d.Psi;
  return 0.5 * (phi + phi.transpose());
}

Matrix theta_at(const EtcDesign& d, double W, double t) {
  const Eigen::Index n = d.n();
  Matrix phi = phi_at(d, W, t);
  const Matrix phi1 = phi.topLeftCorner(n, n);
  const Matrix phi2 = phi.topRightCorner(n, n);
  // Psi > 0, so Phi <= 0 iff Phi1 + Phi2 Psi^{-1} Phi2^T <= 0.
  Matrix theta =
      phi1 + phi2 * d.Psi.ldlt().solve(Matrix(phi2.transpose()));
  return 0.5 * (theta + theta.transpose());
}

double global_tau_prime(const EtcDesign& d, double W, double sigma, int grid,
                        bool* enabled) {
  auto level = [&](double t) { return lambda_max(phi_at(d, W, t)); };
  if (grid < 2) grid = 2;
  double lo = 0.0;
  double hi = sigma;
  bool found = false;
  double prev_t = 0.0;
  for (int i = 1; i <= grid; ++i) {
    double t = sigma * static_cast<double>(i) / grid;
    if (level(t) >= 0) {
      lo = prev_t;
      hi = t;
      found = true;
      break;
    }
    prev_t = t;
  }
  if (enabled) *enabled = found;
  if (!found) return sigma;
  while (hi - lo > 1e-6) {
    double mid = 0.5 * (lo + hi);
    (level(mid) >= 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

SigmaDiagnostic validate_sigma(const EtcDesign& d, double W, double sigma) {
  SigmaDiagnostic diag;
  diag.lambda_max_at_sigma = lambda_max(phi_at(d, W, sigma));
  diag.enabled = diag.lambda_max_at_sigma >= 0;
  return diag;
}

}  // namespace etcabs
