#include "etcabs/care.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "etcabs/matexp.hpp"

namespace etcabs {

namespace {

// Sylvester/Lyapunov solve A^T X + X A = C via the Kronecker system; the
// state dimensions here are small enough that O(n^6) is irrelevant.
Matrix solve_lyapunov(const Matrix& A, const Matrix& C) {
  const Eigen::Index n = A.rows();
  Matrix big = Matrix::Zero(n * n, n * n);
  // vec(A^T X + X A) = (I (x) A^T + A^T (x) I) vec(X), column-major vec.
  for (Eigen::Index j = 0; j < n; ++j)
    big.block(j * n, j * n, n, n) += A.transpose();
  for (Eigen::Index bj = 0; bj < n; ++bj)    // block column of A^T (x) I
    for (Eigen::Index bi = 0; bi < n; ++bi)  // block row
      for (Eigen::Index r = 0; r < n; ++r)
        big(bi * n + r, bj * n + r) += A(bj, bi);
  Eigen::VectorXd vc(n * n);
  for (Eigen::Index c = 0; c < n; ++c) vc.segment(c * n, n) = C.col(c);
  Eigen::VectorXd vx = big.partialPivLu().solve(vc);
  Matrix X(n, n);
  for (Eigen::Index c = 0; c < n; ++c) X.col(c) = vx.segment(c * n, n);
  return 0.5 * (X + X.transpose());
}

Matrix riccati_residual(const Matrix& A, const Matrix& R, const Matrix& Q,
                        const Matrix& P) {
  return P * A + A.transpose() * P + Q - P * R * P;
}

// Newton refinement: linearize the residual around P and take the full step.
// With a stabilizing start this converges quadratically.
bool newton_refine(const Matrix& A, const Matrix& R, const Matrix& Q,
                   Matrix& P, double tol) {
  for (int it = 0; it < 50; ++it) {
    Matrix res = riccati_residual(A, R, Q, P);
    if (res.norm() <= tol) return true;
    Matrix Ak = A - R * P;
    Matrix dP = solve_lyapunov(Ak, -res);
    if (!dP.allFinite()) return false;
    P += dP;
    P = 0.5 * (P + P.transpose());
  }
  return riccati_residual(A, R, Q, P).norm() <= tol;
}

}  // namespace

Matrix solve_care(const PlantSpec& plant, const Matrix& state_weight) {
  const Eigen::Index n = plant.n();
  if (state_weight.rows() != n || state_weight.cols() != n)
    throw RiccatiError("solve_care: state weight dimension mismatch");
  const Matrix& A = plant.A;
  const Matrix R = plant.B * plant.B.transpose() -
                   plant.E * plant.E.transpose() / (plant.gamma * plant.gamma);
  const Matrix& Q = state_weight;

  Matrix H = Matrix::Zero(2 * n, 2 * n);
  H.topLeftCorner(n, n) = A;
  H.topRightCorner(n, n) = -R;
  H.bottomLeftCorner(n, n) = -Q;
  H.bottomRightCorner(n, n) = -A.transpose();

  Eigen::EigenSolver<Matrix> es(H);
  if (es.info() != Eigen::Success)
    throw RiccatiError("solve_care: Hamiltonian eigendecomposition failed");

  // Real basis of the stable invariant subspace: real eigenvectors directly,
  // complex pairs contribute their real and imaginary parts once.
  Matrix basis(2 * n, 2 * n);
  Eigen::Index cols = 0;
  for (Eigen::Index i = 0; i < 2 * n && cols < n; ++i) {
    const std::complex<double> lam = es.eigenvalues()(i);
    if (lam.real() >= 0) continue;
    if (std::abs(lam.imag()) < 1e-12 * (1 + std::abs(lam.real()))) {
      basis.col(cols++) = es.eigenvectors().col(i).real();
    } else if (lam.imag() > 0) {  // one representative per conjugate pair
      basis.col(cols++) = es.eigenvectors().col(i).real();
      if (cols < 2 * n) basis.col(cols++) = es.eigenvectors().col(i).imag();
    }
  }
  if (cols != n) {
    std::ostringstream msg;
    msg << "solve_care: no stabilizing solution; Hamiltonian spectrum:";
    for (Eigen::Index i = 0; i < 2 * n; ++i) {
      const std::complex<double> lam = es.eigenvalues()(i);
      msg << " (" << lam.real() << (lam.imag() < 0 ? "" : "+") << lam.imag()
          << "i)";
    }
    throw RiccatiError(msg.str());
  }

  Matrix X = basis.topRows(n).leftCols(n);
  Matrix Y = basis.bottomRows(n).leftCols(n);
  Eigen::FullPivLU<Matrix> lu(X);
  if (!lu.isInvertible())
    throw RiccatiError("solve_care: singular subspace projection");
  Matrix P = Y * lu.inverse();
  P = 0.5 * (P + P.transpose());

  const double tol = 1e-9 * (1.0 + P.squaredNorm());
  if (riccati_residual(A, R, Q, P).norm() > tol) {
    if (!newton_refine(A, R, Q, P, tol))
      throw RiccatiError("solve_care: residual refinement failed");
  }
  // Stabilizing branch sanity: A - R P must be Hurwitz.
  Eigen::EigenSolver<Matrix> cl(A - R * P);
  if (cl.eigenvalues().real().maxCoeff() >= 0)
    throw RiccatiError("solve_care: computed solution is not stabilizing");
  return P;
}

Matrix solve_care(const PlantSpec& plant) {
  return solve_care(plant, Matrix::Identity(plant.n(), plant.n()));
}

std::pair<Matrix, Matrix> build_mn(const Matrix& P, const Matrix& B,
                                   double beta) {
  const Eigen::Index n = P.rows();
  const Matrix I = Matrix::Identity(n, n);
  const Matrix PBBtP = P * B * B.transpose() * P;
  const double c = 1.0 - beta * beta;
  return {c * I + PBBtP, 0.5 * c * I + PBBtP};
}

std::pair<double, Matrix> select_mu_psi(const Matrix& M, double psi_scale) {
  const Eigen::Index n = M.rows();
  Matrix Psi = psi_scale * Matrix::Identity(n, n);
  double mu = std::max(0.0, lambda_max(M) + psi_scale);
  return {mu, Psi};
}

EtcDesign make_design(const PlantSpec& plant, double psi_scale) {
  EtcDesign d;
  d.A = plant.A;
  d.B = plant.B;
  d.E = plant.E;
  d.P = solve_care(plant);
  d.K = plant.B.transpose() * d.P;
  d.Acl = plant.A - plant.B * d.K;
  std::tie(d.M, d.N) = build_mn(d.P, plant.B, plant.beta);
  std::tie(d.mu, d.Psi) = select_mu_psi(d.M, psi_scale);
  d.lambda_max_A = lambda_max(plant.A + plant.A.transpose());
  d.log_norm_A = 0.5 * d.lambda_max_A;
  d.lambda_max_EtE = lambda_max(plant.E.transpose() * plant.E);
  return d;
}

}  // namespace etcabs
