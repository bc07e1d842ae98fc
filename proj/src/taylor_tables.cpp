#include "etcabs/taylor_tables.hpp"

#include <cmath>

#include "etcabs/matexp.hpp"
#include "etcabs/trigger.hpp"

namespace etcabs {

namespace {

// Taylor coefficients of g(t) = C t (e^{lambda t} - 1)/lambda about t0,
// continuous through lambda = 0 (where g(t) = C t^2).
double g_coeff(double C, double lambda, double t0, int k) {
  if (k == 0) return C * t0 * d_a(lambda, t0);
  const double e = std::exp(lambda * t0);
  if (k == 1) return C * (t0 * e + d_a(lambda, t0));
  // k >= 2: C e^{lambda t0} lambda^{k-2} (t0 lambda / k! + 1/(k-1)!)
  double fact_km1 = 1.0;
  for (int i = 2; i <= k - 1; ++i) fact_km1 *= i;
  const double fact_k = fact_km1 * k;
  return C * e * std::pow(lambda, k - 2) *
         (t0 * lambda / fact_k + 1.0 / fact_km1);
}

}  // namespace

EmbeddingTables build_tables(const EtcDesign& design, double W, double sigma,
                             int l, int n_conv) {
  const Eigen::Index n = design.n();
  const double h = sigma / l;
  EmbeddingTables t;
  t.l = l;
  t.n_conv = n_conv;
  t.sigma = sigma;
  t.W = W;

  const Matrix I = Matrix::Identity(n, n);
  const Matrix F1 = exp_integral(design.A, h);
  const Matrix Eh = expm(design.A * h);

  t.check_F.resize(l);
  t.hat_F.resize(l);
  t.check_Pi.resize(l);
  t.hat_Pi.resize(l);
  // Cumulative recurrence F((j+1)h) = F(jh) + e^{A j h} F(h).
  Matrix Ej = I;  // e^{A (j-1) h} while filling cell j
  for (int j = 0; j < l; ++j) {
    if (j == 0) {
      t.check_F[j] = Matrix::Zero(n, n);
    } else {
      t.check_F[j] = t.check_F[j - 1] + Ej * F1;
      Ej = Ej * Eh;
    }
    t.hat_F[j] = design.A * t.check_F[j] + I;
    t.check_Pi[j] = t.check_F[j] * design.Acl;
    t.hat_Pi[j] = t.hat_F[j] * design.Acl;
  }

  // A^{k-1}/k! factors for the Lambda(t)-I expansion within a cell:
  //   Lambda(t_j + t') - I = check_Pi_j + sum_{k>=1} (A^{k-1}/k!) hat_Pi_j t'^k
  std::vector<Matrix> Ak(n_conv + 1);
  Ak[0] = I;  // unused slot
  Matrix Apow = I;
  double fact = 1.0;
  for (int k = 1; k <= n_conv; ++k) {
    fact *= k;
    Ak[k] = Apow / fact;
    Apow = Apow * design.A;
  }

  const double C = W * design.mu * design.lambda_max_EtE;
  const double lam = design.lambda_max_A;

  t.L.assign(n_conv + 1, std::vector<Matrix>(l));
  t.Ltop.assign(n_conv + 1, std::vector<Matrix>(l));
  std::vector<Matrix> G(n_conv + 1);
  for (int j = 0; j < l; ++j) {
    const double t0 = j * h;
    G[0] = t.check_Pi[j];
    for (int k = 1; k <= n_conv; ++k) G[k] = Ak[k] * t.hat_Pi[j];
    for (int k = 0; k <= n_conv; ++k) {
      Matrix top = Matrix::Zero(n, n);
      for (int a = 0; a <= k; ++a)
        top += G[a].transpose() * design.M * G[k - a];
      top += g_coeff(C, lam, t0, k) * I;
      if (k == 0) top -= design.N;
      top = 0.5 * (top + top.transpose());

      Matrix full = Matrix::Zero(2 * n, 2 * n);
      full.topLeftCorner(n, n) = top;
      full.topRightCorner(n, n) = G[k].transpose() * design.M;
      full.bottomLeftCorner(n, n) = design.M * G[k];
      if (k == 0) full.bottomRightCorner(n, n) = -design.Psi;
      t.Ltop[k][j] = std::move(top);
      t.L[k][j] = std::move(full);
    }
  }
  return t;
}

Matrix series_at(const EmbeddingTables& tables, int j, double t_prime) {
  Matrix sum = tables.L[tables.n_conv][j];
  for (int k = tables.n_conv - 1; k >= 0; --k)
    sum = sum * t_prime + tables.L[k][j];
  return sum;
}

double estimate_eta(EmbeddingTables& tables, const EtcDesign& design,
                    int eta_samples) {
  const int l = tables.l;
  const double h = tables.sigma / l;
  std::vector<double> gap_lo(l, 0.0), gap_hi(l, 0.0);
  for (int j = 0; j < l; ++j) {
    for (int s = 0; s < eta_samples; ++s) {
      const double tp = h * s / (eta_samples - 1);
      const Matrix diff =
          phi_at(design, tables.W, j * h + tp) - series_at(tables, j, tp);
      gap_lo[j] = std::max(gap_lo[j], lambda_max(diff));
      gap_hi[j] = std::max(gap_hi[j], lambda_max(-diff));
    }
  }
  tables.eta_lo.resize(l);
  tables.eta_hi.resize(l);
  double run = 0.0;
  for (int j = 0; j < l; ++j) {  // prefix: covers cells 0..j
    run = std::max(run, gap_lo[j]);
    tables.eta_lo[j] = 1.1 * run;
  }
  run = 0.0;
  for (int j = l - 1; j >= 0; --j) {  // suffix: covers cells j..l-1
    run = std::max(run, gap_hi[j]);
    tables.eta_hi[j] = 1.1 * run;
  }
  tables.eta = std::max(tables.eta_lo[l - 1], tables.eta_hi[0]);
  return tables.eta;
}

VertexFamily lower_vertices(const EmbeddingTables& tables, double tau) {
  if (!(tau > 0) || tau > tables.sigma)
    throw EtcabsError("lower_vertices: tau out of (0, sigma]");
  const double h = tables.sigma / tables.l;
  int j_star = static_cast<int>(std::floor(tau / h));
  if (j_star > tables.l - 1) j_star = tables.l - 1;
  const Eigen::Index dim = tables.L[0][0].rows();
  const Matrix I = Matrix::Identity(dim, dim);

  VertexFamily fam;
  for (int j = 0; j <= j_star; ++j) {
    const double step = (j < j_star) ? h : tau - j_star * h;
    Matrix sum = Matrix::Zero(dim, dim);
    double pw = 1.0;
    for (int i = 0; i <= tables.n_conv; ++i) {
      sum += tables.L[i][j] * pw;
      pw *= step;
      fam.blocks.push_back({i, j, step, sum + tables.eta_lo[j] * I});
    }
  }
  return fam;
}

VertexFamily upper_vertices(const EmbeddingTables& tables, double tau) {
  if (!(tau >= 0) || tau > tables.sigma)
    throw EtcabsError("upper_vertices: tau out of [0, sigma]");
  const double h = tables.sigma / tables.l;
  int j_star = static_cast<int>(std::floor(tau / h));
  if (j_star > tables.l - 1) j_star = tables.l - 1;
  const Eigen::Index n = tables.Ltop[0][0].rows();
  const Matrix I = Matrix::Identity(n, n);

  VertexFamily fam;
  for (int j = j_star; j < tables.l; ++j) {
    const double step = (j == j_star) ? (j_star + 1) * h - tau : h;
    Matrix sum = Matrix::Zero(n, n);
    double pw = 1.0;
    for (int i = 0; i <= tables.n_conv; ++i) {
      sum += tables.Ltop[i][j] * pw;
      pw *= step;
      fam.blocks.push_back({i, j, step, -sum + tables.eta_hi[j] * I});
    }
  }
  return fam;
}

}  // namespace etcabs
