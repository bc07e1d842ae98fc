#ifndef ETCABS_TAYLOR_TABLES_HPP_
#define ETCABS_TAYLOR_TABLES_HPP_

#include <vector>

#include "etcabs/types.hpp"

namespace etcabs {

/// Region-independent Taylor-coefficient ladder over the time grid
/// t_j = j sigma / l, j = 0..l-1. Within cell j, the certificate matrix is
/// approximated by Phi(t_j + t') ~= sum_k L[k][j] t'^k; the sampled
/// remainder bounds eta_lo / eta_hi make the approximation one-sided sound
/// over prefix / suffix cell ranges respectively.
struct EmbeddingTables {
  int l = 0;
  int n_conv = 0;
  double sigma = 0;
  double W = 0;
  std::vector<Matrix> check_F, hat_F;      // F(t_j), A F(t_j) + I
  std::vector<Matrix> check_Pi, hat_Pi;    // F(t_j) Acl, (A F(t_j) + I) Acl
  std::vector<std::vector<Matrix>> L;      // [k][j] full 2n x 2n coefficient
  std::vector<std::vector<Matrix>> Ltop;   // [k][j] top-left n x n block
  double eta = 0;                          // global remainder bound (report)
  std::vector<double> eta_lo;  // sup over cells 0..j of lmax(Phi - series)
  std::vector<double> eta_hi;  // sup over cells j..l-1 of lmax(series - Phi)
};

/// One polytopic-embedding vertex: the i-th partial sum of the coefficient
/// series at cell j with the given step length, remainder-padded.
struct VertexBlock {
  int i = 0;
  int j = 0;
  double step = 0;
  Matrix block;
};

struct VertexFamily {
  std::vector<VertexBlock> blocks;
};

/// Coefficient ladder for the given grid. Does not fill the remainder
/// fields; call estimate_eta afterwards.
EmbeddingTables build_tables(const EtcDesign& design, double W, double sigma,
                             int l, int n_conv);

/// Sampled remainder maximization: per cell, eta_samples equispaced t' in
/// [0, sigma/l], two one-sided gaps lmax(Phi - series) and
/// lmax(series - Phi), each floored at 0, scaled by a 1.1 safety factor and
/// accumulated as prefix (eta_lo) / suffix (eta_hi) maxima. Returns the
/// global bound, which is also stored in tables.eta.
double estimate_eta(EmbeddingTables& tables, const EtcDesign& design,
                    int eta_samples);

/// Vertex family certifying Phi(t) <= 0 on [0, tau] when all blocks are
/// (cone-restricted) negative semidefinite: 2n x 2n partial sums plus
/// eta_lo padding; full steps below floor(tau l / sigma), a partial step in
/// that cell.
VertexFamily lower_vertices(const EmbeddingTables& tables, double tau);

/// Vertex family certifying Phi1(t) >= 0 on [tau, sigma]: negated n x n
/// top-left partial sums plus eta_hi padding; a partial step in cell
/// floor(tau l / sigma), full steps above.
VertexFamily upper_vertices(const EmbeddingTables& tables, double tau);

/// The truncated series sum_{k=0}^{n_conv} L[k][j] t'^k (full 2n x 2n).
Matrix series_at(const EmbeddingTables& tables, int j, double t_prime);

}  // namespace etcabs

#endif
