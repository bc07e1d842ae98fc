#ifndef ETCABS_TYPES_HPP_
#define ETCABS_TYPES_HPP_

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>

namespace etcabs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Problem statement: perturbed LTI plant with sample-and-hold feedback,
/// disturbance bound and the two triggering design scalars.
struct PlantSpec {
  Matrix A;      // n x n
  Matrix B;      // n x m
  Matrix E;      // n x p
  double W = 0;  // vanishing-disturbance gain bound, |w(t)|^2 <= W |x|^2
  double gamma = 1;
  double beta = 1;

  Eigen::Index n() const { return A.rows(); }
  Eigen::Index m() const { return B.cols(); }
  Eigen::Index p() const { return E.cols(); }
};

struct AbstractionConfig {
  int n_conv = 7;          // Taylor order of the polytopic embedding
  int l = 800;             // time subdivisions of [0, sigma]
  double sigma = 8.0;      // horizon in seconds
  int m_bar = 10;          // angular subdivisions of the half circle
  double psi_scale = 1.0;  // Psi = psi_scale * I
  int eta_samples = 10;    // sample count per cell for the remainder bound
  long time_scale = 1000;  // clock ticks per second
  double tau_cap = 0;      // optional arbitrated cap on tau_hi; 0 = off
};

struct RunManifest {
  PlantSpec plant;
  AbstractionConfig config;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  std::optional<Vector> x0;  // initial state; unset = all-initial automaton
};

/// Everything Theorem-1-style analysis needs, derived once per plant.
struct EtcDesign {
  Matrix P;    // stabilizing ARE solution
  Matrix K;    // feedback gain, K = B^T P
  Matrix M;    // trigger matrix, (1-beta^2) I + P B B^T P
  Matrix N;    // trigger matrix, (1/2)(1-beta^2) I + P B B^T P
  double mu = 0;
  Matrix Psi;
  double lambda_max_A = 0;    // lambda_max(A + A^T)
  double log_norm_A = 0;      // mu(A) = lambda_max_A / 2
  double lambda_max_EtE = 0;  // lambda_max(E^T E)
  Matrix A, B, E;             // plant copies for downstream evaluation
  Matrix Acl;                 // A - B K

  Eigen::Index n() const { return A.rows(); }
};

class EtcabsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace etcabs

#endif
