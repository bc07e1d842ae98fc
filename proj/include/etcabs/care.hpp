#ifndef ETCABS_CARE_HPP_
#define ETCABS_CARE_HPP_

#include "etcabs/types.hpp"

namespace etcabs {

class RiccatiError : public EtcabsError {
 public:
  using EtcabsError::EtcabsError;
};

/// Stabilizing solution P of
///   P A + A^T P + Q0 - P (B B^T - (1/gamma^2) E E^T) P = 0,
/// via the stable invariant subspace of the associated Hamiltonian (ordered
/// real Schur form), with a Newton-Kleinman fallback. Throws RiccatiError
/// with the Hamiltonian spectrum when no stabilizing solution exists.
Matrix solve_care(const PlantSpec& plant, const Matrix& state_weight);

/// Same, with the identity state weight used by the L2-gain design.
Matrix solve_care(const PlantSpec& plant);

/// Trigger matrices M = (1-beta^2) I + P B B^T P and
/// N = (1/2)(1-beta^2) I + P B B^T P.
std::pair<Matrix, Matrix> build_mn(const Matrix& P, const Matrix& B,
                                   double beta);

/// Multiplier pair with Psi = psi_scale * I and
/// mu = max(0, lambda_max(M) + psi_scale), so M + Psi <= mu I.
std::pair<double, Matrix> select_mu_psi(const Matrix& M, double psi_scale);

/// Full design: ARE solve, gain, trigger matrices, multipliers, spectral
/// quantities.
EtcDesign make_design(const PlantSpec& plant, double psi_scale);

}  // namespace etcabs

#endif
