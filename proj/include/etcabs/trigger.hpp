#ifndef ETCABS_TRIGGER_HPP_
#define ETCABS_TRIGGER_HPP_

#include "etcabs/types.hpp"

namespace etcabs {

/// State-transition factor Lambda(t) = I + F(t) (A - B K) with
/// F(t) = \int_0^t e^{As} ds; the held-input flow is x(t) = Lambda(t) x(0)
/// in the disturbance-free case.
Matrix transition_at(const EtcDesign& d, double t);

/// d_lambda(t) = (e^{lambda t} - 1) / lambda, continuously extended to t at
/// lambda = 0 (series evaluation near the pole).
double d_a(double lambda, double t);

/// The 2n x 2n certificate matrix Phi(t):
///   [ (Lambda-I)^T M (Lambda-I) + t W mu lambda_E d_A(t) I - N,
///     (Lambda-I)^T M ;  M (Lambda-I), -Psi ].
/// Trigger silence on [0, t] for every state is implied by Phi(t) <= 0.
Matrix phi_at(const EtcDesign& d, double W, double t);

/// Schur complement of the -Psi block of Phi(t): the n x n matrix whose
/// negative semidefiniteness is equivalent to Phi(t) <= 0.
Matrix theta_at(const EtcDesign& d, double W, double t);

/// Smallest t > 0 with lambda_max(Phi(t)) >= 0 (the certificate's loss of
/// negative semidefiniteness; with Phi4 = -Psi < 0 this is the only
/// non-vacuous reading of the crossing), located by grid scan plus
/// bisection to 1e-6 absolute. If Phi stays negative over the whole
/// horizon, returns sigma and clears *enabled.
double global_tau_prime(const EtcDesign& d, double W, double sigma,
                        int grid = 3200, bool* enabled = nullptr);

struct SigmaDiagnostic {
  bool enabled = false;          // lambda_max(Phi(sigma)) >= 0
  double lambda_max_at_sigma = 0;
};

/// Checks that the horizon covers the certificate's sign change. Never
/// throws: a short horizon only means upper bounds saturate at sigma.
SigmaDiagnostic validate_sigma(const EtcDesign& d, double W, double sigma);

}  // namespace etcabs

#endif
