#ifndef ETCABS_PROPERTIES_HPP_
#define ETCABS_PROPERTIES_HPP_

#include <string>
#include <vector>

#include "etcabs/partition.hpp"
#include "etcabs/regional_bounds.hpp"
#include "etcabs/sim.hpp"
#include "etcabs/types.hpp"

namespace etcabs {

struct PropertyReport {
  std::string name;
  int samples = 0;
  int violations = 0;
  double worst_margin = 0;  // most adverse slack seen (negative = violation)
  bool passed() const { return violations == 0; }
};

/// Convolution term of the perturbed flow,
/// Omega(t) = \int_0^t e^{A(t-s)} E omega(s) ds, by composite Simpson
/// quadrature with `panels` panels (independent of the RK4 simulator).
Vector omega_convolution(const EtcDesign& design, const Disturbance& omega,
                         double t, int panels = 1000);

/// Exact trigger functional of the perturbed system at (x, t):
/// F = x^T[(L-I)^T M (L-I) - N]x + 2 x^T (L-I)^T M Om + Om^T M Om with
/// L = Lambda(t), Om = Omega(t).
double trigger_functional(const EtcDesign& design, const Vector& x,
                          const Vector& Om, double t);

/// Randomized audit of the quadratic overbound F_omega(x, t) <= x^T Theta(t) x
/// across admissible disturbances realized by the simulator policies.
PropertyReport check_bounding_chain(const EtcDesign& design, double W,
                                    double sigma, int samples,
                                    std::uint64_t seed);

/// Randomized audit that simulated inter-sample times respect both the
/// global lower bound tau_prime and the regional lower bounds.
PropertyReport check_theorem1_consequence(
    const EtcDesign& design, double W, double tau_prime,
    const std::vector<ConicRegion>& cones,
    const std::vector<RegionTiming>& timings, double sim_cap, int samples,
    std::uint64_t seed);

}  // namespace etcabs

#endif
