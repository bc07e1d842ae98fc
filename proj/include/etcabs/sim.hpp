#ifndef ETCABS_SIM_HPP_
#define ETCABS_SIM_HPP_

#include <functional>
#include <string>
#include <vector>

#include "etcabs/partition.hpp"
#include "etcabs/types.hpp"

namespace etcabs {

/// Disturbance over one sampling interval: t (seconds since the sample) ->
/// omega in R^p, with |omega| <= sqrt(W) |x_k|.
using Disturbance = std::function<Vector(double)>;

enum class Policy { kZero, kMaxAligned, kSinusoid, kRandomPhase };

Policy parse_policy(const std::string& token);
std::string policy_name(Policy p);

/// Builds the interval disturbance for the given sampled state. sinusoid
/// uses the fixed frequency; random-phase draws phase and direction from
/// the seed (mix a per-interval counter into the seed for fresh draws).
Disturbance make_disturbance(Policy policy, double W, const EtcDesign& design,
                             const Vector& x_k, double freq,
                             std::uint64_t seed);

struct SimConfig {
  double horizon = 15.0;
  double dt = 1e-4;
  Policy policy = Policy::kZero;
  double sinusoid_freq = 1.0;
  std::uint64_t seed = 0;
  double event_tolerance = 1e-6;
  double cap = 8.0;  // forced-sampling horizon per interval (sigma)
};

struct StepResult {
  double tau = 0;
  Vector x_next;
  bool cap_hit = false;
  double max_omega = 0;
};

struct Trace {
  std::vector<double> t_k;          // sampling instants, size K+1
  std::vector<Vector> x_k;          // sampled states, size K+1
  std::vector<double> tau_k;        // inter-sample times, size K
  std::vector<int> regions;         // locate(x_k), size K+1
  std::vector<bool> cap_hit;        // size K
  std::vector<double> max_omega;    // size K
  bool incomplete_last = false;     // horizon cut the final interval
  bool reached_origin = false;
};

/// One inter-sample interval: integrates the held-input closed loop with
/// fixed-step RK4, detects the trigger crossing of
/// g(t) = eps^T M eps - x^T N x by per-step sign check plus bisection to
/// event_tolerance. cap_hit marks a forced sample at the cap.
StepResult step_interval(const EtcDesign& design, double W, const Vector& x,
                         const Disturbance& omega, double dt,
                         double event_tolerance, double cap);

/// Full closed-loop run from x0; deterministic given config.seed.
Trace run(const EtcDesign& design, double W, const Vector& x0,
          const SimConfig& config, const std::vector<ConicRegion>& cones);

}  // namespace etcabs

#endif
