#include "etcabs/sim.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace etcabs {

namespace {

// One classical RK4 step of xi' = A xi - B K x_k + E omega(t).
Vector rk4_step(const EtcDesign& d, const Vector& hold_u, const Vector& xi,
                const Disturbance& omega, double t, double h) {
  auto f = [&](double tt, const Vector& y) -> Vector {
    return d.A * y - hold_u + d.E * omega(tt);
  };
  Vector k1 = f(t, xi);
  Vector k2 = f(t + h / 2, xi + (h / 2) * k1);
  Vector k3 = f(t + h / 2, xi + (h / 2) * k2);
  Vector k4 = f(t + h, xi + h * k3);
  return xi + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
}

}  // namespace

Policy parse_policy(const std::string& token) {
  if (token == "zero") return Policy::kZero;
  if (token == "max-aligned") return Policy::kMaxAligned;
  if (token == "sinusoid") return Policy::kSinusoid;
  if (token == "random-phase") return Policy::kRandomPhase;
  throw EtcabsError("unknown disturbance policy '" + token + "'");
}

std::string policy_name(Policy p) {
  switch (p) {
    case Policy::kZero: return "zero";
    case Policy::kMaxAligned: return "max-aligned";
    case Policy::kSinusoid: return "sinusoid";
    case Policy::kRandomPhase: return "random-phase";
  }
  return "?";
}

Disturbance make_disturbance(Policy policy, double W, const EtcDesign& design,
                             const Vector& x_k, double freq,
                             std::uint64_t seed) {
  const Eigen::Index p = design.E.cols();
  const double amp = std::sqrt(W) * x_k.norm();
  if (W == 0 || policy == Policy::kZero)
    return [p](double) { return Vector(Vector::Zero(p)); };

  if (policy == Policy::kMaxAligned) {
    // Push the measurement error along its initial growth direction:
    // eps' = -Acl x - E omega at t = 0, so omega opposing through E^T.
    Vector dir = design.E.transpose() * (design.Acl * x_k);
    if (dir.norm() < 1e-14) dir = Vector::Unit(p, 0);
    Vector u = amp * dir.normalized();
    return [u](double) { return u; };
  }
  if (policy == Policy::kSinusoid) {
    return [p, amp, freq](double t) -> Vector {
      Vector w = Vector::Zero(p);
      w(0) = amp * std::sin(2 * std::numbers::pi * freq * t);
      return w;
    };
  }
  // random-phase: seeded direction and phase, sinusoidal envelope
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double phase = 2 * std::numbers::pi * uni(rng);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector dir(p);
  for (Eigen::Index i = 0; i < p; ++i) dir(i) = gauss(rng);
  if (dir.norm() < 1e-14) dir = Vector::Unit(p, 0);
  dir.normalize();
  return [dir, amp, freq, phase](double t) -> Vector {
    return (amp * std::sin(2 * std::numbers::pi * freq * t + phase)) * dir;
  };
}

StepResult step_interval(const EtcDesign& design, double W, const Vector& x,
                         const Disturbance& omega, double dt,
                         double event_tolerance, double cap) {
  (void)W;
  if (x.norm() == 0) throw EtcabsError("step_interval: zero state");
  const double thresh = x.dot(design.N * x);
  auto g = [&](const Vector& xi) {
    Vector eps = x - xi;
    return eps.dot(design.M * eps) - thresh;
  };
  const Vector hold_u = design.B * (design.K * x);

  StepResult out;
  Vector xi = x;
  double t = 0;
  while (t < cap) {
    const double h = std::min(dt, cap - t);
    Vector xi_next = rk4_step(design, hold_u, xi, omega, t, h);
    if (!xi_next.allFinite())
      throw EtcabsError("step_interval: integration blow-up");
    for (double tt : {t, t + h / 2, t + h})
      out.max_omega = std::max(out.max_omega, omega(tt).norm());
    if (g(xi_next) >= 0) {
      // Bisect the crossing inside [t, t + h].
      double lo = 0, hi = h;
      while (hi - lo > event_tolerance) {
        double mid = 0.5 * (lo + hi);
        (g(rk4_step(design, hold_u, xi, omega, t, mid)) >= 0 ? hi : lo) = mid;
      }
      out.tau = t + hi;
      out.x_next = rk4_step(design, hold_u, xi, omega, t, hi);
      return out;
    }
    xi = std::move(xi_next);
    t += h;
  }
  out.tau = cap;
  out.x_next = xi;
  out.cap_hit = true;
  return out;
}

Trace run(const EtcDesign& design, double W, const Vector& x0,
          const SimConfig& config, const std::vector<ConicRegion>& cones) {
  if (x0.norm() == 0) throw EtcabsError("run: zero initial state");
  Trace tr;
  Vector x = x0;
  double t = 0;
  tr.t_k.push_back(0);
  tr.x_k.push_back(x);
  tr.regions.push_back(locate(x, cones));
  std::uint64_t k = 0;
  while (t < config.horizon) {
    if (x.norm() < 1e-12) {
      tr.reached_origin = true;
      break;
    }
    Disturbance omega =
        make_disturbance(config.policy, W, design, x, config.sinusoid_freq,
                         config.seed * 0x9e3779b97f4a7c15ULL + k);
    const double room = config.horizon - t;
    StepResult s = step_interval(design, W, x, omega, config.dt,
                                 config.event_tolerance,
                                 std::min(config.cap, room));
    if (s.cap_hit && s.tau >= room - 1e-12 && room < config.cap) {
      tr.incomplete_last = true;  // horizon truncated, not a real sample
      break;
    }
    t += s.tau;
    x = s.x_next;
    tr.t_k.push_back(t);
    tr.x_k.push_back(x);
    tr.tau_k.push_back(s.tau);
    tr.cap_hit.push_back(s.cap_hit);
    tr.max_omega.push_back(s.max_omega);
    tr.regions.push_back(x.norm() > 0 ? locate(x, cones) : tr.regions.back());
    ++k;
  }
  return tr;
}

}  // namespace etcabs
