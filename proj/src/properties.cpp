#include "etcabs/properties.hpp"

#include <cmath>
#include <random>

#include "etcabs/matexp.hpp"
#include "etcabs/trigger.hpp"

namespace etcabs {

Vector omega_convolution(const EtcDesign& design, const Disturbance& omega,
                         double t, int panels) {
  const Eigen::Index n = design.n();
  if (t <= 0) return Vector::Zero(n);
  if (panels % 2) ++panels;
  const double h = t / panels;
  // Nodes s_i = i h; propagators e^{A(t - s_i)} advance by e^{-A h} steps.
  const Matrix step = expm(-design.A * h);
  Matrix prop = expm(design.A * t);
  Vector acc = Vector::Zero(n);
  for (int i = 0; i <= panels; ++i) {
    const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * (prop * (design.E * omega(i * h)));
    prop = prop * step;
  }
  return (h / 3.0) * acc;
}

double trigger_functional(const EtcDesign& design, const Vector& x,
                          const Vector& Om, double t) {
  const Matrix Lmi =
      transition_at(design, t) - Matrix::Identity(design.n(), design.n());
  const Vector v = Lmi * x;
  return v.dot(design.M * v) - x.dot(design.N * x) +
         2.0 * v.dot(design.M * Om) + Om.dot(design.M * Om);
}

PropertyReport check_bounding_chain(const EtcDesign& design, double W,
                                    double sigma, int samples,
                                    std::uint64_t seed) {
  PropertyReport rep;
  rep.name = "bounding-chain";
  rep.samples = samples;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Eigen::Index n = design.n();
  const Policy policies[] = {Policy::kZero, Policy::kMaxAligned,
                             Policy::kSinusoid, Policy::kRandomPhase};

  for (int i = 0; i < samples; ++i) {
    Vector x(n);
    for (Eigen::Index k = 0; k < n; ++k) x(k) = gauss(rng);
    if (x.norm() < 1e-9) x = Vector::Unit(n, 0);
    x *= std::pow(10.0, 2.0 * uni(rng) - 1.0) / x.norm();
    const double t = uni(rng) * sigma;
    const Policy pol = policies[i % 4];
    Disturbance om = make_disturbance(pol, W, design, x, 1.0 + uni(rng) * 4.0,
                                      seed ^ (0x5851f42d4c957f2dULL * i + 1));
    const Vector Om = omega_convolution(design, om, t);
    const double lhs = trigger_functional(design, x, Om, t);
    const double rhs = x.dot(theta_at(design, W, t) * x);
    const double scale = x.squaredNorm() * (1.0 + std::abs(rhs) / (x.squaredNorm() + 1e-300));
    const double margin = rhs - lhs + 1e-7 * scale;
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (margin < 0) ++rep.violations;
  }
  return rep;
}

PropertyReport check_theorem1_consequence(
    const EtcDesign& design, double W, double tau_prime,
    const std::vector<ConicRegion>& cones,
    const std::vector<RegionTiming>& timings, double sim_cap, int samples,
    std::uint64_t seed) {
  PropertyReport rep;
  rep.name = "theorem1-consequence";
  rep.samples = samples;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double tol = 1e-3;
  const Policy policies[] = {Policy::kZero, Policy::kMaxAligned,
                             Policy::kSinusoid, Policy::kRandomPhase};

  for (int i = 0; i < samples; ++i) {
    Vector x(design.n());
    for (Eigen::Index k = 0; k < design.n(); ++k) x(k) = gauss(rng);
    if (x.norm() < 1e-9) x = Vector::Unit(design.n(), 0);
    x.normalize();
    Disturbance om =
        make_disturbance(policies[i % 4], W, design, x, 1.0 + uni(rng) * 4.0,
                         seed ^ (0x9e3779b97f4a7c15ULL * i + 7));
    StepResult s =
        step_interval(design, W, x, om, 1e-4, 1e-6, sim_cap);
    const int region = locate(x, cones);
    const double lower =
        std::max(tau_prime, timings[region - 1].tau_lo);
    const double margin = s.tau - (lower - tol);
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (margin < 0) ++rep.violations;
  }
  return rep;
}

}  // namespace etcabs
