#include "etcabs/reach.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "etcabs/matexp.hpp"
#include "etcabs/trigger.hpp"

namespace etcabs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPi = std::numbers::pi;

double wrap(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a;
}

}  // namespace

void ArcSet::add(double lo, double hi) {
  double width = hi - lo;
  if (width >= kTwoPi) {
    full = true;
    return;
  }
  if (width < 0) return;
  arcs.emplace_back(wrap(lo), wrap(lo) + width);
}

void ArcSet::normalize() {
  if (full) {
    arcs.clear();
    return;
  }
  if (arcs.empty()) return;
  // Split wrap-around arcs, merge on [0, 2 pi).
  std::vector<std::pair<double, double>> flat;
  for (auto [lo, hi] : arcs) {
    if (hi > kTwoPi) {
      flat.emplace_back(lo, kTwoPi);
      flat.emplace_back(0.0, hi - kTwoPi);
    } else {
      flat.emplace_back(lo, hi);
    }
  }
  std::sort(flat.begin(), flat.end());
  std::vector<std::pair<double, double>> merged;
  for (auto [lo, hi] : flat) {
    if (!merged.empty() && lo <= merged.back().second + 1e-12) {
      merged.back().second = std::max(merged.back().second, hi);
    } else {
      merged.emplace_back(lo, hi);
    }
  }
  if (merged.size() == 1 && merged[0].first <= 1e-12 &&
      merged[0].second >= kTwoPi - 1e-12) {
    full = true;
    merged.clear();
  }
  // Re-join a pair split at 0/2 pi into one wrap-around arc.
  if (merged.size() >= 2 && merged.front().first <= 1e-12 &&
      merged.back().second >= kTwoPi - 1e-12) {
    double hi = merged.front().second;
    merged.front() = {merged.back().first, kTwoPi + hi};
    merged.pop_back();
    std::sort(merged.begin(), merged.end());
  }
  arcs = std::move(merged);
}

bool ArcSet::contains(double angle) const {
  if (full) return true;
  const double a = wrap(angle);
  for (auto [lo, hi] : arcs)
    if ((a >= lo - 1e-12 && a <= hi + 1e-12) ||
        (a + kTwoPi >= lo - 1e-12 && a + kTwoPi <= hi + 1e-12))
      return true;
  return false;
}

bool ArcSet::intersects(double lo, double hi) const {
  if (full) return true;
  const double w = hi - lo;
  const double a2 = wrap(lo);
  const double b2 = a2 + std::min(w, kTwoPi);
  for (auto [a1, b1] : arcs)
    for (int k = -1; k <= 1; ++k) {
      const double shift = k * kTwoPi;
      if (a2 + shift <= b1 + 1e-12 && a1 <= b2 + shift + 1e-12) return true;
    }
  return false;
}

double rho(const EtcDesign& design, double W, double tau) {
  return std::sqrt(W) * design.E.norm() * d_a(design.log_norm_A, tau);
}

ReachSummary nominal_arcs(const ConicRegion& region, const EtcDesign& design,
                          double tau_lo, double tau_hi, int grid_points) {
  ReachSummary s;
  s.index = region.index;
  s.tau_lo = tau_lo;
  s.tau_hi = tau_hi;
  s.r_min = std::numeric_limits<double>::infinity();

  const int G = (tau_hi > tau_lo) ? std::max(2, grid_points) : 1;
  const double dtau = (G > 1) ? (tau_hi - tau_lo) / (G - 1) : 0.0;

  std::vector<double> phi1(G), phi2(G), phim(G), rmin_at(G), speed(G);
  bool degenerate = false;
  for (int i = 0; i < G; ++i) {
    const double tau = tau_lo + i * dtau;
    const Matrix Lam = transition_at(design, tau);
    const Eigen::Vector2d y1 = Lam * region.rays[0];
    const Eigen::Vector2d y2 = Lam * region.rays[1];
    rmin_at[i] = std::min(y1.norm(), y2.norm());
    s.r_min = std::min(s.r_min, rmin_at[i]);
    speed[i] = (expm(design.A * tau) * design.Acl).norm();
    const Eigen::Vector2d mid = y1 + y2;
    if (rmin_at[i] < 1e-9 || mid.norm() < 1e-9 * (y1.norm() + y2.norm())) {
      degenerate = true;  // near-singular image: directions unresolved
      continue;
    }
    phi1[i] = std::atan2(y1(1), y1(0));
    phi2[i] = std::atan2(y2(1), y2(0));
    phim[i] = std::atan2(mid(1), mid(0));
  }
  if (degenerate) {
    s.nominal.full = true;
    s.full_circle = true;
    return s;
  }

  for (int i = 0; i < G; ++i) {
    // Sector image: the arc from phi1 to phi2 through the mid direction.
    const double d1 = wrap(phim[i] - phi1[i]);
    const double d2 = wrap(phi2[i] - phim[i]);
    // Lipschitz bloat covering the flow between this grid point and its
    // neighbours.
    double delta = 0;
    for (int k : {i - 1, i}) {
      if (k < 0 || k + 1 >= G) continue;
      const double chord =
          std::max(speed[k], speed[k + 1]) * dtau;
      const double r = std::min(rmin_at[k], rmin_at[k + 1]);
      delta = std::max(delta, chord >= r ? kPi : std::asin(chord / r));
    }
    s.nominal.add(phi1[i] - delta, phi1[i] + d1 + d2 + delta);
  }
  s.nominal.normalize();
  s.full_circle = s.nominal.full;
  return s;
}

void widen_by_disturbance(ReachSummary& summary, double rho_max) {
  summary.rho_max = rho_max;
  summary.widened = summary.nominal;
  if (summary.nominal.full || rho_max >= summary.r_min) {
    summary.widened.full = true;
    summary.widened.arcs.clear();
    summary.full_circle = true;
    return;
  }
  const double dphi = std::asin(std::min(1.0, rho_max / summary.r_min));
  ArcSet out;
  for (auto [lo, hi] : summary.widened.arcs) out.add(lo - dphi, hi + dphi);
  out.normalize();
  summary.widened = std::move(out);
  summary.full_circle = summary.widened.full;
}

std::vector<ReachSummary> compute_reach(const std::vector<ConicRegion>& cones,
                                        const std::vector<RegionTiming>& times,
                                        const EtcDesign& design, double W,
                                        double sigma, int l) {
  std::vector<ReachSummary> out;
  out.reserve(cones.size());
  for (size_t i = 0; i < cones.size(); ++i) {
    const RegionTiming& t = times[i];
    const int grid = std::max(
        32, 4 * static_cast<int>(
                    std::ceil((t.tau_hi - t.tau_lo) * l / sigma)));
    ReachSummary s =
        nominal_arcs(cones[i], design, t.tau_lo, t.tau_hi, grid);
    widen_by_disturbance(s, rho(design, W, t.tau_hi));
    out.push_back(std::move(s));
  }
  return out;
}

EdgeSet edges(const std::vector<ReachSummary>& summaries,
              const std::vector<ConicRegion>& cones) {
  EdgeSet out;
  for (const ReachSummary& s : summaries)
    for (const ConicRegion& t : cones)
      if (s.widened.intersects(t.theta_lo, t.theta_hi))
        out.emplace_back(s.index, t.index);
  return out;
}

}  // namespace etcabs
