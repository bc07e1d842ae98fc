#ifndef ETCABS_REACH_HPP_
#define ETCABS_REACH_HPP_

#include <utility>
#include <vector>

#include "etcabs/partition.hpp"
#include "etcabs/regional_bounds.hpp"
#include "etcabs/types.hpp"

namespace etcabs {

/// Union of closed angular intervals on the circle. Intervals are stored as
/// [lo, hi] with lo in [0, 2 pi) and hi - lo <= 2 pi.
struct ArcSet {
  bool full = false;
  std::vector<std::pair<double, double>> arcs;

  void add(double lo, double hi);
  /// Sorts, merges overlaps (mod 2 pi), collapses to full when the union
  /// covers the circle.
  void normalize();
  bool contains(double angle) const;
  /// Closed-interval intersection test against [lo, hi] on the circle.
  bool intersects(double lo, double hi) const;
};

struct ReachSummary {
  int index = 0;
  double tau_lo = 0, tau_hi = 0;
  double rho_max = 0;   // disturbance radius at tau_hi (per unit |x|)
  double r_min = 0;     // smallest nominal vertex-image norm on the grid
  ArcSet nominal;
  ArcSet widened;
  bool full_circle = false;
};

using EdgeSet = std::vector<std::pair<int, int>>;

/// Disturbance reach radius rho(tau) = sqrt(W) |E|_F d_mu(tau) with
/// mu = log_norm_A; the per-unit-|x| radius of the reachable ball around the
/// nominal flow.
double rho(const EtcDesign& design, double W, double tau);

/// Directions of Lambda(tau) applied to the region's sector, swept over a
/// grid of [tau_lo, tau_hi], each grid cell padded by the Lipschitz bloat
/// angle. Also records r_min in the summary.
ReachSummary nominal_arcs(const ConicRegion& region, const EtcDesign& design,
                          double tau_lo, double tau_hi, int grid_points);

/// Widens every arc endpoint by arcsin(min(1, rho_max / r_min)); sets
/// full_circle when the disturbance ball can swallow the shortest image.
void widen_by_disturbance(ReachSummary& summary, double rho_max);

/// All-region reach summaries with the default grid resolution
/// max(32, 4 ceil((tau_hi - tau_lo) l / sigma)).
std::vector<ReachSummary> compute_reach(const std::vector<ConicRegion>& cones,
                                        const std::vector<RegionTiming>& times,
                                        const EtcDesign& design, double W,
                                        double sigma, int l);

/// (s, t) whenever region t's closed sector meets region s's widened arcs;
/// lexicographically ordered.
EdgeSet edges(const std::vector<ReachSummary>& summaries,
              const std::vector<ConicRegion>& cones);

}  // namespace etcabs

#endif
