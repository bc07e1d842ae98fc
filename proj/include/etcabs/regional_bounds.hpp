#ifndef ETCABS_REGIONAL_BOUNDS_HPP_
#define ETCABS_REGIONAL_BOUNDS_HPP_

#include <vector>

#include "etcabs/partition.hpp"
#include "etcabs/taylor_tables.hpp"
#include "etcabs/types.hpp"

namespace etcabs {

enum class Direction { kLower, kUpper };

struct ConeTest {
  bool feasible = false;
  double alpha = 0;
};

/// One stored multiplier per embedding vertex, re-auditable:
/// lmax(block +/- diag(alpha Q, 0)) <= 1e-9.
struct VertexCertificate {
  int i = 0;
  int j = 0;
  double step = 0;
  double alpha = 0;
};

struct RegionTiming {
  int index = 0;
  double tau_lo = 0;
  double tau_hi = 0;
  bool saturated_hi = false;
  std::vector<VertexCertificate> lo_certificate;
  std::vector<VertexCertificate> hi_certificate;
};

/// Decides whether some alpha >= 0 makes
///   block + sign * diag(alpha Q, 0) <= 0
/// (sign +1 for lower, -1 for upper), by golden-section minimization of the
/// convex map alpha -> lmax(...) over an expanding bracket. Feasible iff
/// the minimum is <= 1e-9. The Q padding matches the block size: Q occupies
/// the top-left n x n corner, zero elsewhere.
ConeTest cone_feasible(const Matrix& block, const Matrix& Q,
                       Direction direction);

/// Largest certified tau with the whole lower family cone-feasible:
/// advances whole cells, then 7 bisection steps inside the first failing
/// cell. Throws when not even the first vertex certifies a positive bound.
double lower_bound(const ConicRegion& region, const EmbeddingTables& tables,
                   std::vector<VertexCertificate>* certificate = nullptr);

/// Smallest certified tau (>= tau_lo) with the whole upper family
/// cone-feasible; returns {sigma, true} when no cell certifies.
std::pair<double, bool> upper_bound(const ConicRegion& region,
                                    const EmbeddingTables& tables,
                                    double tau_lo,
                                    std::vector<VertexCertificate>* certificate
                                    = nullptr);

/// All regions; mirror pairs computed once and copied. tau_cap > 0 clips
/// tau_hi (and clears the saturation flag when the cap binds below sigma).
std::vector<RegionTiming> compute_timings(
    const std::vector<ConicRegion>& cones, const EmbeddingTables& tables,
    double tau_cap = 0, int threads = 1);

/// Abstraction precision: max over regions of tau_hi - tau_lo. The index of
/// an achieving region is stored in *argmax when given.
double precision_epsilon(const std::vector<RegionTiming>& timings,
                         int* argmax = nullptr);

}  // namespace etcabs

#endif
