#ifndef ETCABS_PARTITION_HPP_
#define ETCABS_PARTITION_HPP_

#include <vector>

#include "etcabs/types.hpp"

namespace etcabs {

class UnsupportedDimension : public EtcabsError {
 public:
  using EtcabsError::EtcabsError;
};

/// A planar conic region: the half-open angular sector [theta_lo, theta_hi),
/// pointed at the origin. Membership in the closed double cone (the sector
/// union its antipode) is x^T Q x >= 0.
struct ConicRegion {
  int index = 0;              // 1-based
  double theta_lo = 0;
  double theta_hi = 0;
  Matrix Q;                   // symmetric 2x2 double-cone form
  std::vector<Vector> rays;   // unit extreme rays of the sector
  int mirror_of = 0;          // index of the antipodal partner
};

/// Q = n_a n_b^T + n_b n_a^T with the inward boundary normals
/// n_a = (-sin theta_lo, cos theta_lo), n_b = (sin theta_hi, -cos theta_hi).
Matrix cone_matrix(double theta_lo, double theta_hi);

/// Equidistant cover: m_bar sectors of [0, pi) mirrored to [pi, 2 pi),
/// q = 2 m_bar regions in total. Antipodal pairs share Q and are linked by
/// mirror_of. Only n = 2 is supported.
std::vector<ConicRegion> make_cones(int m_bar, int n);

/// Index (1-based) of the region whose sector contains the direction of x.
/// Boundary rays resolve to the lower sector within each half-plane, and
/// locate(-x) is always the mirror of locate(x). Throws on x = 0.
int locate(const Vector& x, const std::vector<ConicRegion>& cones);

}  // namespace etcabs

#endif
