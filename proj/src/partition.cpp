#include "etcabs/partition.hpp"

#include <cmath>
#include <numbers>

namespace etcabs {

namespace {
constexpr double kPi = std::numbers::pi;
}

Matrix cone_matrix(double theta_lo, double theta_hi) {
  const double w = theta_hi - theta_lo;
  if (!(w > 0) || !(w < kPi))
    throw EtcabsError("cone_matrix: sector width must lie in (0, pi)");
  Eigen::Vector2d na(-std::sin(theta_lo), std::cos(theta_lo));
  Eigen::Vector2d nb(std::sin(theta_hi), -std::cos(theta_hi));
  Matrix Q = na * nb.transpose() + nb * na.transpose();
  return Q;
}

std::vector<ConicRegion> make_cones(int m_bar, int n) {
  if (n != 2)
    throw UnsupportedDimension(
        "make_cones: only n=2 sector construction is implemented (got n=" +
        std::to_string(n) + ")");
  if (m_bar < 2) throw EtcabsError("make_cones: m_bar must be >= 2");

  const double w = kPi / m_bar;
  std::vector<ConicRegion> cones(2 * m_bar);
  for (int s = 0; s < m_bar; ++s) {
    ConicRegion base;
    base.index = s + 1;
    base.theta_lo = s * w;
    base.theta_hi = (s + 1) * w;
    base.Q = cone_matrix(base.theta_lo, base.theta_hi);
    base.rays = {Vector(Eigen::Vector2d(std::cos(base.theta_lo),
                                        std::sin(base.theta_lo))),
                 Vector(Eigen::Vector2d(std::cos(base.theta_hi),
                                        std::sin(base.theta_hi)))};
    base.mirror_of = m_bar + s + 1;

    ConicRegion twin;
    twin.index = m_bar + s + 1;
    twin.theta_lo = base.theta_lo + kPi;
    twin.theta_hi = base.theta_hi + kPi;
    twin.Q = base.Q;  // double cone: antipodes share the form
    twin.rays = {Vector(-base.rays[0]), Vector(-base.rays[1])};
    twin.mirror_of = base.index;

    cones[s] = std::move(base);
    cones[m_bar + s] = std::move(twin);
  }
  return cones;
}

int locate(const Vector& x, const std::vector<ConicRegion>& cones) {
  if (x.size() != 2) throw UnsupportedDimension("locate: only n=2 supported");
  if (x(0) == 0 && x(1) == 0) throw EtcabsError("locate: zero vector");
  const int m_bar = static_cast<int>(cones.size()) / 2;
  const double w = kPi / m_bar;

  double angle = std::atan2(x(1), x(0));  // (-pi, pi]
  if (angle < 0) angle += 2 * kPi;        // [0, 2 pi)
  // Fold onto [0, pi); resolving ties in the folded coordinate keeps
  // locate(-x) exactly the mirror of locate(x).
  const bool lower_half = angle < kPi;
  double a = lower_half ? angle : angle - kPi;

  int s = static_cast<int>(std::ceil(a / w));  // boundary -> lower sector
  if (s < 1) s = 1;
  if (s > m_bar) s = m_bar;
  return lower_half ? s : m_bar + s;
}

}  // namespace etcabs
