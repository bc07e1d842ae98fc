#include "etcabs/regional_bounds.hpp"

#include <cmath>
#include <thread>

#include "etcabs/matexp.hpp"

namespace etcabs {

namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kAlphaCap = 1099511627776.0;  // 2^40
constexpr int kRefineIters = 7;

double padded_lmax(const Matrix& block, const Matrix& Q, double sign,
                   double alpha) {
  Matrix m = block;
  m.topLeftCorner(Q.rows(), Q.cols()) += (sign * alpha) * Q;
  return lambda_max(m);
}

struct CellCheck {
  bool ok = true;
  std::vector<VertexCertificate> certs;
};

// All n_conv+1 partial-sum vertices of one cell at one step length.
CellCheck check_cell(const std::vector<std::vector<Matrix>>& Lsrc, int n_conv,
                     int j, double step, double eta, const Matrix& Q,
                     Direction dir, bool negate) {
  CellCheck out;
  const Eigen::Index dim = Lsrc[0][j].rows();
  const Matrix I = Matrix::Identity(dim, dim);
  Matrix sum = Matrix::Zero(dim, dim);
  double pw = 1.0;
  for (int i = 0; i <= n_conv; ++i) {
    sum += Lsrc[i][j] * pw;
    pw *= step;
    Matrix block = negate ? Matrix(-sum + eta * I) : Matrix(sum + eta * I);
    ConeTest t = cone_feasible(block, Q, dir);
    if (!t.feasible) {
      out.ok = false;
      return out;
    }
    out.certs.push_back({i, j, step, t.alpha});
  }
  return out;
}

}  // namespace

ConeTest cone_feasible(const Matrix& block, const Matrix& Q, Direction dir) {
  const double sign = (dir == Direction::kLower) ? 1.0 : -1.0;
  auto f = [&](double a) { return padded_lmax(block, Q, sign, a); };

  double best_a = 0;
  double best = f(0);
  if (best <= kFeasTol) return {true, 0.0};

  // Expand until past the minimum of the convex level function.
  double hi = 1.0;
  double prev = best;
  while (hi < kAlphaCap) {
    double fh = f(hi);
    if (fh < best) {
      best = fh;
      best_a = hi;
    }
    if (fh >= prev) break;
    prev = fh;
    hi *= 8.0;
  }

  // Golden-section on [0, hi].
  const double gr = 0.6180339887498949;
  double a = 0, b = std::min(hi, kAlphaCap);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 120 && b - a > 1e-14 * (1 + b); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    }
  }
  double xm = (f1 <= f2) ? x1 : x2;
  double fm = std::min(f1, f2);
  if (fm < best) {
    best = fm;
    best_a = xm;
  }
  return {best <= kFeasTol, best_a};
}

double lower_bound(const ConicRegion& region, const EmbeddingTables& tables,
                   std::vector<VertexCertificate>* certificate) {
  const double h = tables.sigma / tables.l;
  auto cell_ok = [&](int j, double step) {
    return check_cell(tables.L, tables.n_conv, j, step, tables.eta_lo[j],
                      region.Q, Direction::kLower, false)
        .ok;
  };

  int j = 0;
  while (j < tables.l && cell_ok(j, h)) ++j;

  double tau;
  if (j == tables.l) {
    tau = tables.sigma;
  } else {
    // Largest certified partial step inside the first failing cell.
    double s_ok = cell_ok(j, 0.0) ? 0.0 : -1.0;
    double lo = 0, hi = h;
    for (int it = 0; it < kRefineIters; ++it) {
      double mid = 0.5 * (lo + hi);
      if (cell_ok(j, mid)) {
        s_ok = std::max(s_ok, mid);
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if (j == 0) {
      if (s_ok <= 0)
        throw EtcabsError(
            "lower_bound: cannot certify any positive bound; the remainder "
            "bound dominates the trigger matrices (raise n_conv or l)");
      tau = s_ok;
    } else if (s_ok >= 0) {
      tau = j * h + s_ok;
    } else {
      // The zero-step vertex of cell j blocks tau = j h; step back into the
      // previous cell and certify just inside it.
      double s2 = 0;
      lo = 0;
      hi = h;
      for (int it = 0; it < kRefineIters; ++it) {
        double mid = 0.5 * (lo + hi);
        if (cell_ok(j - 1, mid)) {
          s2 = std::max(s2, mid);
          lo = mid;
        } else {
          hi = mid;
        }
      }
      tau = (j - 1) * h + s2;
    }
  }

  if (certificate) {
    // Re-derive multipliers for the final family as one auditable record.
    for (int attempt = 0; attempt < 4; ++attempt) {
      certificate->clear();
      VertexFamily fam = lower_vertices(tables, tau);
      bool all = true;
      for (const VertexBlock& v : fam.blocks) {
        ConeTest t = cone_feasible(v.block, region.Q, Direction::kLower);
        if (!t.feasible) {
          all = false;
          break;
        }
        certificate->push_back({v.i, v.j, v.step, t.alpha});
      }
      if (all) break;
      tau -= h * std::ldexp(1.0, -kRefineIters);  // nudge off the boundary
      if (tau <= 0) throw EtcabsError("lower_bound: certificate rebuild failed");
    }
  }
  return tau;
}

std::pair<double, bool> upper_bound(const ConicRegion& region,
                                    const EmbeddingTables& tables,
                                    double tau_lo,
                                    std::vector<VertexCertificate>* certificate) {
  const double h = tables.sigma / tables.l;
  auto cell_ok = [&](int j, double step) {
    return check_cell(tables.Ltop, tables.n_conv, j, step, tables.eta_hi[j],
                      region.Q, Direction::kUpper, true)
        .ok;
  };

  int j = tables.l - 1;
  while (j >= 0 && cell_ok(j, h)) --j;

  double tau;
  bool saturated = false;
  if (j == tables.l - 1) {
    // Not even the final cell certifies at full step; try partial, else clip.
    double s_ok = -1.0;
    double lo = 0, hi = h;
    for (int it = 0; it < kRefineIters; ++it) {
      double mid = 0.5 * (lo + hi);
      if (cell_ok(j, mid)) {
        s_ok = std::max(s_ok, mid);
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if (s_ok < 0 && cell_ok(j, 0.0)) s_ok = 0.0;
    if (s_ok >= 0) {
      tau = tables.sigma - s_ok;
    } else {
      tau = tables.sigma;
      saturated = true;
    }
  } else if (j < 0) {
    tau = tau_lo;  // every cell certifies; the interval floor binds
  } else {
    // Cells j+1..l-1 certify at full step; grow a partial step into cell j.
    double s_ok = 0.0;
    double lo = 0, hi = h;
    for (int it = 0; it < kRefineIters; ++it) {
      double mid = 0.5 * (lo + hi);
      if (cell_ok(j, mid)) {
        s_ok = std::max(s_ok, mid);
        lo = mid;
      } else {
        hi = mid;
      }
    }
    tau = (j + 1) * h - s_ok;
  }
  if (tau < tau_lo) tau = tau_lo;

  if (certificate && !saturated) {
    for (int attempt = 0; attempt < 4; ++attempt) {
      certificate->clear();
      VertexFamily fam = upper_vertices(tables, tau);
      bool all = true;
      for (const VertexBlock& v : fam.blocks) {
        ConeTest t = cone_feasible(v.block, region.Q, Direction::kUpper);
        if (!t.feasible) {
          all = false;
          break;
        }
        certificate->push_back({v.i, v.j, v.step, t.alpha});
      }
      if (all) break;
      tau += h * std::ldexp(1.0, -kRefineIters);
      if (tau >= tables.sigma) {
        certificate->clear();
        tau = tables.sigma;
        saturated = true;
        break;
      }
    }
  }
  return {tau, saturated};
}

std::vector<RegionTiming> compute_timings(const std::vector<ConicRegion>& cones,
                                          const EmbeddingTables& tables,
                                          double tau_cap, int threads) {
  const int q = static_cast<int>(cones.size());
  const int m_bar = q / 2;
  std::vector<RegionTiming> out(q);

  auto work = [&](int s) {  // 0-based base-sector index
    RegionTiming t;
    t.index = s + 1;
    t.tau_lo = lower_bound(cones[s], tables, &t.lo_certificate);
    std::tie(t.tau_hi, t.saturated_hi) =
        upper_bound(cones[s], tables, t.tau_lo, &t.hi_certificate);
    if (tau_cap > 0 && tau_cap < t.tau_hi) {
      t.tau_hi = std::max(tau_cap, t.tau_lo);
      t.saturated_hi = false;
      t.hi_certificate.clear();  // cap is arbitrated, not certified
    }
    out[s] = t;
    RegionTiming twin = t;  // Remark-1 symmetry: copy bit-for-bit
    twin.index = cones[s].mirror_of;
    out[twin.index - 1] = std::move(twin);
  };

  if (threads <= 1) {
    for (int s = 0; s < m_bar; ++s) work(s);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (int s = t; s < m_bar; s += threads) work(s);
      });
    for (auto& th : pool) th.join();
  }
  return out;
}

double precision_epsilon(const std::vector<RegionTiming>& timings,
                         int* argmax) {
  double eps = 0;
  int arg = timings.empty() ? 0 : timings.front().index;
  for (const RegionTiming& t : timings) {
    const double gap = t.tau_hi - t.tau_lo;
    if (gap > eps) {
      eps = gap;
      arg = t.index;
    }
  }
  if (argmax) *argmax = arg;
  return eps;
}

}  // namespace etcabs
