#include "bwcrm/analysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>

#include "bwcrm/errors.hpp"

namespace bwcrm {

double friedrichs_cosine(const AffineSubspace& V, const AffineSubspace& W) {
  if (V.dimension() != W.dimension()) {
    throw DimensionError("friedrichs_cosine: mixed ambient dimensions");
  }
  // Reject empty intersections up front; the angle is only defined for
  // subspaces that meet.
  const std::array<AffineSubspace, 2> pair{V, W};
  oracle_intersection_projection(std::span<const AffineSubspace>(pair),
                                 Vector::Zero(V.dimension()));

  const Matrix dv = V.direction_basis();
  const Matrix dw = W.direction_basis();
  if (dv.cols() == 0 || dw.cols() == 0) {
    return 0.0;
  }
  Eigen::BDCSVD<Matrix> svd(dv.transpose() * dw);
  double best = 0.0;
  for (Index i = 0; i < svd.singularValues().size(); ++i) {
    const double s = std::min(svd.singularValues()(i), 1.0);
    if (s < 1.0 - kAngleCutoff) {
      best = std::max(best, s);
    }
  }
  return best;
}

namespace {

double half_rate(double r, double c) {
  return std::sqrt(r * r + (1.0 - r * r) * (1.0 + c * c) / 2.0);
}

void require_unit_interval(double x, const char* what) {
  if (!(x >= 0.0) || x >= 1.0) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1)");
  }
}

}  // namespace

double composed_rate_bound(double r_V, double r_W, double c) {
  require_unit_interval(r_V, "composed_rate_bound: r_V");
  require_unit_interval(r_W, "composed_rate_bound: r_W");
  require_unit_interval(c, "composed_rate_bound: c");
  return std::max(half_rate(r_V, c), half_rate(r_W, c));
}

double map_rate_bound(double c, Index k) {
  require_unit_interval(c, "map_rate_bound: c");
  if (k < 1) {
    throw std::invalid_argument("map_rate_bound: k must be positive");
  }
  return std::pow(c, static_cast<double>(2 * k - 1));
}

double chained_rate_bound(std::span<const double> cosines) {
  double r = 0.0;
  for (double c : cosines) {
    r = composed_rate_bound(r, 0.0, c);
  }
  return r;
}

BamCheck verify_bam(const std::function<Vector(const Vector&)>& op,
                    const AffineSubspace& V, std::span<const Vector> samples,
                    double tol) {
  if (samples.empty()) {
    throw std::invalid_argument("verify_bam: no samples");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("verify_bam: tolerance must be positive");
  }
  BamCheck check;
  check.axioms_hold = true;
  for (const Vector& z : samples) {
    const Vector pz = V.project(z);
    const Vector gz = op(z);
    if (gz.size() != z.size() || !gz.allFinite()) {
      throw NumericalError("verify_bam: operator returned an unusable value");
    }
    const double scale = tol * (1.0 + pz.norm());
    // G must not move points of V, and P_V G must agree with P_V.
    if ((op(pz) - pz).norm() > scale || (V.project(gz) - pz).norm() > scale) {
      check.axioms_hold = false;
    }
    const double dist = (z - pz).norm();
    if (dist > 1e-12 * (1.0 + z.norm())) {
      check.worst_ratio = std::max(check.worst_ratio, (gz - pz).norm() / dist);
    }
  }
  return check;
}

RateReport make_rate_report(const AffineSubspace& V, const AffineSubspace& W,
                            double fitted_rate) {
  if (!(fitted_rate >= 0.0)) {
    throw std::invalid_argument("make_rate_report: fitted_rate must be non-negative");
  }
  RateReport report;
  report.friedrichs = friedrichs_cosine(V, W);
  report.theoretical_bound = report.friedrichs * report.friedrichs;
  report.fitted_rate = fitted_rate;
  report.bound_satisfied = fitted_rate <= report.theoretical_bound + 5e-3;
  return report;
}

}  // namespace bwcrm
