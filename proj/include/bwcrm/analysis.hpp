#pragma once

#include <functional>
#include <span>
#include <vector>

#include "bwcrm/geometry.hpp"
#include "bwcrm/types.hpp"

namespace bwcrm {

// Singular values this close to 1 are treated as directions of the
// intersection when measuring the angle between two subspaces.
inline constexpr double kAngleCutoff = 1e-8;

/* Cosine of the Friedrichs angle between the direction spaces of V and W.
 *
 * Computed as the largest singular value of D_V^T D_W (orthonormal
 * direction bases) after discarding values within kAngleCutoff of 1,
 * which belong to the common directions.  Returns 0 when nothing remains,
 * e.g. for identical or orthogonal subspaces.  The result lives in [0, 1)
 * and is the contraction constant driving alternating projections.
 * Requires a non-empty intersection (InconsistentSystemError otherwise).
 */
double friedrichs_cosine(const AffineSubspace& V, const AffineSubspace& W);

/* Contraction factor of one circumcentered step over a pair, given
 * per-set contraction factors r_V, r_W in [0, 1) and the Friedrichs
 * cosine c of the pair:
 *
 *   max over (r, s) in {(r_V, .), (r_W, .)} of
 *     sqrt(r^2 + (1 - r^2) (1 + c^2) / 2)
 *
 * Strictly below 1 and nondecreasing in each argument.
 */
double composed_rate_bound(double r_V, double r_W, double c);

// Error envelope factor of k alternating-projection sweeps over a pair
// with Friedrichs cosine c: c^(2k - 1).
double map_rate_bound(double c, Index k);

// Fold composed_rate_bound over consecutive-pair cosines.  A coarse
// upper-bound heuristic for longer families; no sharpness is claimed.
double chained_rate_bound(std::span<const double> cosines);

struct BamCheck {
  // Both fixed-point requirements held on every sample.
  bool axioms_hold = false;
  // Largest observed ||G z - P_V z|| / ||z - P_V z||; the map is a best
  // approximation mapping for V on the samples iff axioms_hold and this
  // stays below 1.
  double worst_ratio = 0.0;

  bool is_bam() const { return axioms_hold && worst_ratio < 1.0; }
};

/* Sample-based test whether an operator behaves as a best approximation
 * mapping for V: G must fix V pointwise, map into the fixed set of P_V,
 * and contract distances to V.  Samples sitting on V are skipped for the
 * ratio estimate.
 */
BamCheck verify_bam(const std::function<Vector(const Vector&)>& op,
                    const AffineSubspace& V, std::span<const Vector> samples,
                    double tol);

/* Convergence-rate summary of a traced two-subspace alternating-projection
 * run: the angle, the asymptotic per-sweep factor c^2 it implies, and the
 * fitted rate from the trace.  bound_satisfied allows the fitted rate a
 * 5e-3 slack over the bound.
 */
struct RateReport {
  double friedrichs = 0.0;
  double theoretical_bound = 0.0;
  double fitted_rate = 0.0;
  bool bound_satisfied = false;
};

RateReport make_rate_report(const AffineSubspace& V, const AffineSubspace& W,
                            double fitted_rate);

}  // namespace bwcrm
