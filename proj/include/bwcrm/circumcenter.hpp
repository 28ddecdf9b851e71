#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bwcrm/geometry.hpp"
#include "bwcrm/types.hpp"

namespace bwcrm {

// Spread allowed between the distances from a circumcenter to the chain
// points, relative to 1 + chain diameter.
inline constexpr double kEquidistanceTolerance = 1e-8;

// Default membership tolerance when flagging chain points that landed on
// their own subspace.
inline constexpr double kDefaultMembershipTolerance = 1e-9;

// An ordered, non-empty group of affine subspaces sharing one ambient
// space.  Value type; the solver slices families into spans instead.
class Block {
 public:
  explicit Block(std::vector<AffineSubspace> members);

  Index size() const { return static_cast<Index>(members_.size()); }
  Index dimension() const { return members_.front().dimension(); }
  std::span<const AffineSubspace> members() const { return members_; }
  const AffineSubspace& member(Index i) const { return members_.at(i); }

 private:
  std::vector<AffineSubspace> members_;
};

/* The successive-reflection record of one block step.
 *
 * points holds z, R1 z, R2 R1 z, ..., Rq...R1 z (q+1 entries).
 * hit_flags[i] is true when points[i+1] already lies on member i, the
 * degenerate "bad luck" situation where the reflection fixed its input.
 */
struct ReflectionChain {
  std::vector<Vector> points;
  std::vector<bool> hit_flags;

  bool any_hit() const;
  // Index of the first flagged member, if any.
  std::optional<Index> first_hit() const;
  // Largest pairwise distance among the chain points.
  double diameter() const;
};

ReflectionChain reflection_chain(std::span<const AffineSubspace> members,
                                 const Vector& z,
                                 double membership_tol = kDefaultMembershipTolerance);
ReflectionChain reflection_chain(const Block& block, const Vector& z,
                                 double membership_tol = kDefaultMembershipTolerance);

/* Circumcenter of a finite point list within its affine hull.
 *
 * With v_i = points[i] - points[0], the center is points[0] + V t where t
 * solves the Gram system (V^T V) t = (1/2) diag(V^T V).  The system is
 * solved through a rank-tolerant eigendecomposition, picking the
 * minimum-norm coefficient vector, which silently absorbs repeated or
 * coincident points.  If the resulting point fails to be equidistant to
 * all inputs within kEquidistanceTolerance * (1 + diameter), no
 * circumcenter exists and DegeneracyError is thrown.
 */
Vector circumcenter_points(std::span<const Vector> points);
Vector circumcenter_points(const std::vector<Vector>& points);

// Circumcenter of the reflection chain of z through the block members;
// this is one block step of the solver.
Vector circumcenter_block(std::span<const AffineSubspace> members, const Vector& z);
Vector circumcenter_block(const Block& block, const Vector& z);

}  // namespace bwcrm
