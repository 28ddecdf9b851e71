#pragma once

#include <span>
#include <utility>
#include <vector>

#include "bwcrm/errors.hpp"
#include "bwcrm/types.hpp"

namespace bwcrm {

// Relative cutoff on singular values / pivots when deciding numerical rank.
inline constexpr double kRankTolerance = 1e-12;

// Relative residual allowed for a system that claims to be consistent.
inline constexpr double kConsistencyTolerance = 1e-10;

/* A hyperplane {z : <a,z> = b} with ||a|| = 1.
 *
 * The constructor rescales (normal, offset) by 1/||normal||, so the stored
 * representation is canonical up to sign.  Projection and reflection are
 * closed one-liner formulas; no factorization is ever involved.
 */
class Hyperplane {
 public:
  Hyperplane(Vector normal, double offset);

  Index dimension() const { return normal_.size(); }
  const Vector& normal() const { return normal_; }
  double offset() const { return offset_; }

  Vector project(const Vector& z) const;
  Vector reflect(const Vector& z) const;
  // Linear part of reflect: v - 2<a,v>a.  Fixed points are directions
  // parallel to the hyperplane.
  Vector reflect_direction(const Vector& v) const;
  bool contains(const Vector& z, double tol) const;
  // |<a,z> - b|, the distance from z to the hyperplane.
  double residual_norm(const Vector& z) const;

 private:
  Vector normal_;
  double offset_;
};

/* An affine subspace given as the solution set of A z = b.
 *
 * Rows are normalized to unit length on construction, then factored once
 * (thin SVD) into an orthonormal row-space basis Q and a particular
 * solution x0.  All later operations are matrix-vector products:
 *
 *   project(z) = z - Q Q^T (z - x0)
 *   reflect(z) = 2 project(z) - z
 *
 * A zero-row matrix is accepted and represents the whole space.  An
 * inconsistent system is rejected at construction, so every instance is a
 * non-empty set.  Hyperplanes pass through a closed-form path that skips
 * the SVD; a one-row system costs the same as a Hyperplane.
 */
class AffineSubspace {
 public:
  AffineSubspace(const Matrix& rows, const Vector& rhs);
  explicit AffineSubspace(const Hyperplane& h);
  static AffineSubspace whole_space(Index dimension);

  Index dimension() const { return dim_; }
  Index row_count() const { return rows_.rows(); }
  // Rank of the row space; 0 for the whole space, 1 for a hyperplane.
  Index codimension() const { return basis_.cols(); }
  bool is_hyperplane() const { return codimension() == 1; }

  Vector project(const Vector& z) const;
  Vector reflect(const Vector& z) const;
  Vector reflect_direction(const Vector& v) const;
  bool contains(const Vector& z, double tol) const;
  // ||A z - b|| over the unit-normalized rows.
  double residual_norm(const Vector& z) const;

  // Unit normal of a codimension-1 subspace (sign unspecified).
  Vector unit_normal() const;

  const Matrix& rows() const { return rows_; }
  const Vector& rhs() const { return rhs_; }
  // n x r orthonormal basis of the row space (normals).
  const Matrix& row_space_basis() const { return basis_; }
  // Minimum-norm solution of A z = b.
  const Vector& particular_solution() const { return particular_; }
  // n x (n-r) orthonormal basis of the direction space; computed per call.
  Matrix direction_basis() const;

 private:
  AffineSubspace() = default;
  void require_point(const Vector& z) const;

  Index dim_ = 0;
  Matrix rows_;        // p x n, unit rows
  Vector rhs_;         // p, rescaled with the rows
  Matrix basis_;       // n x r
  Vector particular_;  // n
};

// Stack the (normalized) rows and right-hand sides of a family into one
// system.  Members must share a common ambient dimension; the family must
// be non-empty.
std::pair<Matrix, Vector> stacked_system(std::span<const AffineSubspace> family);

/* Exact projection of z onto the intersection of a family.
 *
 * Solves min ||s - z|| s.t. (stacked) A s = b through a rank-revealing
 * complete orthogonal decomposition, i.e. s = z + A^+ (b - A z).  Intended
 * as a reference oracle and for small or one-off solves; cost grows with
 * the cube of the stacked size.  An empty family leaves z unchanged.
 * Throws InconsistentSystemError when the intersection is empty and
 * NumericalError when the solve produces non-finite values.
 */
Vector oracle_intersection_projection(std::span<const AffineSubspace> family,
                                      const Vector& z);
Vector oracle_intersection_projection(const std::vector<AffineSubspace>& family,
                                      const Vector& z);

}  // namespace bwcrm
