#include "bwcrm/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace bwcrm {

namespace {

void check_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw NonFiniteError(std::string(what) + ": non-finite entries");
  }
}

void check_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw NonFiniteError(std::string(what) + ": non-finite entries");
  }
}

}  // namespace

Hyperplane::Hyperplane(Vector normal, double offset)
    : normal_(std::move(normal)), offset_(offset) {
  check_finite(normal_, "Hyperplane");
  if (!std::isfinite(offset_)) {
    throw NonFiniteError("Hyperplane: non-finite offset");
  }
  const double nrm = normal_.norm();
  if (normal_.size() == 0 || nrm == 0.0) {
    throw DegenerateInputError("Hyperplane: zero normal");
  }
  normal_ /= nrm;
  offset_ /= nrm;
}

Vector Hyperplane::project(const Vector& z) const {
  if (z.size() != normal_.size()) {
    throw DimensionError("Hyperplane::project: dimension mismatch");
  }
  check_finite(z, "Hyperplane::project");
  return z - (normal_.dot(z) - offset_) * normal_;
}

Vector Hyperplane::reflect(const Vector& z) const {
  if (z.size() != normal_.size()) {
    throw DimensionError("Hyperplane::reflect: dimension mismatch");
  }
  check_finite(z, "Hyperplane::reflect");
  return z - 2.0 * (normal_.dot(z) - offset_) * normal_;
}

Vector Hyperplane::reflect_direction(const Vector& v) const {
  if (v.size() != normal_.size()) {
    throw DimensionError("Hyperplane::reflect_direction: dimension mismatch");
  }
  check_finite(v, "Hyperplane::reflect_direction");
  return v - 2.0 * normal_.dot(v) * normal_;
}

double Hyperplane::residual_norm(const Vector& z) const {
  if (z.size() != normal_.size()) {
    throw DimensionError("Hyperplane::residual_norm: dimension mismatch");
  }
  check_finite(z, "Hyperplane::residual_norm");
  return std::abs(normal_.dot(z) - offset_);
}

bool Hyperplane::contains(const Vector& z, double tol) const {
  if (tol < 0.0) {
    throw std::invalid_argument("Hyperplane::contains: negative tolerance");
  }
  return residual_norm(z) <= tol * (1.0 + z.norm());
}

AffineSubspace::AffineSubspace(const Matrix& rows, const Vector& rhs) {
  if (rows.rows() != rhs.size()) {
    throw DimensionError("AffineSubspace: row count does not match rhs size");
  }
  if (rows.cols() == 0) {
    throw DegenerateInputError("AffineSubspace: ambient dimension must be positive");
  }
  check_finite(rows, "AffineSubspace");
  check_finite(rhs, "AffineSubspace");

  dim_ = rows.cols();
  const Index p = rows.rows();
  rows_.resize(p, dim_);
  rhs_.resize(p);
  for (Index i = 0; i < p; ++i) {
    const double nrm = rows.row(i).norm();
    if (nrm == 0.0) {
      throw DegenerateInputError("AffineSubspace: zero row " + std::to_string(i));
    }
    rows_.row(i) = rows.row(i) / nrm;
    rhs_(i) = rhs(i) / nrm;
  }

  if (p == 0) {
    basis_.resize(dim_, 0);
    particular_ = Vector::Zero(dim_);
    return;
  }
  if (p == 1) {
    basis_ = rows_.row(0).transpose();
    particular_ = rhs_(0) * basis_.col(0);
    return;
  }

  Eigen::BDCSVD<Matrix> svd(rows_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kRankTolerance);
  const Index r = svd.rank();
  basis_ = svd.matrixV().leftCols(r);
  particular_ = svd.solve(rhs_);
  if (!particular_.allFinite()) {
    throw NumericalError("AffineSubspace: factorization produced non-finite values");
  }
  if ((rows_ * particular_ - rhs_).norm() >
      kConsistencyTolerance * (1.0 + rhs_.norm())) {
    throw InconsistentSystemError("AffineSubspace: inconsistent system, the set is empty");
  }
}

AffineSubspace::AffineSubspace(const Hyperplane& h) {
  dim_ = h.dimension();
  rows_ = h.normal().transpose();
  rhs_ = Vector::Constant(1, h.offset());
  basis_ = h.normal();
  particular_ = h.offset() * h.normal();
}

AffineSubspace AffineSubspace::whole_space(Index dimension) {
  if (dimension <= 0) {
    throw DegenerateInputError("AffineSubspace: ambient dimension must be positive");
  }
  AffineSubspace s;
  s.dim_ = dimension;
  s.rows_.resize(0, dimension);
  s.rhs_.resize(0);
  s.basis_.resize(dimension, 0);
  s.particular_ = Vector::Zero(dimension);
  return s;
}

void AffineSubspace::require_point(const Vector& z) const {
  if (z.size() != dim_) {
    throw DimensionError("AffineSubspace: point dimension mismatch");
  }
  check_finite(z, "AffineSubspace");
}

Vector AffineSubspace::project(const Vector& z) const {
  require_point(z);
  if (basis_.cols() == 0) {
    return z;
  }
  return z - basis_ * (basis_.transpose() * (z - particular_));
}

Vector AffineSubspace::reflect(const Vector& z) const {
  require_point(z);
  if (basis_.cols() == 0) {
    return z;
  }
  return z - 2.0 * (basis_ * (basis_.transpose() * (z - particular_)));
}

Vector AffineSubspace::reflect_direction(const Vector& v) const {
  require_point(v);
  if (basis_.cols() == 0) {
    return v;
  }
  return v - 2.0 * (basis_ * (basis_.transpose() * v));
}

double AffineSubspace::residual_norm(const Vector& z) const {
  require_point(z);
  if (rows_.rows() == 0) {
    return 0.0;
  }
  return (rows_ * z - rhs_).norm();
}

bool AffineSubspace::contains(const Vector& z, double tol) const {
  if (tol < 0.0) {
    throw std::invalid_argument("AffineSubspace::contains: negative tolerance");
  }
  return residual_norm(z) <= tol * (1.0 + z.norm());
}

Vector AffineSubspace::unit_normal() const {
  if (codimension() != 1) {
    throw std::invalid_argument("AffineSubspace::unit_normal: codimension is not 1");
  }
  return basis_.col(0);
}

Matrix AffineSubspace::direction_basis() const {
  const Index r = basis_.cols();
  if (r == 0) {
    return Matrix::Identity(dim_, dim_);
  }
  if (r == dim_) {
    return Matrix(dim_, 0);
  }
  // Complete the orthonormal basis_ to all of R^n; the trailing columns
  // span the orthogonal complement of the row space.
  Eigen::HouseholderQR<Matrix> qr(basis_);
  Matrix full = qr.householderQ() * Matrix::Identity(dim_, dim_);
  return full.rightCols(dim_ - r);
}

std::pair<Matrix, Vector> stacked_system(std::span<const AffineSubspace> family) {
  if (family.empty()) {
    throw std::invalid_argument("stacked_system: empty family");
  }
  const Index n = family[0].dimension();
  Index total = 0;
  for (const AffineSubspace& s : family) {
    if (s.dimension() != n) {
      throw DimensionError("stacked_system: mixed ambient dimensions");
    }
    total += s.row_count();
  }
  Matrix A(total, n);
  Vector b(total);
  Index at = 0;
  for (const AffineSubspace& s : family) {
    const Index p = s.row_count();
    if (p > 0) {
      A.middleRows(at, p) = s.rows();
      b.segment(at, p) = s.rhs();
      at += p;
    }
  }
  return {std::move(A), std::move(b)};
}

Vector oracle_intersection_projection(std::span<const AffineSubspace> family,
                                      const Vector& z) {
  check_finite(z, "oracle_intersection_projection");
  if (family.empty()) {
    return z;
  }
  for (const AffineSubspace& s : family) {
    if (s.dimension() != z.size()) {
      throw DimensionError("oracle_intersection_projection: dimension mismatch");
    }
  }
  auto [A, b] = stacked_system(family);
  if (A.rows() == 0) {
    return z;
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A);
  cod.setThreshold(kRankTolerance);
  // Minimum-norm least-squares step keeps s as close to z as the
  // constraints allow.
  const Vector s = z + cod.solve(b - A * z);
  if (!s.allFinite()) {
    throw NumericalError("oracle_intersection_projection: non-finite solve");
  }
  if ((A * s - b).norm() > kConsistencyTolerance * (1.0 + b.norm())) {
    throw InconsistentSystemError(
        "oracle_intersection_projection: empty intersection");
  }
  return s;
}

Vector oracle_intersection_projection(const std::vector<AffineSubspace>& family,
                                      const Vector& z) {
  return oracle_intersection_projection(std::span<const AffineSubspace>(family), z);
}

}  // namespace bwcrm
