#pragma once

// Seeded instance generators and an independent projection oracle shared
// by the unit and acceptance suites.

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "bwcrm/bwcrm.hpp"

namespace testsupport {

using bwcrm::Index;
using bwcrm::Matrix;
using bwcrm::Vector;

inline Vector gaussian_vector(std::mt19937_64& rng, Index n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) {
    v(i) = scale * normal(rng);
  }
  return v;
}

inline Matrix gaussian_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      m(i, j) = normal(rng);
    }
  }
  return m;
}

// Random affine subspace with `rows` constraint rows passing through a
// planted point, so intersections of several of these are never empty.
inline bwcrm::AffineSubspace random_subspace_through(std::mt19937_64& rng, Index n,
                                                     Index rows,
                                                     const Vector& planted) {
  const Matrix a = gaussian_matrix(rng, rows, n);
  return bwcrm::AffineSubspace(a, a * planted);
}

inline std::vector<bwcrm::AffineSubspace> random_family_through(
    std::mt19937_64& rng, Index n, Index members, Index max_rows,
    const Vector& planted) {
  std::uniform_int_distribution<Index> rows(1, max_rows);
  std::vector<bwcrm::AffineSubspace> family;
  family.reserve(static_cast<std::size_t>(members));
  for (Index i = 0; i < members; ++i) {
    family.push_back(random_subspace_through(rng, n, rows(rng), planted));
  }
  return family;
}

// Projection onto {s : A s = b} through the KKT system
//
//   [ I  A^T ] [ s      ]   [ z ]
//   [ A   0  ] [ lambda ] = [ b ]
//
// solved as one least-squares problem.  Deliberately a different
// formulation than the library's pseudo-inverse step.
inline Vector kkt_projection(const Matrix& A, const Vector& b, const Vector& z) {
  const Index n = z.size();
  const Index p = A.rows();
  Matrix kkt = Matrix::Zero(n + p, n + p);
  kkt.topLeftCorner(n, n) = Matrix::Identity(n, n);
  kkt.topRightCorner(n, p) = A.transpose();
  kkt.bottomLeftCorner(p, n) = A;
  Vector rhs(n + p);
  rhs.head(n) = z;
  rhs.tail(p) = b;
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(kkt);
  return cod.solve(rhs).head(n);
}

inline Vector kkt_projection(const std::vector<bwcrm::AffineSubspace>& family,
                             const Vector& z) {
  auto [A, b] = bwcrm::stacked_system(family);
  return kkt_projection(A, b, z);
}

inline double rel_err(const Vector& got, const Vector& want) {
  return (got - want).norm() / (1.0 + want.norm());
}

inline Vector vec2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

inline Vector vec3(double x, double y, double z) {
  Vector v(3);
  v << x, y, z;
  return v;
}

}  // namespace testsupport
