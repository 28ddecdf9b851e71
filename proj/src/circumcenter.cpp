#include "bwcrm/circumcenter.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bwcrm/errors.hpp"

namespace bwcrm {

Block::Block(std::vector<AffineSubspace> members) : members_(std::move(members)) {
  if (members_.empty()) {
    throw std::invalid_argument("Block: at least one member required");
  }
  const Index n = members_.front().dimension();
  for (const AffineSubspace& s : members_) {
    if (s.dimension() != n) {
      throw DimensionError("Block: mixed ambient dimensions");
    }
  }
}

bool ReflectionChain::any_hit() const {
  return std::find(hit_flags.begin(), hit_flags.end(), true) != hit_flags.end();
}

std::optional<Index> ReflectionChain::first_hit() const {
  for (std::size_t i = 0; i < hit_flags.size(); ++i) {
    if (hit_flags[i]) {
      return static_cast<Index>(i);
    }
  }
  return std::nullopt;
}

double ReflectionChain::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      d = std::max(d, (points[i] - points[j]).norm());
    }
  }
  return d;
}

ReflectionChain reflection_chain(std::span<const AffineSubspace> members,
                                 const Vector& z, double membership_tol) {
  if (members.empty()) {
    throw std::invalid_argument("reflection_chain: empty block");
  }
  ReflectionChain chain;
  chain.points.reserve(members.size() + 1);
  chain.hit_flags.reserve(members.size());
  chain.points.push_back(z);
  for (const AffineSubspace& s : members) {
    Vector next = s.reflect(chain.points.back());
    chain.hit_flags.push_back(s.contains(next, membership_tol));
    chain.points.push_back(std::move(next));
  }
  return chain;
}

ReflectionChain reflection_chain(const Block& block, const Vector& z,
                                 double membership_tol) {
  return reflection_chain(block.members(), z, membership_tol);
}

Vector circumcenter_points(std::span<const Vector> points) {
  if (points.empty()) {
    throw std::invalid_argument("circumcenter_points: empty point list");
  }
  const Index n = points[0].size();
  for (const Vector& p : points) {
    if (p.size() != n) {
      throw DimensionError("circumcenter_points: mixed dimensions");
    }
    if (!p.allFinite()) {
      throw NonFiniteError("circumcenter_points: non-finite point");
    }
  }

  const Index q = static_cast<Index>(points.size()) - 1;
  const Vector& p0 = points[0];
  if (q == 0) {
    return p0;
  }

  Matrix v(n, q);
  for (Index i = 0; i < q; ++i) {
    v.col(i) = points[i + 1] - p0;
  }

  // Two points: the midpoint of the segment, or p0 when they coincide.
  if (q == 1) {
    return v.col(0).squaredNorm() > 0.0 ? Vector(p0 + 0.5 * v.col(0)) : p0;
  }

  const Matrix gram = v.transpose() * v;
  const Vector w = gram.diagonal();

  // Minimum-norm solution of gram * t = w / 2.  The Gram matrix is PSD;
  // eigenvalues at or below the rank cutoff are treated as zero, which is
  // what makes duplicated chain points harmless.
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  if (es.info() != Eigen::Success) {
    throw NumericalError("circumcenter_points: eigendecomposition failed");
  }
  const Vector& lambda = es.eigenvalues();
  const double cutoff = kRankTolerance * lambda.cwiseAbs().maxCoeff();
  Vector y = es.eigenvectors().transpose() * (0.5 * w);
  for (Index i = 0; i < q; ++i) {
    y(i) = lambda(i) > cutoff ? y(i) / lambda(i) : 0.0;
  }
  const Vector c = p0 + v * (es.eigenvectors() * y);

  double diameter = 0.0;
  for (Index i = 0; i + 1 <= q; ++i) {
    for (Index j = i + 1; j <= q; ++j) {
      diameter = std::max(diameter, (points[i] - points[j]).norm());
    }
  }
  const double d0 = (c - p0).norm();
  double spread = 0.0;
  for (Index i = 1; i <= q; ++i) {
    spread = std::max(spread, std::abs((c - points[i]).norm() - d0));
  }
  if (spread > kEquidistanceTolerance * (1.0 + diameter)) {
    std::ostringstream msg;
    msg << "circumcenter_points: no equidistant point in the affine hull "
        << "(spread " << spread << ", diameter " << diameter << ")";
    throw DegeneracyError(msg.str());
  }
  return c;
}

Vector circumcenter_points(const std::vector<Vector>& points) {
  return circumcenter_points(std::span<const Vector>(points));
}

Vector circumcenter_block(std::span<const AffineSubspace> members, const Vector& z) {
  return circumcenter_points(reflection_chain(members, z).points);
}

Vector circumcenter_block(const Block& block, const Vector& z) {
  return circumcenter_block(block.members(), z);
}

}  // namespace bwcrm
