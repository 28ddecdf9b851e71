#include "bwcrm/problem.hpp"

#include <random>
#include <sstream>
#include <utility>

#include "bwcrm/errors.hpp"

namespace bwcrm {

namespace {

// Uniform double in [-1, 1) from the top 53 bits of the generator output.
// Spelled out instead of std::uniform_real_distribution so that a seed
// pins the stream across standard library implementations.
double uniform_pm1(std::mt19937_64& rng) {
  return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
}

double uniform_01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double nonzero_pm1(std::mt19937_64& rng) {
  double v = 0.0;
  while (v == 0.0) {
    v = uniform_pm1(rng);
  }
  return v;
}

}  // namespace

Problem make_problem(std::vector<AffineSubspace> family, Vector start,
                     std::string name) {
  if (family.empty()) {
    throw std::invalid_argument("make_problem: empty family");
  }
  // Throws on dimension mismatch, non-finite start, or empty intersection.
  oracle_intersection_projection(family, start);
  return Problem{std::move(family), std::move(start), std::move(name)};
}

Problem problem_from_rows(const Matrix& A, const Vector& b, const Vector& start,
                          std::string name) {
  if (A.rows() != b.size()) {
    throw DimensionError("problem_from_rows: row count does not match rhs size");
  }
  if (A.rows() == 0) {
    throw std::invalid_argument("problem_from_rows: no rows");
  }
  std::vector<AffineSubspace> family;
  family.reserve(static_cast<std::size_t>(A.rows()));
  for (Index i = 0; i < A.rows(); ++i) {
    family.emplace_back(Hyperplane(A.row(i).transpose(), b(i)));
  }
  return make_problem(std::move(family), start, std::move(name));
}

Problem synth_consistent_system(Index p, Index n, double density,
                                std::uint64_t seed) {
  if (p < 1 || n < 1) {
    throw std::invalid_argument("synth_consistent_system: p and n must be positive");
  }
  if (!(density > 0.0) || density > 1.0) {
    throw std::invalid_argument("synth_consistent_system: density must be in (0, 1]");
  }

  std::mt19937_64 rng(seed);
  Matrix A = Matrix::Zero(p, n);
  for (Index i = 0; i < p; ++i) {
    bool any = false;
    for (Index j = 0; j < n; ++j) {
      if (uniform_01(rng) < density) {
        A(i, j) = uniform_pm1(rng);
        any = A(i, j) != 0.0 || any;
      }
    }
    if (!any) {
      A(i, i % n) = nonzero_pm1(rng);
    }
  }
  Vector planted(n);
  for (Index j = 0; j < n; ++j) {
    planted(j) = uniform_pm1(rng);
  }

  std::ostringstream name;
  name << "synth-" << p << "x" << n << "-d" << density << "-s" << seed;
  return problem_from_rows(A, A * planted, Vector::Zero(n), name.str());
}

}  // namespace bwcrm
