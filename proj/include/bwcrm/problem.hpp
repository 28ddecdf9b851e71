#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bwcrm/geometry.hpp"
#include "bwcrm/types.hpp"

namespace bwcrm {

/* A best approximation instance: find the point of the intersection of
 * `family` closest to `start`.
 *
 * Plain aggregate; use the builders below (or make_problem) to get the
 * non-empty-intersection and dimension checks.
 */
struct Problem {
  std::vector<AffineSubspace> family;
  Vector start;
  std::string name;

  Index dimension() const { return start.size(); }
  Index family_size() const { return static_cast<Index>(family.size()); }
};

// Validate and assemble a Problem: non-empty family, uniform dimensions,
// finite start, consistent stacked system.
Problem make_problem(std::vector<AffineSubspace> family, Vector start,
                     std::string name = {});

// One hyperplane per row of A (zero rows rejected).  This is the row-action
// view of a linear system used throughout: solving A z = b by projecting
// onto the rows' hyperplanes.
Problem problem_from_rows(const Matrix& A, const Vector& b, const Vector& start,
                          std::string name = {});

/* Seeded random consistent system.
 *
 * Entries are drawn uniformly from [-1, 1] and kept with probability
 * `density`; a row left empty gets one deterministic fill-in so every row
 * is usable as a hyperplane.  The right-hand side is A x* for a planted
 * x*, which guarantees a non-empty intersection.  The start is the zero
 * vector.  Identical (p, n, density, seed) give bitwise identical
 * problems on any platform; the generator avoids std::*_distribution on
 * purpose.
 */
Problem synth_consistent_system(Index p, Index n, double density,
                                std::uint64_t seed);

}  // namespace bwcrm
