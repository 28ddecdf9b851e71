#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "bwcrm/circumcenter.hpp"
#include "bwcrm/geometry.hpp"
#include "bwcrm/problem.hpp"
#include "bwcrm/types.hpp"

namespace bwcrm {

/* An ordered partition of m subspaces into p contiguous blocks, stored as
 * the boundary indices 0 = q_0 < q_1 < ... < q_p = m.  Block i covers the
 * half-open index range [q_i, q_{i+1}).  The partition never owns the
 * subspaces; it is applied to whatever ordered family it is paired with,
 * and the concatenation of the blocks is that family by construction.
 */
class BlockPartition {
 public:
  explicit BlockPartition(std::vector<Index> boundaries);

  static BlockPartition unit_blocks(Index m);
  static BlockPartition full_block(Index m);
  // ceil(m / q) blocks of size q with a smaller trailing remainder block;
  // q >= m collapses to the full block.
  static BlockPartition by_size(Index m, Index q);

  Index block_count() const { return static_cast<Index>(boundaries_.size()) - 1; }
  Index subspace_count() const { return boundaries_.back(); }
  // [begin, end) index range of one block.
  std::pair<Index, Index> block_range(Index block) const;
  Index block_size(Index block) const;
  const std::vector<Index>& boundaries() const { return boundaries_; }

 private:
  std::vector<Index> boundaries_;
};

// Family-level convenience wrapper over BlockPartition::by_size.
BlockPartition partition_by_size(std::span<const AffineSubspace> family, Index q);
BlockPartition partition_by_size(const std::vector<AffineSubspace>& family, Index q);

struct SolverConfig {
  // Stop when the stacked normalized residual drops to this value.
  double residual_tol = 1e-8;
  // Block sweeps allowed after the start evaluation; 0 evaluates the start
  // and nothing else.
  Index max_iterations = 1000;
  // Tolerance used to flag reflected points landing on their own subspace.
  double membership_tol = kDefaultMembershipTolerance;

  /* Start replacement for degenerate ("bad luck") chains.  Only engaged on
   * the single-full-block path when every member is a hyperplane; the
   * blocked paths absorb degenerate chains in the rank-tolerant
   * circumcenter instead.  The shift length starts at
   * rep_initial_t * (1 + ||z||) and shrinks geometrically until the
   * replacement chain is clean.
   */
  bool rep_enabled = true;
  double rep_initial_t = 0.1;
  double rep_shrink = 0.5;
  int rep_max_tries = 60;

  // Record the distance to the true solution (one oracle solve up front).
  bool trace_oracle = false;
};

void validate(const SolverConfig& config);

enum class TerminationReason { converged, budget_exhausted, degeneracy };

struct IterationRecord {
  Index iteration = 0;
  Vector iterate;
  double residual = 0.0;
  // ||z_k - P(start)|| when the oracle was requested.
  std::optional<double> error;
  // Cumulative reflections/projections applied so far.
  std::int64_t proj_count = 0;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  TerminationReason reason = TerminationReason::budget_exhausted;
  double solve_seconds = 0.0;

  const IterationRecord& final_record() const;
  Index iterations() const;
  bool has_errors() const;
};

struct SolveResult {
  Vector solution;
  IterationTrace trace;
};

/* One sweep of the block-wise method: for each block in order, reflect
 * through the members successively and move to the circumcenter of the
 * chain.  A partition into singletons makes the sweep a composition of
 * projections; the trivial partition gives the one-shot circumcentered
 * step over the whole family.
 */
Vector bwcrm_step(std::span<const AffineSubspace> family,
                  const BlockPartition& partition, const Vector& z,
                  double membership_tol = kDefaultMembershipTolerance);

/* Run sweeps until the stacked residual passes below config.residual_tol
 * or the iteration budget runs out.  Record 0 is the start; record k the
 * iterate after sweep k.  Budget exhaustion is a normal outcome reported
 * in the trace; degeneracies (circumcenter failure, rep exhaustion)
 * propagate as exceptions.
 */
SolveResult solve(const Problem& problem, const BlockPartition& partition,
                  const SolverConfig& config);

// Singleton blocks: the method of alternating projections.
SolveResult map_solve(const Problem& problem, const SolverConfig& config);
// One full block: the circumcentered reflection method.
SolveResult crm_solve(const Problem& problem, const SolverConfig& config);

/* Replace a start whose reflection chain degenerates.  Requires a family
 * of hyperplanes and a chain with at least one hit.  With i the first hit
 * index and a the unit normal of hyperplane i, candidates
 *
 *   z + t * (R_1 ... R_i applied to a)
 *
 * share the projection onto the intersection with z; t backtracks from
 * rep_initial_t * (1 + ||z||) until reflections of the candidate through
 * hyperplanes 1..i stay off their hyperplanes.  Throws DegeneracyError
 * when rep_max_tries shrink steps are not enough.
 */
Vector rep_shift(std::span<const AffineSubspace> hyperplanes, const Vector& z,
                 const SolverConfig& config);

/* Geometric mean of the successive error ratios e_{k+1} / e_k, skipping
 * steps whose error has already sunk to the floating point floor
 * 100 * eps * (1 + ||start||).  Needs at least three usable records with
 * oracle errors, else InsufficientDataError.
 */
double fit_empirical_rate(const IterationTrace& trace);

// CSV with header iter,residual[,error],proj_count; the error column is
// present exactly when the trace carries oracle errors.
void write_trace_csv(const IterationTrace& trace, std::ostream& out);
void write_trace_csv(const IterationTrace& trace, const std::filesystem::path& path);

}  // namespace bwcrm
