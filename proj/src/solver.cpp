#include "bwcrm/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>

#include "bwcrm/errors.hpp"

namespace bwcrm {

BlockPartition::BlockPartition(std::vector<Index> boundaries)
    : boundaries_(std::move(boundaries)) {
  if (boundaries_.size() < 2 || boundaries_.front() != 0) {
    throw std::invalid_argument("BlockPartition: boundaries must start at 0 and contain an end");
  }
  for (std::size_t i = 1; i < boundaries_.size(); ++i) {
    if (boundaries_[i] <= boundaries_[i - 1]) {
      throw std::invalid_argument("BlockPartition: boundaries must be strictly increasing");
    }
  }
}

BlockPartition BlockPartition::unit_blocks(Index m) {
  if (m < 1) {
    throw std::invalid_argument("BlockPartition: m must be positive");
  }
  std::vector<Index> bounds(static_cast<std::size_t>(m) + 1);
  for (Index i = 0; i <= m; ++i) {
    bounds[static_cast<std::size_t>(i)] = i;
  }
  return BlockPartition(std::move(bounds));
}

BlockPartition BlockPartition::full_block(Index m) {
  if (m < 1) {
    throw std::invalid_argument("BlockPartition: m must be positive");
  }
  return BlockPartition({0, m});
}

BlockPartition BlockPartition::by_size(Index m, Index q) {
  if (m < 1) {
    throw std::invalid_argument("BlockPartition: m must be positive");
  }
  if (q < 1) {
    throw std::invalid_argument("BlockPartition: block size must be positive");
  }
  std::vector<Index> bounds;
  bounds.push_back(0);
  for (Index at = q; at < m; at += q) {
    bounds.push_back(at);
  }
  bounds.push_back(m);
  return BlockPartition(std::move(bounds));
}

std::pair<Index, Index> BlockPartition::block_range(Index block) const {
  if (block < 0 || block >= block_count()) {
    throw std::invalid_argument("BlockPartition: block index out of range");
  }
  const std::size_t i = static_cast<std::size_t>(block);
  return {boundaries_[i], boundaries_[i + 1]};
}

Index BlockPartition::block_size(Index block) const {
  auto [begin, end] = block_range(block);
  return end - begin;
}

BlockPartition partition_by_size(std::span<const AffineSubspace> family, Index q) {
  return BlockPartition::by_size(static_cast<Index>(family.size()), q);
}

BlockPartition partition_by_size(const std::vector<AffineSubspace>& family, Index q) {
  return BlockPartition::by_size(static_cast<Index>(family.size()), q);
}

void validate(const SolverConfig& config) {
  if (!(config.residual_tol > 0.0)) {
    throw std::invalid_argument("SolverConfig: residual_tol must be positive");
  }
  if (config.max_iterations < 0) {
    throw std::invalid_argument("SolverConfig: max_iterations must be non-negative");
  }
  if (!(config.membership_tol > 0.0)) {
    throw std::invalid_argument("SolverConfig: membership_tol must be positive");
  }
  if (!(config.rep_initial_t > 0.0)) {
    throw std::invalid_argument("SolverConfig: rep_initial_t must be positive");
  }
  if (!(config.rep_shrink > 0.0) || config.rep_shrink >= 1.0) {
    throw std::invalid_argument("SolverConfig: rep_shrink must lie in (0, 1)");
  }
  if (config.rep_max_tries < 1) {
    throw std::invalid_argument("SolverConfig: rep_max_tries must be positive");
  }
}

const IterationRecord& IterationTrace::final_record() const {
  if (records.empty()) {
    throw InsufficientDataError("IterationTrace: empty trace");
  }
  return records.back();
}

Index IterationTrace::iterations() const { return final_record().iteration; }

bool IterationTrace::has_errors() const {
  return !records.empty() && records.front().error.has_value();
}

namespace {

// Shift candidate for a chain whose first hit is at member index i_hat
// (0-based).  The direction is the unit normal of that hyperplane pushed
// back through the leading reflections; reflections of z + t * d through
// hyperplanes 0..i_hat then differ from the original chain by exactly
// +/- t along a normal, so the projection onto the intersection is
// untouched.
Vector rep_shift_impl(std::span<const AffineSubspace> members, const Vector& z,
                      const SolverConfig& config, Index i_hat,
                      std::int64_t& proj_count) {
  Vector d = members[static_cast<std::size_t>(i_hat)].unit_normal();
  for (Index j = i_hat; j >= 0; --j) {
    d = members[static_cast<std::size_t>(j)].reflect_direction(d);
    ++proj_count;
  }
  double t = config.rep_initial_t * (1.0 + z.norm());
  for (int attempt = 0; attempt < config.rep_max_tries; ++attempt) {
    Vector candidate = z + t * d;
    bool clean = true;
    Vector w = candidate;
    for (Index j = 0; j <= i_hat; ++j) {
      const AffineSubspace& h = members[static_cast<std::size_t>(j)];
      w = h.reflect(w);
      ++proj_count;
      if (h.contains(w, config.membership_tol)) {
        clean = false;
        break;
      }
    }
    if (clean) {
      return candidate;
    }
    t *= config.rep_shrink;
  }
  throw DegeneracyError("rep_shift: backtracking exhausted without a clean chain");
}

Index find_first_hit(std::span<const AffineSubspace> members, const Vector& z,
                     double membership_tol, std::int64_t& proj_count) {
  Vector w = z;
  for (std::size_t i = 0; i < members.size(); ++i) {
    w = members[i].reflect(w);
    ++proj_count;
    if (members[i].contains(w, membership_tol)) {
      return static_cast<Index>(i);
    }
  }
  return -1;
}

}  // namespace

Vector rep_shift(std::span<const AffineSubspace> hyperplanes, const Vector& z,
                 const SolverConfig& config) {
  validate(config);
  if (hyperplanes.empty()) {
    throw std::invalid_argument("rep_shift: empty family");
  }
  for (const AffineSubspace& h : hyperplanes) {
    if (!h.is_hyperplane()) {
      throw std::invalid_argument("rep_shift: every member must be a hyperplane");
    }
  }
  std::int64_t scratch = 0;
  const Index i_hat = find_first_hit(hyperplanes, z, config.membership_tol, scratch);
  if (i_hat < 0) {
    throw std::invalid_argument("rep_shift: chain has no bad-luck index");
  }
  return rep_shift_impl(hyperplanes, z, config, i_hat, scratch);
}

namespace {

struct StepContext {
  std::span<const AffineSubspace> family;
  const BlockPartition* partition = nullptr;
  const SolverConfig* config = nullptr;
  bool rep_path = false;  // single full block of hyperplanes with rep on
};

Vector sweep(const StepContext& ctx, Vector z, std::int64_t& proj_count) {
  const SolverConfig& config = *ctx.config;
  for (Index bi = 0; bi < ctx.partition->block_count(); ++bi) {
    auto [begin, end] = ctx.partition->block_range(bi);
    const auto members = ctx.family.subspan(static_cast<std::size_t>(begin),
                                            static_cast<std::size_t>(end - begin));
    ReflectionChain chain = reflection_chain(members, z, config.membership_tol);
    proj_count += static_cast<std::int64_t>(members.size());
    if (ctx.rep_path && chain.any_hit()) {
      // Each replacement pushes the first hit strictly later in the chain,
      // so the number of rounds is bounded by the block size.
      Index rounds = 0;
      while (auto hit = chain.first_hit()) {
        if (++rounds > static_cast<Index>(members.size())) {
          throw DegeneracyError("solve: degenerate chain persists after start replacements");
        }
        z = rep_shift_impl(members, z, config, *hit, proj_count);
        chain = reflection_chain(members, z, config.membership_tol);
        proj_count += static_cast<std::int64_t>(members.size());
      }
    }
    z = circumcenter_points(chain.points);
  }
  return z;
}

}  // namespace

Vector bwcrm_step(std::span<const AffineSubspace> family,
                  const BlockPartition& partition, const Vector& z,
                  double membership_tol) {
  if (partition.subspace_count() != static_cast<Index>(family.size())) {
    throw DimensionError("bwcrm_step: partition does not cover the family");
  }
  SolverConfig config;
  config.membership_tol = membership_tol;
  StepContext ctx{family, &partition, &config, false};
  std::int64_t ignored = 0;
  return sweep(ctx, z, ignored);
}

SolveResult solve(const Problem& problem, const BlockPartition& partition,
                  const SolverConfig& config) {
  validate(config);
  if (problem.family.empty()) {
    throw std::invalid_argument("solve: empty family");
  }
  if (partition.subspace_count() != problem.family_size()) {
    throw DimensionError("solve: partition does not cover the family");
  }
  if (!problem.start.allFinite()) {
    throw NonFiniteError("solve: non-finite start");
  }

  auto [A, b] = stacked_system(problem.family);
  if (A.cols() != problem.start.size()) {
    throw DimensionError("solve: start dimension does not match the family");
  }

  const bool rep_path =
      config.rep_enabled && partition.block_count() == 1 &&
      std::all_of(problem.family.begin(), problem.family.end(),
                  [](const AffineSubspace& s) { return s.is_hyperplane(); });
  StepContext ctx{problem.family, &partition, &config, rep_path};

  std::optional<Vector> target;
  if (config.trace_oracle) {
    target = oracle_intersection_projection(problem.family, problem.start);
  }

  const auto t0 = std::chrono::steady_clock::now();
  IterationTrace trace;
  trace.records.reserve(static_cast<std::size_t>(
      std::min<Index>(config.max_iterations, 4096) + 1));
  std::int64_t proj_count = 0;
  Vector z = problem.start;

  const auto push_record = [&](Index k, const Vector& iterate) {
    IterationRecord rec;
    rec.iteration = k;
    rec.iterate = iterate;
    rec.residual = A.rows() == 0 ? 0.0 : (A * iterate - b).norm();
    if (target) {
      rec.error = (iterate - *target).norm();
    }
    rec.proj_count = proj_count;
    trace.records.push_back(std::move(rec));
    return trace.records.back().residual;
  };

  trace.reason = TerminationReason::budget_exhausted;
  if (push_record(0, z) <= config.residual_tol) {
    trace.reason = TerminationReason::converged;
  } else {
    for (Index k = 1; k <= config.max_iterations; ++k) {
      z = sweep(ctx, std::move(z), proj_count);
      if (push_record(k, z) <= config.residual_tol) {
        trace.reason = TerminationReason::converged;
        break;
      }
    }
  }
  trace.solve_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return SolveResult{std::move(z), std::move(trace)};
}

SolveResult map_solve(const Problem& problem, const SolverConfig& config) {
  return solve(problem, BlockPartition::unit_blocks(problem.family_size()), config);
}

SolveResult crm_solve(const Problem& problem, const SolverConfig& config) {
  return solve(problem, BlockPartition::full_block(problem.family_size()), config);
}

double fit_empirical_rate(const IterationTrace& trace) {
  if (!trace.has_errors()) {
    throw InsufficientDataError("fit_empirical_rate: trace has no oracle errors");
  }
  const double z0_norm = trace.records.front().iterate.norm();
  const double floor =
      100.0 * std::numeric_limits<double>::epsilon() * (1.0 + z0_norm);

  double log_sum = 0.0;
  Index count = 0;
  for (std::size_t k = 0; k + 1 < trace.records.size(); ++k) {
    const auto& cur = trace.records[k].error;
    const auto& next = trace.records[k + 1].error;
    if (!cur || !next || *cur <= floor) {
      continue;
    }
    const double ratio = *next / *cur;
    if (ratio <= 0.0) {
      return 0.0;
    }
    log_sum += std::log(ratio);
    ++count;
  }
  if (count < 2) {
    throw InsufficientDataError(
        "fit_empirical_rate: need at least three records above the error floor");
  }
  return std::exp(log_sum / static_cast<double>(count));
}

void write_trace_csv(const IterationTrace& trace, std::ostream& out) {
  const bool with_error = trace.has_errors();
  out << (with_error ? "iter,residual,error,proj_count\n"
                     : "iter,residual,proj_count\n");
  char buf[64];
  for (const IterationRecord& rec : trace.records) {
    out << rec.iteration << ',';
    std::snprintf(buf, sizeof(buf), "%.9e", rec.residual);
    out << buf << ',';
    if (with_error) {
      std::snprintf(buf, sizeof(buf), "%.9e", rec.error.value_or(0.0));
      out << buf << ',';
    }
    out << rec.proj_count << '\n';
  }
}

void write_trace_csv(const IterationTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error("write_trace_csv: cannot open " + path.string());
  }
  write_trace_csv(trace, out);
  out.flush();
  if (!out) {
    throw Error("write_trace_csv: write failed for " + path.string());
  }
}

}  // namespace bwcrm
