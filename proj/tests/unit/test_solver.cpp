#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bwcrm/solver.hpp"
#include "support/generators.hpp"

using namespace bwcrm;
using testsupport::vec2;
using testsupport::vec3;

namespace {

AffineSubspace hyperplane2(double nx, double ny, double offset) {
  return AffineSubspace(Hyperplane(vec2(nx, ny), offset));
}

std::vector<AffineSubspace> axes2() {
  return {hyperplane2(0.0, 1.0, 0.0), hyperplane2(1.0, 0.0, 0.0)};
}

}  // namespace

TEST_CASE("block partitions carry strictly increasing boundaries") {
  const auto unit = BlockPartition::unit_blocks(3);
  CHECK(unit.block_count() == 3);
  CHECK(unit.block_range(1) == std::pair<Index, Index>{1, 2});

  const auto full = BlockPartition::full_block(5);
  CHECK(full.block_count() == 1);
  CHECK(full.block_size(0) == 5);

  const auto by2 = BlockPartition::by_size(5, 2);
  CHECK(by2.boundaries() == std::vector<Index>{0, 2, 4, 5});
  CHECK(by2.block_size(2) == 1);
  CHECK(BlockPartition::by_size(12, 12).block_count() == 1);
  CHECK(BlockPartition::by_size(12, 40).block_count() == 1);
  CHECK(BlockPartition::by_size(27, 9).block_count() == 3);

  CHECK_THROWS_AS(BlockPartition({0, 2, 2, 5}), std::invalid_argument);
  CHECK_THROWS_AS(BlockPartition({1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(BlockPartition::by_size(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(BlockPartition::by_size(4, 0), std::invalid_argument);
  CHECK_THROWS_AS(full.block_range(1), std::invalid_argument);
}

TEST_CASE("solver config validation") {
  SolverConfig config;
  CHECK_NOTHROW(validate(config));
  config.max_iterations = 0;  // evaluate the start only
  CHECK_NOTHROW(validate(config));

  SolverConfig bad = config;
  bad.residual_tol = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = config;
  bad.max_iterations = -1;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = config;
  bad.rep_shrink = 1.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = config;
  bad.rep_max_tries = 0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("one sweep with unit blocks is a composition of projections") {
  const auto family = axes2();
  const auto step =
      bwcrm_step(family, BlockPartition::unit_blocks(2), vec2(1.0, 1.0));
  CHECK(step.norm() <= 1e-14);

  // A slanted line followed by the horizontal axis.
  const std::vector<AffineSubspace> pair{
      AffineSubspace(Hyperplane(vec2(1.0, -1.0), 0.0)),
      hyperplane2(0.0, 1.0, 0.0)};
  const auto swept = bwcrm_step(pair, BlockPartition::unit_blocks(2), vec2(0.0, 1.0));
  CHECK(swept.isApprox(vec2(0.5, 0.0), 1e-14));

  CHECK_THROWS_AS(
      bwcrm_step(pair, BlockPartition::unit_blocks(3), vec2(0.0, 0.0)),
      DimensionError);
}

TEST_CASE("one sweep with the full block is the blockwise circumcenter") {
  std::mt19937_64 rng(71);
  const Index n = 8;
  const Vector planted = testsupport::gaussian_vector(rng, n);
  const auto family = testsupport::random_family_through(rng, n, 4, 2, planted);
  const Vector z = testsupport::gaussian_vector(rng, n, 2.0);

  const auto one = bwcrm_step(family, BlockPartition::full_block(4), z);
  CHECK(one.isApprox(circumcenter_block(family, z), 1e-13));

  // Coarsening to two blocks composes the two block circumcenters.
  const auto two = bwcrm_step(family, BlockPartition({0, 2, 4}), z);
  const std::span<const AffineSubspace> all(family);
  const Vector manual =
      circumcenter_block(all.subspan(2, 2), circumcenter_block(all.subspan(0, 2), z));
  CHECK(two.isApprox(manual, 1e-13));
}

TEST_CASE("solve records the start and counts projections per sweep") {
  const auto problem = make_problem(axes2(), vec2(1.0, 1.0));
  SolverConfig config;
  config.residual_tol = 1e-12;
  const auto result = solve(problem, BlockPartition::unit_blocks(2), config);

  CHECK(result.trace.reason == TerminationReason::converged);
  REQUIRE(result.trace.records.size() >= 2);
  CHECK(result.trace.records[0].iteration == 0);
  CHECK(result.trace.records[0].proj_count == 0);
  CHECK(result.trace.records[0].residual == doctest::Approx(std::sqrt(2.0)));
  CHECK(result.trace.records[1].proj_count == 2);
  CHECK(result.solution.norm() <= 1e-12);

  // Feasible start: nothing to do.
  const auto at_solution = make_problem(axes2(), vec2(0.0, 0.0));
  const auto idle = solve(at_solution, BlockPartition::unit_blocks(2), config);
  CHECK(idle.trace.iterations() == 0);
  CHECK(idle.trace.reason == TerminationReason::converged);

  // Budget 0 evaluates the start and stops.
  SolverConfig none = config;
  none.max_iterations = 0;
  const auto start_only = solve(problem, BlockPartition::unit_blocks(2), none);
  CHECK(start_only.trace.records.size() == 1);
  CHECK(start_only.trace.reason == TerminationReason::budget_exhausted);
}

TEST_CASE("budget exhaustion is an outcome, not an error") {
  const auto problem = synth_consistent_system(6, 9, 1.0, 7);
  SolverConfig config;
  config.residual_tol = 1e-14;
  config.max_iterations = 2;
  const auto result = map_solve(problem, config);
  CHECK(result.trace.reason == TerminationReason::budget_exhausted);
  CHECK(result.trace.iterations() == 2);
  CHECK(result.trace.records.size() == 3);
}

TEST_CASE("full-block solve of a consistent hyperplane system needs one sweep") {
  const auto problem = synth_consistent_system(12, 27, 1.0, 11);
  SolverConfig config;
  config.residual_tol = 1e-9;
  config.max_iterations = 5;
  config.trace_oracle = true;
  const auto result = crm_solve(problem, config);

  CHECK(result.trace.reason == TerminationReason::converged);
  CHECK(result.trace.iterations() == 1);
  CHECK(result.trace.final_record().proj_count == 12);
  CHECK(result.trace.final_record().error.value() <=
        1e-9 * (1.0 + problem.start.norm()));
}

TEST_CASE("alternating projections sweep through coordinate planes") {
  const std::vector<AffineSubspace> planes{
      AffineSubspace(Hyperplane(vec3(1.0, 0.0, 0.0), 0.0)),
      AffineSubspace(Hyperplane(vec3(0.0, 1.0, 0.0), 0.0)),
      AffineSubspace(Hyperplane(vec3(0.0, 0.0, 1.0), 0.0))};
  const auto problem = make_problem(planes, vec3(1.0, 1.0, 1.0));
  SolverConfig config;
  config.residual_tol = 1e-13;
  const auto result = map_solve(problem, config);
  CHECK(result.trace.iterations() == 1);
  CHECK(result.solution.norm() <= 1e-13);
}

TEST_CASE("degenerate start on the full-block hyperplane path is replaced") {
  // (1, 0) sits on the first hyperplane; the raw chain degenerates.
  const auto problem = make_problem(axes2(), vec2(1.0, 0.0));
  SolverConfig config;
  config.residual_tol = 1e-12;
  const auto result = crm_solve(problem, config);
  CHECK(result.trace.reason == TerminationReason::converged);
  CHECK(result.trace.iterations() == 1);
  CHECK(result.solution.norm() <= 1e-12);
  // The replacement costs extra reflections on top of the final chain.
  CHECK(result.trace.final_record().proj_count > 2);
}

TEST_CASE("rep shift moves along the pushed-back normal and keeps the target") {
  const auto family = axes2();
  SolverConfig config;
  const Vector z = vec2(1.0, 0.0);
  const Vector shifted = rep_shift(family, z, config);

  // First hit is member 0 with unit normal (0, 1); pushing it back through
  // reflection 0 flips it, and the first backtracking candidate is taken.
  const double t = config.rep_initial_t * (1.0 + z.norm());
  CHECK(shifted.isApprox(vec2(1.0, -t), 1e-12));

  const Vector target = oracle_intersection_projection(family, z);
  CHECK((oracle_intersection_projection(family, shifted) - target).norm() <=
        1e-12 * (1.0 + target.norm()));
  CHECK(!reflection_chain(family, shifted, config.membership_tol).any_hit());

  CHECK_THROWS_AS(rep_shift(family, vec2(1.0, 1.0), config), std::invalid_argument);
  const std::vector<AffineSubspace> with_plane{
      AffineSubspace::whole_space(2), family[0]};
  CHECK_THROWS_AS(rep_shift(with_plane, vec2(1.0, 0.0), config),
                  std::invalid_argument);
}

TEST_CASE("rep shift handles consecutive degeneracies") {
  // Start on the intersection of the first two hyperplanes but not the
  // third: the first replacement clears hyperplane 0, the second clears
  // hyperplane 1.
  const std::vector<AffineSubspace> family{
      AffineSubspace(Hyperplane(vec3(0.0, 0.0, 1.0), 0.0)),
      AffineSubspace(Hyperplane(vec3(0.0, 1.0, 0.0), 0.0)),
      AffineSubspace(Hyperplane(vec3(1.0, 1.0, 1.0), 3.0))};
  const Vector start = vec3(1.0, 0.0, 0.0);
  const auto problem = make_problem(family, start);

  SolverConfig config;
  config.residual_tol = 1e-10;
  const auto result = crm_solve(problem, config);
  CHECK(result.trace.reason == TerminationReason::converged);
  CHECK(result.trace.iterations() == 1);

  const Vector target = oracle_intersection_projection(family, start);
  CHECK(testsupport::rel_err(result.solution, target) <= 1e-10);
}

TEST_CASE("with rep disabled the rank-tolerant circumcenter still converges") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 12; ++trial) {
    const Index n = 5;
    const Vector planted = testsupport::gaussian_vector(rng, n);
    const auto h1 = testsupport::random_subspace_through(rng, n, 1, planted);
    const auto h2 = testsupport::random_subspace_through(rng, n, 1, planted);
    const std::vector<AffineSubspace> family{h1, h2};

    Vector start = testsupport::gaussian_vector(rng, n, 2.0);
    if (trial % 3 == 0) {
      start = h1.project(start);  // degenerate against the first hyperplane
    } else if (trial % 3 == 1) {
      start = h1.reflect(h2.project(start));  // reflects onto the second
    }
    if (family[0].contains(start, 1e-12) && family[1].contains(start, 1e-12)) {
      continue;  // accidentally feasible, nothing to test
    }

    SolverConfig config;
    config.residual_tol = 1e-9;
    config.rep_enabled = false;
    config.max_iterations = 10;
    const auto result = solve(make_problem(family, start),
                              BlockPartition::full_block(2), config);
    CHECK(result.trace.reason == TerminationReason::converged);
    CHECK(result.trace.iterations() <= 3);
  }
}

TEST_CASE("full block of general subspaces takes the plain path") {
  std::mt19937_64 rng(74);
  const Index n = 10;
  const Vector planted = testsupport::gaussian_vector(rng, n);
  const std::vector<AffineSubspace> family{
      testsupport::random_subspace_through(rng, n, 3, planted),
      testsupport::random_subspace_through(rng, n, 2, planted)};
  const auto problem =
      make_problem(family, testsupport::gaussian_vector(rng, n, 2.0));
  SolverConfig config;
  config.residual_tol = 1e-10;
  config.max_iterations = 300;
  const auto result = crm_solve(problem, config);
  CHECK(result.trace.reason == TerminationReason::converged);
}

TEST_CASE("traced runs keep the target fixed and approach it monotonically") {
  std::mt19937_64 rng(75);
  const Index n = 12;
  const Vector planted = testsupport::gaussian_vector(rng, n);
  const auto family = testsupport::random_family_through(rng, n, 4, 2, planted);
  const auto problem =
      make_problem(family, testsupport::gaussian_vector(rng, n, 2.0));

  SolverConfig config;
  config.residual_tol = 1e-11;
  config.trace_oracle = true;
  config.max_iterations = 5000;
  const auto result = solve(problem, BlockPartition::by_size(4, 2), config);
  REQUIRE(result.trace.reason == TerminationReason::converged);
  REQUIRE(result.trace.has_errors());

  const Vector target = oracle_intersection_projection(family, problem.start);
  const double slack = 1e-10 * (1.0 + problem.start.norm());
  for (std::size_t k = 0; k + 1 < result.trace.records.size(); ++k) {
    const auto& cur = result.trace.records[k];
    const auto& next = result.trace.records[k + 1];
    CHECK(next.error.value() <= cur.error.value() + slack);
    CHECK(next.proj_count > cur.proj_count);
    const Vector moved = oracle_intersection_projection(family, cur.iterate);
    CHECK((moved - target).norm() <= 1e-9 * (1.0 + target.norm()));
  }
}

TEST_CASE("empirical rate is the geometric mean of error ratios") {
  IterationTrace trace;
  const std::vector<double> errors{1.0, 0.5, 0.25, 0.125};
  for (std::size_t k = 0; k < errors.size(); ++k) {
    IterationRecord rec;
    rec.iteration = static_cast<Index>(k);
    rec.iterate = Vector::Zero(2);
    rec.residual = errors[k];
    rec.error = errors[k];
    rec.proj_count = static_cast<std::int64_t>(k);
    trace.records.push_back(rec);
  }
  CHECK(fit_empirical_rate(trace) == doctest::Approx(0.5).epsilon(1e-12));

  IterationTrace short_trace;
  short_trace.records = {trace.records[0], trace.records[1]};
  CHECK_THROWS_AS(fit_empirical_rate(short_trace), InsufficientDataError);

  IterationTrace no_errors = trace;
  for (auto& rec : no_errors.records) {
    rec.error.reset();
  }
  CHECK_THROWS_AS(fit_empirical_rate(no_errors), InsufficientDataError);

  IterationTrace dead = trace;
  dead.records[2].error = 0.0;
  CHECK(fit_empirical_rate(dead) == 0.0);
}

TEST_CASE("empirical rate of alternating projections between tilted lines") {
  // Lines through the origin at 45 degrees: the per-sweep contraction is
  // exactly cos^2 = 1/2.
  const std::vector<AffineSubspace> lines{
      AffineSubspace(Hyperplane(vec2(1.0, -1.0), 0.0)),
      AffineSubspace(Hyperplane(vec2(0.0, 1.0), 0.0))};
  const auto problem = make_problem(lines, vec2(0.0, 1.0));
  SolverConfig config;
  config.residual_tol = 1e-300;
  config.max_iterations = 25;
  config.trace_oracle = true;
  const auto result = map_solve(problem, config);
  CHECK(fit_empirical_rate(result.trace) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("trace CSV layout") {
  const auto problem = make_problem(axes2(), vec2(1.0, 1.0));
  SolverConfig config;
  config.residual_tol = 1e-12;
  config.trace_oracle = true;
  const auto result = crm_solve(problem, config);

  std::ostringstream traced;
  write_trace_csv(result.trace, traced);
  std::istringstream lines(traced.str());
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "iter,residual,error,proj_count");
  REQUIRE(std::getline(lines, line));
  CHECK(line.substr(0, 2) == "0,");
  CHECK(line.find('e') != std::string::npos);

  SolverConfig plain = config;
  plain.trace_oracle = false;
  const auto bare = crm_solve(problem, plain);
  std::ostringstream untraced;
  write_trace_csv(bare.trace, untraced);
  CHECK(untraced.str().substr(0, untraced.str().find('\n')) ==
        "iter,residual,proj_count");
}
