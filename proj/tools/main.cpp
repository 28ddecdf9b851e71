// bwcrm: best approximation onto intersections of affine subspaces by
// block-wise circumcentered reflections.
//
// Exit codes: 0 success (solver converged), 1 input or usage error,
// 2 iteration budget exhausted.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bwcrm/bwcrm.hpp"

namespace {

using bwcrm::Index;
using bwcrm::Matrix;
using bwcrm::Vector;

struct SourceOptions {
  std::string matrix_path;
  std::string synth_shape;
  Index rows = -1;  // -1: all rows
  std::string rhs_path;
  std::string start_path;
  double density = 1.0;
  std::uint64_t seed = 1;
};

void add_source_options(CLI::App* cmd, SourceOptions& o) {
  auto* matrix = cmd->add_option("--matrix", o.matrix_path,
                                 "Matrix Market file providing the rows");
  auto* synth = cmd->add_option("--synth", o.synth_shape,
                                "synthetic consistent system, e.g. 12x27");
  matrix->excludes(synth);
  synth->excludes(matrix);
  cmd->add_option("--rows", o.rows, "use only the first K rows");
  cmd->add_option("--rhs", o.rhs_path,
                  "right-hand side file (whitespace separated; default: ones)")
      ->needs(matrix);
  cmd->add_option("--start", o.start_path,
                  "start point file (default: zeros)");
  cmd->add_option("--density", o.density, "synthetic fill-in probability")
      ->needs(synth);
  cmd->add_option("--seed", o.seed, "synthetic generator seed")->needs(synth);
}

Vector read_vector_file(const std::string& path, Index expected) {
  std::ifstream in(path);
  if (!in) {
    throw bwcrm::Error("cannot open " + path);
  }
  std::vector<double> values;
  double v = 0.0;
  while (in >> v) {
    values.push_back(v);
  }
  if (!in.eof()) {
    throw bwcrm::Error(path + ": invalid number");
  }
  if (static_cast<Index>(values.size()) != expected) {
    std::ostringstream msg;
    msg << path << ": expected " << expected << " values, found " << values.size();
    throw bwcrm::Error(msg.str());
  }
  return Eigen::Map<const Vector>(values.data(), expected);
}

std::pair<Index, Index> parse_shape(const std::string& text) {
  const std::size_t x = text.find_first_of("xX");
  if (x == std::string::npos) {
    throw std::invalid_argument("--synth expects PxN, e.g. 12x27");
  }
  try {
    const long long p = std::stoll(text.substr(0, x));
    const long long n = std::stoll(text.substr(x + 1));
    return {static_cast<Index>(p), static_cast<Index>(n)};
  } catch (const std::exception&) {
    throw std::invalid_argument("--synth expects PxN, e.g. 12x27");
  }
}

bwcrm::Problem load_problem(const SourceOptions& o) {
  if (o.matrix_path.empty() == o.synth_shape.empty()) {
    throw std::invalid_argument("exactly one of --matrix or --synth is required");
  }

  bwcrm::Problem problem;
  if (!o.synth_shape.empty()) {
    auto [p, n] = parse_shape(o.synth_shape);
    problem = bwcrm::synth_consistent_system(p, n, o.density, o.seed);
    if (o.rows >= 0) {
      if (o.rows < 1 || o.rows > problem.family_size()) {
        throw std::invalid_argument("--rows out of range");
      }
      problem.family.erase(problem.family.begin() + o.rows, problem.family.end());
    }
  } else {
    auto [m, info] = bwcrm::read_matrix_market(o.matrix_path);
    Index k = o.rows >= 0 ? o.rows : m.rows();
    if (k < 1 || k > m.rows()) {
      throw std::invalid_argument("--rows out of range");
    }
    const Matrix rows = m.topRows(k);
    const Vector rhs = o.rhs_path.empty() ? Vector(Vector::Ones(k))
                                          : read_vector_file(o.rhs_path, k);
    problem = bwcrm::problem_from_rows(
        rows, rhs, Vector::Zero(m.cols()),
        std::filesystem::path(o.matrix_path).stem().string());
  }
  if (!o.start_path.empty()) {
    problem.start = read_vector_file(o.start_path, problem.dimension());
  }
  return problem;
}

std::vector<Index> parse_sizes(const std::string& list, Index m) {
  std::vector<Index> sizes;
  std::string token;
  std::istringstream in(list);
  while (std::getline(in, token, ',')) {
    const std::size_t a = token.find_first_not_of(" \t");
    if (a == std::string::npos) {
      continue;
    }
    token = token.substr(a, token.find_last_not_of(" \t") - a + 1);
    if (token == "full") {
      sizes.push_back(m);
      continue;
    }
    try {
      sizes.push_back(static_cast<Index>(std::stoll(token)));
    } catch (const std::exception&) {
      throw std::invalid_argument("--sizes: cannot parse '" + token + "'");
    }
    if (sizes.back() < 1) {
      throw std::invalid_argument("--sizes: block sizes must be positive");
    }
  }
  return sizes;
}

// A single block size token: a positive integer or 'full'.
Index parse_block_size(const std::string& token, Index m) {
  if (token == "full") {
    return m;
  }
  Index q = 0;
  try {
    q = static_cast<Index>(std::stoll(token));
  } catch (const std::exception&) {
    throw std::invalid_argument("--block-size: cannot parse '" + token + "'");
  }
  if (q < 1) {
    throw std::invalid_argument("--block-size: must be positive or 'full'");
  }
  return q;
}

bwcrm::BlockPartition make_partition(Index m, Index blocks,
                                     const std::string& boundaries_path) {
  if (!boundaries_path.empty()) {
    std::ifstream in(boundaries_path);
    if (!in) {
      throw bwcrm::Error("cannot open " + boundaries_path);
    }
    std::vector<Index> bounds{0};
    long long q = 0;
    while (in >> q) {
      bounds.push_back(static_cast<Index>(q));
    }
    if (!in.eof()) {
      throw bwcrm::Error(boundaries_path + ": invalid boundary");
    }
    if (bounds.size() < 2 || bounds.back() != m) {
      throw std::invalid_argument("boundaries must end at the family size");
    }
    return bwcrm::BlockPartition(std::move(bounds));
  }
  return bwcrm::BlockPartition::by_size(m, blocks <= 0 ? m : blocks);
}

std::string method_label(Index q, Index m) {
  std::ostringstream label;
  label << "Bw-CRM-" << std::min(q, m);
  if (q == 1 && m > 1) {
    label << " (MAP)";
  } else if (q >= m) {
    label << " (CRM)";
  }
  return label.str();
}

bwcrm::BenchmarkRow run_row(const bwcrm::Problem& problem, Index q,
                            const bwcrm::SolverConfig& config) {
  const Index m = problem.family_size();
  const auto result =
      bwcrm::solve(problem, bwcrm::BlockPartition::by_size(m, q), config);
  const auto& last = result.trace.final_record();
  bwcrm::BenchmarkRow row;
  row.method = method_label(q, m);
  row.blocks = bwcrm::BlockPartition::by_size(m, q).block_count();
  row.proj_reflec = last.proj_count;
  row.iterations = last.iteration;
  row.residual = last.residual;
  row.cpu_seconds = result.trace.solve_seconds;
  return row;
}

struct SolveOptions {
  SourceOptions source;
  std::string block_size = "full";
  std::string boundaries_path;
  double tol = 1e-5;
  Index max_iter = 100000;
  bool no_rep = false;
  std::string trace_path;
  bool trace_oracle = false;
};

int cmd_solve(const SolveOptions& o) {
  bwcrm::Problem problem = load_problem(o.source);
  bwcrm::SolverConfig config;
  config.residual_tol = o.tol;
  config.max_iterations = o.max_iter;
  config.rep_enabled = !o.no_rep;
  config.trace_oracle = o.trace_oracle;

  const auto partition = make_partition(
      problem.family_size(),
      parse_block_size(o.block_size, problem.family_size()),
      o.boundaries_path);
  const auto result = bwcrm::solve(problem, partition, config);
  if (!o.trace_path.empty()) {
    bwcrm::write_trace_csv(result.trace, std::filesystem::path(o.trace_path));
  }

  const auto& last = result.trace.final_record();
  const Index q = partition.block_size(0);
  std::cout << "method=" << method_label(q, problem.family_size())
            << " blocks=" << partition.block_count()
            << " iter=" << last.iteration
            << " proj_reflec=" << last.proj_count
            << " residual=" << bwcrm::format_scientific(last.residual)
            << " seconds=" << bwcrm::format_scientific(result.trace.solve_seconds, 3)
            << " status="
            << (result.trace.reason == bwcrm::TerminationReason::converged
                    ? "converged"
                    : "budget_exhausted")
            << "\n";
  return result.trace.reason == bwcrm::TerminationReason::converged ? 0 : 2;
}

struct BenchOptions {
  SourceOptions source;
  std::string sizes = "1,full";
  double tol = 1e-5;
  Index max_iter = 100000;
  bool no_rep = false;
  std::string output;
};

int cmd_bench(const BenchOptions& o) {
  bwcrm::Problem problem = load_problem(o.source);
  bwcrm::SolverConfig config;
  config.residual_tol = o.tol;
  config.max_iterations = o.max_iter;
  config.rep_enabled = !o.no_rep;

  std::vector<bwcrm::BenchmarkRow> rows;
  for (Index q : parse_sizes(o.sizes, problem.family_size())) {
    rows.push_back(run_row(problem, q, config));
    std::cerr << rows.back().method << ": iter=" << rows.back().iterations
              << " residual=" << bwcrm::format_scientific(rows.back().residual)
              << "\n";
  }
  if (o.output.empty() || o.output == "-") {
    bwcrm::write_benchmark_table(rows, std::cout);
  } else {
    bwcrm::write_benchmark_table(rows, std::filesystem::path(o.output));
  }
  return 0;
}

struct AnglesOptions {
  SourceOptions source;
  std::string block_size = "1";
};

int cmd_angles(const AnglesOptions& o) {
  bwcrm::Problem problem = load_problem(o.source);
  const auto partition = bwcrm::BlockPartition::by_size(
      problem.family_size(),
      parse_block_size(o.block_size, problem.family_size()));

  // Replace each block by the affine subspace it intersects to.
  std::vector<bwcrm::AffineSubspace> sets;
  for (Index i = 0; i < partition.block_count(); ++i) {
    auto [begin, end] = partition.block_range(i);
    const std::span<const bwcrm::AffineSubspace> members(
        problem.family.data() + begin, static_cast<std::size_t>(end - begin));
    auto [rows, rhs] = bwcrm::stacked_system(members);
    sets.emplace_back(rows, rhs);
  }

  std::vector<double> cosines;
  for (std::size_t i = 0; i + 1 < sets.size(); ++i) {
    cosines.push_back(bwcrm::friedrichs_cosine(sets[i], sets[i + 1]));
    std::cout << i + 1 << " " << i + 2 << " "
              << bwcrm::format_scientific(cosines.back()) << "\n";
  }
  if (!cosines.empty()) {
    std::cout << "# chained rate bound (heuristic): "
              << bwcrm::format_scientific(bwcrm::chained_rate_bound(cosines))
              << "\n";
  }
  return 0;
}

struct PhantomOptions {
  Index rows = 600;
  Index cols = 250;
  double density = 0.02;
  std::uint64_t seed = 42;
  Index budget = 10;
  std::string sizes = "1,16,64";
  std::string output_dir = ".";
};

int cmd_phantom(const PhantomOptions& o) {
  const auto problem =
      bwcrm::synth_consistent_system(o.rows, o.cols, o.density, o.seed);
  bwcrm::SolverConfig config;
  // Budget-driven: the tolerance is unreachable on purpose.
  config.residual_tol = std::numeric_limits<double>::min();
  config.max_iterations = o.budget;

  const std::filesystem::path dir(o.output_dir);
  std::filesystem::create_directories(dir);
  const auto [width, height] = bwcrm::near_square_grid(o.cols);

  std::vector<bwcrm::BenchmarkRow> rows;
  for (Index q : parse_sizes(o.sizes, problem.family_size())) {
    const auto result = bwcrm::solve(
        problem, bwcrm::partition_by_size(problem.family, q), config);
    const auto& last = result.trace.final_record();
    bwcrm::BenchmarkRow row;
    row.method = method_label(q, problem.family_size());
    row.blocks = bwcrm::partition_by_size(problem.family, q).block_count();
    row.proj_reflec = last.proj_count;
    row.iterations = last.iteration;
    row.residual = last.residual;
    row.cpu_seconds = result.trace.solve_seconds;
    rows.push_back(row);

    std::ostringstream image;
    image << "phantom_q" << q << ".pgm";
    bwcrm::write_pgm(result.solution, width, height, dir / image.str());
    std::cerr << row.method << ": residual="
              << bwcrm::format_scientific(row.residual) << "\n";
  }
  bwcrm::write_benchmark_table(rows, dir / "phantom_residuals.csv");
  bwcrm::write_benchmark_table(rows, std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"block-wise circumcentered-reflection solvers for affine "
               "best approximation problems"};
  app.require_subcommand(1);

  SolveOptions solve_opts;
  auto* solve = app.add_subcommand("solve", "run one solve and report the outcome");
  add_source_options(solve, solve_opts.source);
  solve->add_option("--block-size", solve_opts.block_size,
                    "block size, a positive integer or 'full' (default)");
  solve->add_option("--boundaries", solve_opts.boundaries_path,
                    "file with explicit block boundaries q1 < ... < m");
  solve->add_option("--tol", solve_opts.tol, "residual tolerance");
  solve->add_option("--max-iter", solve_opts.max_iter, "sweep budget");
  solve->add_flag("--no-rep", solve_opts.no_rep,
                  "disable degenerate-start replacement");
  solve->add_option("--trace", solve_opts.trace_path, "write per-iteration CSV");
  solve->add_flag("--trace-oracle", solve_opts.trace_oracle,
                  "add the distance-to-solution column (extra exact solve)");

  BenchOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "compare block sizes on one problem");
  add_source_options(bench, bench_opts.source);
  bench->add_option("--sizes", bench_opts.sizes,
                    "comma list of block sizes; 'full' is the family size");
  bench->add_option("--tol", bench_opts.tol, "residual tolerance");
  bench->add_option("--max-iter", bench_opts.max_iter, "sweep budget per size");
  bench->add_flag("--no-rep", bench_opts.no_rep,
                  "disable degenerate-start replacement");
  bench->add_option("--output", bench_opts.output, "CSV path (default stdout)");

  AnglesOptions angles_opts;
  auto* angles = app.add_subcommand(
      "angles", "Friedrichs angle cosines between consecutive block intersections");
  add_source_options(angles, angles_opts.source);
  angles->add_option("--block-size", angles_opts.block_size,
                     "block size, a positive integer or 'full' (default 1)");

  PhantomOptions phantom_opts;
  auto* phantom = app.add_subcommand(
      "phantom", "budget-limited reconstruction of a synthetic sparse system");
  phantom->add_option("--rows", phantom_opts.rows, "row count");
  phantom->add_option("--cols", phantom_opts.cols, "column count");
  phantom->add_option("--density", phantom_opts.density, "fill-in probability");
  phantom->add_option("--seed", phantom_opts.seed, "generator seed");
  phantom->add_option("--budget", phantom_opts.budget, "sweeps per block size");
  phantom->add_option("--sizes", phantom_opts.sizes, "comma list of block sizes");
  phantom->add_option("--output-dir", phantom_opts.output_dir,
                      "where the table and images go");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (solve->parsed()) {
      return cmd_solve(solve_opts);
    }
    if (bench->parsed()) {
      return cmd_bench(bench_opts);
    }
    if (angles->parsed()) {
      return cmd_angles(angles_opts);
    }
    return cmd_phantom(phantom_opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const bwcrm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
