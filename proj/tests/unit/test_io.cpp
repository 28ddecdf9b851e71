#include <doctest.h>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bwcrm/matrix_market.hpp"
#include "bwcrm/problem.hpp"
#include "bwcrm/report.hpp"
#include "support/generators.hpp"

using namespace bwcrm;

namespace {

const std::string kDataDir = BWCRM_TEST_DATA_DIR;

std::pair<Matrix, MatrixMarketInfo> parse(const std::string& text) {
  std::istringstream in(text);
  return read_matrix_market(in, "inline");
}

std::string error_of(const std::string& text) {
  std::istringstream in(text);
  try {
    read_matrix_market(in, "inline");
  } catch (const MatrixMarketError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("coordinate general file parses into a dense matrix") {
  auto [m, info] = read_matrix_market(kDataDir + "/golden_general.mtx");
  CHECK(info.format == MmFormat::coordinate);
  CHECK(info.symmetry == MmSymmetry::general);
  CHECK(info.rows == 2);
  CHECK(info.cols == 2);
  CHECK(info.declared_entries == 2);
  Matrix want(2, 2);
  want << 3.0, 0.0, 0.0, 4.0;
  CHECK(m == want);
}

TEST_CASE("symmetric entries are mirrored") {
  auto [m, info] = read_matrix_market(kDataDir + "/golden_symmetric.mtx");
  CHECK(info.symmetry == MmSymmetry::symmetric);
  Matrix want(2, 2);
  want << 1.5, 5.0, 5.0, 0.0;
  CHECK(m == want);
}

TEST_CASE("array format fills column-major") {
  auto [m, info] = read_matrix_market(kDataDir + "/golden_array.mtx");
  CHECK(info.format == MmFormat::array);
  CHECK(info.declared_entries == 6);
  Matrix want(2, 3);
  want << 1.0, 3.0, 5.0, 2.0, 4.0, 6.0;
  CHECK(m == want);

  auto [sym, sym_info] = parse(
      "%%MatrixMarket matrix array real symmetric\n2 2\n1.0\n2.0\n3.0\n");
  CHECK(sym_info.declared_entries == 3);
  Matrix sym_want(2, 2);
  sym_want << 1.0, 2.0, 2.0, 3.0;
  CHECK(sym == sym_want);
}

TEST_CASE("banner is case-insensitive and duplicates are summed") {
  auto [m, info] = parse(
      "%%matrixmarket MATRIX Coordinate REAL General\n"
      "2 2 3\n1 1 1.0\n1 1 2.5\n2 1 -1.0\n");
  CHECK(info.rows == 2);
  CHECK(m(0, 0) == 3.5);
  CHECK(m(1, 0) == -1.0);
}

TEST_CASE("malformed files fail with the offending line number") {
  const std::string out_of_bounds = error_of(
      "%%MatrixMarket matrix coordinate real general\n2 2 2\n3 1 1.0\n2 2 4.0\n");
  CHECK(out_of_bounds.find("inline:3:") != std::string::npos);

  try {
    read_matrix_market(kDataDir + "/golden_malformed.mtx");
    FAIL("expected MatrixMarketError");
  } catch (const MatrixMarketError& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }

  CHECK(error_of("nonsense\n1 1 1\n").find(":1:") != std::string::npos);
  CHECK(error_of("%%MatrixMarket matrix coordinate complex general\n1 1 1\n")
            .find("complex") != std::string::npos);
  CHECK(error_of("%%MatrixMarket matrix coordinate real hermitian\n1 1 1\n")
            .find("hermitian") != std::string::npos);
  CHECK(error_of("%%MatrixMarket tensor coordinate real general\n")
            .find(":1:") != std::string::npos);

  // Truncated, trailing garbage, bad values, too many entries.
  CHECK(error_of("%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1.0\n")
            .find("truncated") != std::string::npos);
  CHECK(error_of("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1.0 9\n")
            .find("trailing") != std::string::npos);
  CHECK(error_of("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 x 1.0\n")
            .find(":3:") != std::string::npos);
  CHECK(error_of(
            "%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1.0\n1 1 2.0\n")
            .find("more entries") != std::string::npos);
  CHECK(error_of("%%MatrixMarket matrix array real general\n2 2\n1.0\nbad\n")
            .find(":4:") != std::string::npos);
  CHECK(error_of("%%MatrixMarket matrix array real symmetric\n2 3\n")
            .find("square") != std::string::npos);
  CHECK(error_of("").find("empty") != std::string::npos);
}

TEST_CASE("array writer round-trips bitwise") {
  std::mt19937_64 rng(91);
  const Matrix m = testsupport::gaussian_matrix(rng, 5, 4);
  std::ostringstream out;
  write_matrix_market_array(m, out);
  std::istringstream in(out.str());
  auto [back, info] = read_matrix_market(in, "roundtrip");
  CHECK(info.format == MmFormat::array);
  CHECK(back == m);
}

TEST_CASE("problem_from_rows plants one hyperplane per row") {
  Matrix eye(2, 2);
  eye << 1.0, 0.0, 0.0, 1.0;
  Vector rhs(2);
  rhs << 1.0, 2.0;
  const auto problem = problem_from_rows(eye, rhs, Vector::Zero(2));
  CHECK(problem.family_size() == 2);
  CHECK(problem.family[0].is_hyperplane());
  const Vector solution = oracle_intersection_projection(problem.family, problem.start);
  CHECK(solution.isApprox(rhs));

  Matrix with_zero(2, 2);
  with_zero << 1.0, 0.0, 0.0, 0.0;
  CHECK_THROWS_AS(problem_from_rows(with_zero, rhs, Vector::Zero(2)),
                  DegenerateInputError);

  // Conflicting parallel rows: every hyperplane is fine on its own but the
  // intersection is empty.
  Matrix parallel(2, 2);
  parallel << 1.0, 0.0, 2.0, 0.0;
  Vector conflict(2);
  conflict << 0.0, 2.0;
  CHECK_THROWS_AS(problem_from_rows(parallel, conflict, Vector::Zero(2)),
                  InconsistentSystemError);
}

TEST_CASE("synthetic systems are consistent and bitwise reproducible") {
  const auto a = synth_consistent_system(40, 25, 0.1, 12345);
  const auto b = synth_consistent_system(40, 25, 0.1, 12345);
  const auto c = synth_consistent_system(40, 25, 0.1, 54321);

  CHECK(a.family_size() == 40);
  CHECK(a.start == Vector::Zero(25));
  CHECK(a.name == "synth-40x25-d0.1-s12345");

  auto [ra, ba] = stacked_system(a.family);
  auto [rb, bb] = stacked_system(b.family);
  auto [rc, bc] = stacked_system(c.family);
  CHECK(ra == rb);
  CHECK(ba == bb);
  CHECK(ra != rc);

  // b = A x* by construction, so the oracle finds a feasible point.
  CHECK_NOTHROW(oracle_intersection_projection(a.family, a.start));

  CHECK_THROWS_AS(synth_consistent_system(4, 4, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(synth_consistent_system(4, 4, 1.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(synth_consistent_system(0, 4, 1.0, 1), std::invalid_argument);
}

TEST_CASE("benchmark table format") {
  std::vector<BenchmarkRow> rows(1);
  rows[0].method = "Bw-CRM-12 (CRM)";
  rows[0].blocks = 1;
  rows[0].proj_reflec = 12;
  rows[0].iterations = 1;
  rows[0].residual = 7.828e-14;
  rows[0].cpu_seconds = 1.2e-3;

  std::ostringstream out;
  write_benchmark_table(rows, out);
  CHECK(out.str() ==
        "method,blocks,proj_reflec,iter,residual,cpu_seconds\n"
        "Bw-CRM-12 (CRM),1,12,1,7.8280e-14,1.2000e-03\n");

  std::ostringstream empty;
  write_benchmark_table(std::vector<BenchmarkRow>{}, empty);
  CHECK(empty.str() == "method,blocks,proj_reflec,iter,residual,cpu_seconds\n");
}

TEST_CASE("trimmed scientific formatting") {
  CHECK(format_scientific(0.70711) == "7.0711e-1");
  CHECK(format_scientific(0.0) == "0.0000e0");
  CHECK(format_scientific(7.828e-14) == "7.8280e-14");
  CHECK(format_scientific(-0.5) == "-5.0000e-1");
  CHECK(format_scientific(123456.0) == "1.2346e5");
  CHECK(format_scientific(1.0, 1) == "1.0e0");
  CHECK_THROWS_AS(format_scientific(1.0, -1), std::invalid_argument);
}

TEST_CASE("near-square grids") {
  CHECK(near_square_grid(250) == std::pair<Index, Index>{25, 10});
  CHECK(near_square_grid(12) == std::pair<Index, Index>{4, 3});
  CHECK(near_square_grid(16) == std::pair<Index, Index>{4, 4});
  CHECK(near_square_grid(7) == std::pair<Index, Index>{7, 1});
  CHECK(near_square_grid(1) == std::pair<Index, Index>{1, 1});
  CHECK_THROWS_AS(near_square_grid(0), std::invalid_argument);
}

TEST_CASE("pgm snapshots are min-max normalized") {
  Vector v(4);
  v << 0.0, 1.0, 2.0, 3.0;
  std::ostringstream out(std::ios::binary);
  write_pgm(v, 2, 2, out);
  const std::string want = std::string("P5\n2 2\n255\n") +
                           '\x00' + '\x55' + '\xAA' + '\xFF';
  CHECK(out.str() == want);

  std::ostringstream flat(std::ios::binary);
  write_pgm(Vector::Ones(4), 4, 1, flat);
  CHECK(flat.str().substr(flat.str().size() - 4) ==
        std::string(4, '\x7F'));

  CHECK_THROWS_AS(write_pgm(v, 3, 2, out), std::invalid_argument);
}
