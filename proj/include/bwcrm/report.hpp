#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bwcrm/types.hpp"

namespace bwcrm {

// One line of a method comparison table.
struct BenchmarkRow {
  std::string method;
  Index blocks = 0;
  std::int64_t proj_reflec = 0;
  Index iterations = 0;
  double residual = 0.0;
  double cpu_seconds = 0.0;
};

// CSV with header method,blocks,proj_reflec,iter,residual,cpu_seconds;
// residuals carry five significant digits (e.g. 7.8280e-14).
void write_benchmark_table(std::span<const BenchmarkRow> rows, std::ostream& out);
void write_benchmark_table(std::span<const BenchmarkRow> rows,
                           const std::filesystem::path& path);

// Scientific notation with `digits` fractional digits and the exponent
// stripped of padding: 0.70711 -> "7.0711e-1", 0 -> "0.0000e0".
std::string format_scientific(double value, int digits = 4);

// Width x height factorization of n with the smallest aspect gap, width
// >= height; used to lay a flat vector out as an image.
std::pair<Index, Index> near_square_grid(Index n);

/* 8-bit binary PGM (P5) snapshot of a vector reshaped row-major to
 * width x height.  Values are min-max normalized to 0..255; a constant
 * vector comes out mid-gray.
 */
void write_pgm(const Vector& values, Index width, Index height,
               const std::filesystem::path& path);
void write_pgm(const Vector& values, Index width, Index height, std::ostream& out);

}  // namespace bwcrm
