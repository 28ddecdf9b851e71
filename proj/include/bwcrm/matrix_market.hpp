#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>

#include "bwcrm/errors.hpp"
#include "bwcrm/types.hpp"

namespace bwcrm {

// Parse or write failure; the message carries "name:line: detail" so the
// offending line can be found directly.
class MatrixMarketError : public Error {
 public:
  using Error::Error;
};

enum class MmFormat { coordinate, array };
enum class MmSymmetry { general, symmetric };

struct MatrixMarketInfo {
  MmFormat format = MmFormat::coordinate;
  MmSymmetry symmetry = MmSymmetry::general;
  Index rows = 0;
  Index cols = 0;
  // Stored entry count declared by the header: nonzeros for coordinate
  // files, dense (or lower-triangle) count for array files.
  Index declared_entries = 0;
};

/* Read a real Matrix Market file into a dense matrix.
 *
 * Supports the coordinate and array formats with general or symmetric
 * symmetry; the banner is matched case-insensitively and the field must
 * be real.  Coordinate indices are 1-based in the file and checked
 * against the declared shape, duplicate entries are summed, and symmetric
 * data is mirrored.  Comment and blank lines are skipped anywhere.  All
 * failures throw MatrixMarketError with the 1-based line number.
 */
std::pair<Matrix, MatrixMarketInfo> read_matrix_market(const std::filesystem::path& path);
std::pair<Matrix, MatrixMarketInfo> read_matrix_market(std::istream& in,
                                                       const std::string& name);

// Write a dense matrix in the array format (real, general) with full
// double precision, so that read back gives bitwise equal values.
void write_matrix_market_array(const Matrix& m, const std::filesystem::path& path);
void write_matrix_market_array(const Matrix& m, std::ostream& out);

}  // namespace bwcrm
