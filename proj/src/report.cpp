#include "bwcrm/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "bwcrm/errors.hpp"

namespace bwcrm {

void write_benchmark_table(std::span<const BenchmarkRow> rows, std::ostream& out) {
  out << "method,blocks,proj_reflec,iter,residual,cpu_seconds\n";
  char buf[64];
  for (const BenchmarkRow& row : rows) {
    out << row.method << ',' << row.blocks << ',' << row.proj_reflec << ','
        << row.iterations << ',';
    std::snprintf(buf, sizeof(buf), "%.4e", row.residual);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.4e", row.cpu_seconds);
    out << buf << '\n';
  }
}

void write_benchmark_table(std::span<const BenchmarkRow> rows,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error("write_benchmark_table: cannot open " + path.string());
  }
  write_benchmark_table(rows, out);
  out.flush();
  if (!out) {
    throw Error("write_benchmark_table: write failed for " + path.string());
  }
}

std::string format_scientific(double value, int digits) {
  if (digits < 0 || digits > 17) {
    throw std::invalid_argument("format_scientific: digits out of range");
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*e", digits, value);
  std::string s(buf);
  // Strip the exponent sign padding: "e-01" -> "e-1", "e+00" -> "e0".
  const std::size_t e = s.find('e');
  std::string mantissa = s.substr(0, e);
  std::string exponent = s.substr(e + 1);
  bool negative = false;
  if (!exponent.empty() && (exponent[0] == '+' || exponent[0] == '-')) {
    negative = exponent[0] == '-';
    exponent.erase(0, 1);
  }
  std::size_t first = exponent.find_first_not_of('0');
  exponent = first == std::string::npos ? "0" : exponent.substr(first);
  return mantissa + "e" + (negative ? "-" : "") + exponent;
}

std::pair<Index, Index> near_square_grid(Index n) {
  if (n < 1) {
    throw std::invalid_argument("near_square_grid: n must be positive");
  }
  for (Index h = static_cast<Index>(std::sqrt(static_cast<double>(n))); h >= 1; --h) {
    if (n % h == 0) {
      return {n / h, h};
    }
  }
  return {n, 1};
}

void write_pgm(const Vector& values, Index width, Index height, std::ostream& out) {
  if (width < 1 || height < 1 || width * height != values.size()) {
    throw std::invalid_argument("write_pgm: grid does not match the vector length");
  }
  if (!values.allFinite()) {
    throw NonFiniteError("write_pgm: non-finite values");
  }
  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  const double span = hi - lo;

  out << "P5\n" << width << " " << height << "\n255\n";
  std::string raster(static_cast<std::size_t>(values.size()), '\0');
  for (Index i = 0; i < values.size(); ++i) {
    const double g = span > 0.0 ? 255.0 * (values(i) - lo) / span : 127.0;
    raster[static_cast<std::size_t>(i)] =
        static_cast<char>(static_cast<unsigned char>(std::lround(g)));
  }
  out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
}

void write_pgm(const Vector& values, Index width, Index height,
               const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("write_pgm: cannot open " + path.string());
  }
  write_pgm(values, width, height, out);
  out.flush();
  if (!out) {
    throw Error("write_pgm: write failed for " + path.string());
  }
}

}  // namespace bwcrm
