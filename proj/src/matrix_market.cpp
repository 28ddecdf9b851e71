#include "bwcrm/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace bwcrm {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void fail(const std::string& name, long line, const std::string& what) {
  std::ostringstream msg;
  msg << name << ":" << line << ": " << what;
  throw MatrixMarketError(msg.str());
}

bool blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '%') {
      return true;
    }
    if (!std::isspace(static_cast<unsigned char>(c))) {
      return false;
    }
  }
  return true;
}

struct LineReader {
  std::istream& in;
  const std::string& name;
  long line_no = 0;

  // Next line with content, skipping comments and blank lines.
  bool next(std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      if (!blank_or_comment(out)) {
        return true;
      }
    }
    return false;
  }
};

Index parse_extent(LineReader& reader, std::istringstream& in, const char* what) {
  long long v = 0;
  if (!(in >> v) || v < 0) {
    fail(reader.name, reader.line_no, std::string("invalid ") + what + " in size line");
  }
  return static_cast<Index>(v);
}

}  // namespace

std::pair<Matrix, MatrixMarketInfo> read_matrix_market(std::istream& in,
                                                       const std::string& name) {
  LineReader reader{in, name};

  std::string line;
  if (!std::getline(in, line)) {
    fail(name, 1, "empty file");
  }
  reader.line_no = 1;
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (lower(tag) != "%%matrixmarket") {
    fail(name, 1, "missing %%MatrixMarket banner");
  }
  if (lower(object) != "matrix") {
    fail(name, 1, "unsupported object '" + object + "'");
  }

  MatrixMarketInfo info;
  const std::string fmt = lower(format);
  if (fmt == "coordinate") {
    info.format = MmFormat::coordinate;
  } else if (fmt == "array") {
    info.format = MmFormat::array;
  } else {
    fail(name, 1, "unsupported format '" + format + "'");
  }
  if (lower(field) != "real") {
    fail(name, 1, "unsupported field '" + field + "', only real is handled");
  }
  const std::string sym = lower(symmetry);
  if (sym == "general") {
    info.symmetry = MmSymmetry::general;
  } else if (sym == "symmetric") {
    info.symmetry = MmSymmetry::symmetric;
  } else {
    fail(name, 1, "unsupported symmetry '" + symmetry + "'");
  }

  if (!reader.next(line)) {
    fail(name, reader.line_no + 1, "missing size line");
  }
  std::istringstream size_line(line);
  info.rows = parse_extent(reader, size_line, "row count");
  info.cols = parse_extent(reader, size_line, "column count");
  if (info.format == MmFormat::coordinate) {
    info.declared_entries = parse_extent(reader, size_line, "entry count");
  } else if (info.symmetry == MmSymmetry::symmetric) {
    if (info.rows != info.cols) {
      fail(name, reader.line_no, "symmetric array matrix must be square");
    }
    info.declared_entries = info.rows * (info.rows + 1) / 2;
  } else {
    info.declared_entries = info.rows * info.cols;
  }
  std::string trailing;
  if (size_line >> trailing) {
    fail(name, reader.line_no, "trailing token '" + trailing + "' in size line");
  }

  Matrix m = Matrix::Zero(info.rows, info.cols);

  if (info.format == MmFormat::coordinate) {
    Index seen = 0;
    while (reader.next(line)) {
      if (seen == info.declared_entries) {
        fail(name, reader.line_no, "more entries than declared");
      }
      std::istringstream entry(line);
      long long i = 0, j = 0;
      double v = 0.0;
      if (!(entry >> i >> j >> v)) {
        fail(name, reader.line_no, "expected 'row col value'");
      }
      if (entry >> trailing) {
        fail(name, reader.line_no, "trailing token '" + trailing + "'");
      }
      if (i < 1 || i > info.rows || j < 1 || j > info.cols) {
        std::ostringstream what;
        what << "index (" << i << ", " << j << ") outside " << info.rows << "x"
             << info.cols;
        fail(name, reader.line_no, what.str());
      }
      m(i - 1, j - 1) += v;
      if (info.symmetry == MmSymmetry::symmetric && i != j) {
        m(j - 1, i - 1) += v;
      }
      ++seen;
    }
    if (seen != info.declared_entries) {
      std::ostringstream what;
      what << "truncated data: declared " << info.declared_entries
           << " entries, found " << seen;
      fail(name, reader.line_no, what.str());
    }
  } else {
    // Array data runs down the columns; symmetric files store the lower
    // triangle only.  Values may share a line.
    Index r = 0;
    Index c = 0;
    if (info.symmetry == MmSymmetry::symmetric) {
      r = c;  // starts at the diagonal of column 0
    }
    Index seen = 0;
    const auto store = [&](double v) {
      m(r, c) = v;
      if (info.symmetry == MmSymmetry::symmetric && r != c) {
        m(c, r) = v;
      }
      if (++r == info.rows) {
        ++c;
        r = info.symmetry == MmSymmetry::symmetric ? c : 0;
      }
    };
    while (reader.next(line)) {
      std::istringstream values(line);
      double v = 0.0;
      bool got = false;
      while (values >> v) {
        got = true;
        if (seen == info.declared_entries) {
          fail(name, reader.line_no, "more values than declared");
        }
        store(v);
        ++seen;
      }
      if (!got || !values.eof()) {
        fail(name, reader.line_no, "invalid value");
      }
    }
    if (seen != info.declared_entries) {
      std::ostringstream what;
      what << "truncated data: declared " << info.declared_entries
           << " values, found " << seen;
      fail(name, reader.line_no, what.str());
    }
  }
  return {std::move(m), info};
}

std::pair<Matrix, MatrixMarketInfo> read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw MatrixMarketError(path.string() + ":0: cannot open file");
  }
  return read_matrix_market(in, path.string());
}

void write_matrix_market_array(const Matrix& m, std::ostream& out) {
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << " " << m.cols() << "\n";
  char buf[64];
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << buf << '\n';
    }
  }
}

void write_matrix_market_array(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw MatrixMarketError(path.string() + ":0: cannot open file for writing");
  }
  write_matrix_market_array(m, out);
  out.flush();
  if (!out) {
    throw MatrixMarketError(path.string() + ":0: write failed");
  }
}

}  // namespace bwcrm
