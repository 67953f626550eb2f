#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "arimpute/dataset.hpp"

namespace arimpute {

inline constexpr std::string_view kMissingOutputToken = "?";

struct CsvOptions {
  // Raw cell texts read as missing.
  std::vector<std::string> missing_tokens{"?", ""};
  std::string sentinel = std::string(kDefaultSentinel);
};

namespace detail {

inline std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace detail

/// Parse a headed, comma-separated table without quoting. Commas always
/// separate cells, so a token can never contain one.
inline Dataset read_csv(std::istream& in, const CsvOptions& opts = {}) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (lines.empty()) throw ParseError("missing header line", 1);

  std::vector<std::string> names = detail::split_commas(lines.front());
  std::vector<Row> rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto fields = detail::split_commas(lines[i]);
    if (fields.size() != names.size())
      throw ParseError("record has " + std::to_string(fields.size()) + " fields, header has " +
                           std::to_string(names.size()),
                       i + 1);
    Row row;
    row.reserve(fields.size());
    for (auto& f : fields) {
      const bool missing =
          std::find(opts.missing_tokens.begin(), opts.missing_tokens.end(), f) !=
          opts.missing_tokens.end();
      if (missing) {
        row.emplace_back(std::nullopt);
      } else if (f == opts.sentinel) {
        throw CollisionError("line " + std::to_string(i + 1) + ": token '" + f +
                             "' collides with the missing-value sentinel");
      } else {
        row.emplace_back(std::move(f));
      }
    }
    rows.push_back(std::move(row));
  }
  return Dataset(std::move(names), std::move(rows), opts.sentinel, false);
}

inline Dataset parse_csv(const std::string& text, const CsvOptions& opts = {}) {
  std::istringstream in(text);
  return read_csv(in, opts);
}

inline Dataset load_csv(const std::string& path, const CsvOptions& opts = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_csv(in, opts);
}

/// Write header plus one line per row. Absent cells (missing, or the sentinel
/// in a coded dataset) are written as "?".
inline void write_csv(const Dataset& data, std::ostream& out) {
  const auto check = [](const std::string& token) {
    if (token.find_first_of(",\r\n") != std::string::npos || token == kMissingOutputToken)
      throw ArgumentError("token '" + token + "' cannot be written as CSV");
  };
  const auto& names = data.names();
  for (std::size_t a = 0; a < names.size(); ++a) {
    check(names[a]);
    out << (a ? "," : "") << names[a];
  }
  out << '\n';
  for (std::size_t r = 0; r < data.row_count(); ++r) {
    for (std::size_t a = 0; a < data.attribute_count(); ++a) {
      if (a) out << ',';
      if (data.is_absent(r, a)) {
        out << kMissingOutputToken;
      } else {
        check(*data.cell(r, a));
        out << *data.cell(r, a);
      }
    }
    out << '\n';
  }
}

inline std::string to_csv(const Dataset& data) {
  std::ostringstream out;
  write_csv(data, out);
  return out.str();
}

inline void save_csv(const Dataset& data, const std::string& path) {
  const std::string text = to_csv(data);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace arimpute
