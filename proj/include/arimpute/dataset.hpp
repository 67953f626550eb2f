#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "arimpute/error.hpp"
#include "arimpute/random.hpp"
#include "arimpute/rational.hpp"

namespace arimpute {

inline constexpr std::string_view kDefaultSentinel = "MISSING";

// A categorical cell: an observed token, or std::nullopt for a missing value.
using Cell = std::optional<std::string>;
using Row = std::vector<Cell>;

struct Position {
  std::size_t row = 0;
  std::size_t attr = 0;

  friend auto operator<=>(const Position&, const Position&) = default;
};

struct AttributeSchema {
  std::vector<std::string> names;
  // Distinct observed tokens per attribute, sorted. Includes the sentinel
  // only for sentinel-coded datasets.
  std::vector<std::set<std::string>> domains;

  std::size_t size() const noexcept { return names.size(); }

  std::optional<std::size_t> index_of(std::string_view name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
  }
};

/// Rectangular table of categorical cells over a named schema.
///
/// A dataset is in one of two states. A *raw* dataset may hold missing cells
/// and no observed token may equal the sentinel. A *sentinel-coded* dataset
/// (see encode_missing) holds no missing cells; absence is represented by an
/// observed sentinel token that the miners treat as an ordinary value.
///
/// Datasets are immutable once built; the schema domains are derived from the
/// rows.
class Dataset {
 public:
  Dataset() = default;

  Dataset(std::vector<std::string> names, std::vector<Row> rows,
          std::string sentinel = std::string(kDefaultSentinel),
          bool sentinel_coded = false)
      : rows_(std::move(rows)), sentinel_(std::move(sentinel)), coded_(sentinel_coded) {
    schema_.names = std::move(names);
    validate();
  }

  const AttributeSchema& schema() const noexcept { return schema_; }
  const std::vector<std::string>& names() const noexcept { return schema_.names; }
  const std::vector<Row>& rows() const noexcept { return rows_; }
  std::span<const Cell> row(std::size_t r) const { return rows_.at(r); }
  const Cell& cell(std::size_t r, std::size_t a) const { return rows_.at(r).at(a); }
  const Cell& cell(Position p) const { return cell(p.row, p.attr); }
  const std::string& sentinel() const noexcept { return sentinel_; }
  bool sentinel_coded() const noexcept { return coded_; }

  std::size_t row_count() const noexcept { return rows_.size(); }
  std::size_t attribute_count() const noexcept { return schema_.size(); }
  std::size_t cell_count() const noexcept { return row_count() * attribute_count(); }

  // Cells that are missing, or hold the sentinel in a coded dataset.
  bool is_absent(std::size_t r, std::size_t a) const {
    const Cell& c = cell(r, a);
    return !c || (coded_ && *c == sentinel_);
  }

  std::size_t absent_count() const {
    std::size_t n = 0;
    for (std::size_t r = 0; r < row_count(); ++r)
      for (std::size_t a = 0; a < attribute_count(); ++a) n += is_absent(r, a);
    return n;
  }

  // Row-major list of absent positions.
  std::vector<Position> absent_positions() const {
    std::vector<Position> out;
    for (std::size_t r = 0; r < row_count(); ++r)
      for (std::size_t a = 0; a < attribute_count(); ++a)
        if (is_absent(r, a)) out.push_back({r, a});
    return out;
  }

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.schema_.names == b.schema_.names && a.rows_ == b.rows_ &&
           a.sentinel_ == b.sentinel_ && a.coded_ == b.coded_;
  }

 private:
  void validate() {
    const auto& names = schema_.names;
    std::unordered_set<std::string> seen;
    for (const auto& n : names) {
      if (n.empty()) throw SchemaError("empty attribute name");
      if (!seen.insert(n).second) throw SchemaError("duplicate attribute name '" + n + "'");
    }
    if (sentinel_.empty()) throw ArgumentError("sentinel token must be non-empty");

    schema_.domains.assign(names.size(), {});
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const Row& row = rows_[r];
      if (row.size() != names.size())
        throw SchemaError("row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                          " cells, expected " + std::to_string(names.size()));
      for (std::size_t a = 0; a < row.size(); ++a) {
        const Cell& c = row[a];
        if (!c) {
          if (coded_)
            throw PreconditionError("sentinel-coded dataset contains a missing cell");
          continue;
        }
        if (c->empty()) throw SchemaError("empty token at row " + std::to_string(r));
        if (!coded_ && *c == sentinel_)
          throw CollisionError("observed token '" + *c + "' at row " + std::to_string(r) +
                               ", attribute '" + names[a] + "' equals the sentinel");
        schema_.domains[a].insert(*c);
      }
    }
  }

  AttributeSchema schema_;
  std::vector<Row> rows_;
  std::string sentinel_ = std::string(kDefaultSentinel);
  bool coded_ = false;
};

// Sorted, duplicate-free set of cell positions.
struct MissingnessMask {
  std::vector<Position> positions;

  std::size_t size() const noexcept { return positions.size(); }
  bool contains(Position p) const {
    return std::binary_search(positions.begin(), positions.end(), p);
  }
  friend bool operator==(const MissingnessMask&, const MissingnessMask&) = default;
};

/// Replace every missing cell by the sentinel token. Idempotent.
inline Dataset encode_missing(const Dataset& data) {
  if (data.sentinel_coded()) return data;
  std::vector<Row> rows = data.rows();
  for (auto& row : rows)
    for (auto& c : row)
      if (!c) c = data.sentinel();
  return Dataset(data.names(), std::move(rows), data.sentinel(), true);
}

/// Inverse of encode_missing: sentinel tokens become missing cells.
inline Dataset decode_missing(const Dataset& data) {
  if (!data.sentinel_coded()) return data;
  std::vector<Row> rows = data.rows();
  for (auto& row : rows)
    for (auto& c : row)
      if (c && *c == data.sentinel()) c.reset();
  return Dataset(data.names(), std::move(rows), data.sentinel(), false);
}

// round(rate * cells), half away from zero.
inline std::size_t masked_cell_count(double rate, std::size_t cells) {
  return static_cast<std::size_t>(std::llround(rate * static_cast<double>(cells)));
}

/// Blank exactly round(rate * cells) distinct cells chosen uniformly without
/// replacement over the whole table (MCAR). Deterministic in `seed`.
inline std::pair<Dataset, MissingnessMask> inject_missing(const Dataset& complete, double rate,
                                                          std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0))
    throw ArgumentError("missing rate must lie in [0, 1]");
  if (complete.absent_count() != 0)
    throw PreconditionError("inject_missing requires a complete dataset");

  const std::size_t cells = complete.cell_count();
  const std::size_t k = masked_cell_count(rate, cells);
  const std::size_t width = complete.attribute_count();

  // Partial Fisher-Yates: the first k slots are a uniform k-subset.
  Rng rng(seed);
  std::vector<std::size_t> idx(cells);
  for (std::size_t i = 0; i < cells; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(cells - i));
    std::swap(idx[i], idx[j]);
  }

  MissingnessMask mask;
  mask.positions.reserve(k);
  for (std::size_t i = 0; i < k; ++i) mask.positions.push_back({idx[i] / width, idx[i] % width});
  std::sort(mask.positions.begin(), mask.positions.end());

  std::vector<Row> rows = complete.rows();
  for (const auto& p : mask.positions) rows[p.row][p.attr].reset();
  return {Dataset(complete.names(), std::move(rows), complete.sentinel(), false), std::move(mask)};
}

// Most common value of one attribute; the zero-antecedent rule.
struct MCVEntry {
  std::string value;
  Ratio rel_freq;  // count(value) / count(observed, non-sentinel)
  // count(value) / row count: the confidence the empty-antecedent rule
  // "=> attr=value" has on the sentinel-coded table, where absent cells stay
  // in every denominator just as they do for mined rules. Equals rel_freq on
  // complete data.
  Ratio zero_rule_confidence;

  friend bool operator==(const MCVEntry&, const MCVEntry&) = default;
};

using MCVTable = std::vector<MCVEntry>;

/// Per-attribute modal value over observed non-sentinel cells. Ties go to the
/// lexicographically smallest token.
inline MCVTable mcv_table(const Dataset& data) {
  MCVTable table;
  table.reserve(data.attribute_count());
  for (std::size_t a = 0; a < data.attribute_count(); ++a) {
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t observed = 0;
    for (std::size_t r = 0; r < data.row_count(); ++r) {
      if (data.is_absent(r, a)) continue;
      ++counts[*data.cell(r, a)];
      ++observed;
    }
    if (observed == 0)
      throw DegenerateAttributeError("attribute '" + data.names()[a] + "' has no observed values");
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it)
      if (it->second > best->second) best = it;
    table.push_back({best->first, Ratio(best->second, observed),
                     Ratio(best->second, data.row_count())});
  }
  return table;
}

}  // namespace arimpute
