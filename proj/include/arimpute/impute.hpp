#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arimpute/dataset.hpp"
#include "arimpute/rulemine.hpp"

namespace arimpute {

enum class Source { Rule, Mcv, Unfilled };

struct FilledCell {
  Position position;
  std::string value;  // sentinel when Unfilled
  Source source = Source::Unfilled;
  std::size_t rule_index = 0;  // index into the RuleList, meaningful for Source::Rule

  friend bool operator==(const FilledCell&, const FilledCell&) = default;
};

/// Result of imputing a sentinel-coded snapshot. `filled` is a coded dataset
/// holding the sentinel only at Unfilled positions; `cells` lists every
/// target in row-major order.
struct ImputationOutcome {
  Dataset filled;
  std::vector<FilledCell> cells;

  std::size_t count(Source s) const {
    std::size_t n = 0;
    for (const auto& c : cells) n += c.source == s;
    return n;
  }
};

struct VariantConfig {
  int variant = 3;
  std::uint64_t min_support_count = 1;
  std::optional<std::size_t> max_antecedent_len;
};

struct RuleMatch {
  std::size_t rule_index = 0;
  std::string value;

  friend bool operator==(const RuleMatch&, const RuleMatch&) = default;
};

/// First rule in list order that matches `row` for `target_attr` and, when a
/// threshold is given, has confidence >= threshold.
inline std::optional<RuleMatch> find_suitable_rule(std::span<const Cell> row, std::size_t target_attr,
                                                   const RuleList& rules,
                                                   std::optional<Ratio> threshold = std::nullopt) {
  for (const std::size_t i : rules.targeting(target_attr)) {
    const AssociationRule& rule = rules[i];
    if (threshold && rule.confidence() < *threshold) continue;
    if (rule_matches(rule, row, target_attr)) return RuleMatch{i, rule.consequent.value};
  }
  return std::nullopt;
}

namespace detail {

enum class Fallback { None, Mcv };

// Shared driver for the three rule variants. Every lookup reads the frozen
// coded snapshot, so imputed values never feed later matches.
inline ImputationOutcome impute_with_rules(const Dataset& data, const RuleList& rules,
                                           const MCVTable* mcv, bool thresholded) {
  const Dataset snapshot = encode_missing(data);
  if (mcv && mcv->size() != snapshot.attribute_count())
    throw ArgumentError("MCV table does not match the dataset's attribute count");

  std::vector<Row> rows = snapshot.rows();
  ImputationOutcome out;
  for (const Position p : snapshot.absent_positions()) {
    std::optional<Ratio> threshold;
    if (thresholded) threshold = (*mcv)[p.attr].zero_rule_confidence;
    FilledCell cell{p, snapshot.sentinel(), Source::Unfilled, 0};
    if (auto m = find_suitable_rule(snapshot.row(p.row), p.attr, rules, threshold)) {
      cell.value = std::move(m->value);
      cell.source = Source::Rule;
      cell.rule_index = m->rule_index;
    } else if (mcv) {
      cell.value = (*mcv)[p.attr].value;
      cell.source = Source::Mcv;
    }
    rows[p.row][p.attr] = cell.value;
    out.cells.push_back(std::move(cell));
  }
  out.filled = Dataset(snapshot.names(), std::move(rows), snapshot.sentinel(), true);
  return out;
}

}  // namespace detail

/// Most-common-value baseline: every absent cell gets its attribute's MCV.
inline ImputationOutcome impute_mcv(const Dataset& data) {
  const Dataset snapshot = encode_missing(data);
  const MCVTable mcv = mcv_table(snapshot);
  return detail::impute_with_rules(snapshot, RuleList{}, &mcv, false);
}

// Rules only; cells without a suitable rule stay as the sentinel.
inline ImputationOutcome impute_v1(const Dataset& data, const RuleList& rules) {
  return detail::impute_with_rules(data, rules, nullptr, false);
}

// Rules, then MCV for whatever no rule covers.
inline ImputationOutcome impute_v2(const Dataset& data, const RuleList& rules, const MCVTable& mcv) {
  return detail::impute_with_rules(data, rules, &mcv, false);
}

/// Rules whose confidence is at least that of the empty-antecedent rule
/// "=> attr=MCV" on the same coded snapshot, then MCV. Rule confidences count
/// sentinel rows in their denominators, so the threshold does too.
inline ImputationOutcome impute_v3(const Dataset& data, const RuleList& rules, const MCVTable& mcv) {
  return detail::impute_with_rules(data, rules, &mcv, true);
}

/// Full pipeline on one incomplete dataset: code the sentinel, mine, filter,
/// sort, and impute with the configured variant.
inline RuleList prepare_rules(const Dataset& coded, const VariantConfig& config) {
  MineOptions opts;
  opts.min_support_count = config.min_support_count;
  opts.max_antecedent_len = config.max_antecedent_len;
  auto mined = mine_rules(coded, opts);
  return sort_rules(filter_rules(std::move(mined), config.min_support_count, coded.sentinel()),
                    coded.names());
}

inline ImputationOutcome impute_with(const Dataset& data, const RuleList& rules,
                                     const VariantConfig& config) {
  const Dataset coded = encode_missing(data);
  switch (config.variant) {
    case 1:
      return impute_v1(coded, rules);
    case 2:
      return impute_v2(coded, rules, mcv_table(coded));
    case 3:
      return impute_v3(coded, rules, mcv_table(coded));
    default:
      throw ArgumentError("variant must be 1, 2 or 3");
  }
}

inline ImputationOutcome impute(const Dataset& data, const VariantConfig& config) {
  if (config.variant < 1 || config.variant > 3) throw ArgumentError("variant must be 1, 2 or 3");
  const Dataset coded = encode_missing(data);
  return impute_with(coded, prepare_rules(coded, config), config);
}

inline const char* source_name(Source s) {
  switch (s) {
    case Source::Rule:
      return "rule";
    case Source::Mcv:
      return "mcv";
    case Source::Unfilled:
      return "unfilled";
  }
  return "?";
}

}  // namespace arimpute
