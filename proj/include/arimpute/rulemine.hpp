#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "arimpute/dataset.hpp"
#include "arimpute/rational.hpp"

namespace arimpute {

// attribute = value
struct Item {
  std::size_t attr = 0;
  std::string value;

  friend auto operator<=>(const Item&, const Item&) = default;
};

struct Itemset {
  std::vector<Item> items;  // sorted by attr, one item per attr
  std::uint64_t support_count = 0;

  friend bool operator==(const Itemset&, const Itemset&) = default;
};

/// IF antecedent THEN consequent, with a single-item consequent.
/// confidence = support_count / antecedent_support.
struct AssociationRule {
  std::vector<Item> antecedent;  // sorted by attr
  Item consequent;
  std::uint64_t support_count = 0;
  std::uint64_t antecedent_support = 0;

  Ratio confidence() const { return Ratio(support_count, antecedent_support); }

  friend bool operator==(const AssociationRule&, const AssociationRule&) = default;
};

struct MineOptions {
  std::uint64_t min_support_count = 1;
  // Defaults to attribute count - 1.
  std::optional<std::size_t> max_antecedent_len;
};

namespace detail {

// Dense item ids ordered by (attr, value), so an id-sorted itemset is also
// attribute-sorted.
struct ItemCodec {
  std::vector<Item> items;
  std::vector<std::size_t> attr_of;
  std::vector<std::vector<std::uint32_t>> rows;  // rows[r][a] = item id

  explicit ItemCodec(const Dataset& data) {
    const std::size_t width = data.attribute_count();
    std::vector<std::map<std::string, std::uint32_t>> ids(width);
    for (std::size_t a = 0; a < width; ++a) {
      for (const auto& v : data.schema().domains[a]) {
        ids[a].emplace(v, static_cast<std::uint32_t>(items.size()));
        items.push_back({a, v});
        attr_of.push_back(a);
      }
    }
    rows.reserve(data.row_count());
    for (const auto& row : data.rows()) {
      std::vector<std::uint32_t> coded(width);
      for (std::size_t a = 0; a < width; ++a) coded[a] = ids[a].at(*row[a]);
      rows.push_back(std::move(coded));
    }
  }
};

using IdSet = std::vector<std::uint32_t>;

inline std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > (1ULL << 40)) return r;
  }
  return r;
}

// Apriori join + prune: merge two frequent (k-1)-sets sharing their first
// k-2 ids whose last items sit on different attributes, then drop candidates
// with an infrequent (k-1)-subset.
inline std::vector<IdSet> apriori_candidates(const std::map<IdSet, std::uint64_t>& prev,
                                             const std::vector<std::size_t>& attr_of) {
  std::vector<IdSet> level;
  level.reserve(prev.size());
  for (const auto& [set, count] : prev) level.push_back(set);

  std::vector<IdSet> out;
  for (std::size_t i = 0; i < level.size(); ++i) {
    const IdSet& a = level[i];
    for (std::size_t j = i + 1; j < level.size(); ++j) {
      const IdSet& b = level[j];
      if (!std::equal(a.begin(), a.end() - 1, b.begin(), b.end() - 1)) break;
      if (attr_of[a.back()] >= attr_of[b.back()]) continue;
      IdSet cand = a;
      cand.push_back(b.back());
      bool keep = true;
      IdSet sub(cand.size() - 1);
      for (std::size_t drop = 0; keep && drop + 2 < cand.size(); ++drop) {
        std::size_t w = 0;
        for (std::size_t t = 0; t < cand.size(); ++t)
          if (t != drop) sub[w++] = cand[t];
        keep = prev.contains(sub);
      }
      if (keep) out.push_back(std::move(cand));
    }
  }
  return out;
}

inline void count_candidates(std::map<IdSet, std::uint64_t>& counts, std::size_t k,
                             const ItemCodec& codec, std::size_t width) {
  if (counts.empty()) return;
  // Either enumerate each row's k-subsets and look them up, or test every
  // candidate against each row; pick the cheaper per level.
  if (binomial(width, k) <= counts.size()) {
    std::vector<std::size_t> pick(k);
    IdSet key(k);
    for (const auto& row : codec.rows) {
      for (std::size_t i = 0; i < k; ++i) pick[i] = i;
      for (;;) {
        for (std::size_t i = 0; i < k; ++i) key[i] = row[pick[i]];
        if (auto it = counts.find(key); it != counts.end()) ++it->second;
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == width - k + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t t = i; t < k; ++t) pick[t] = pick[t - 1] + 1;
      }
    }
  } else {
    for (auto& [set, count] : counts)
      for (const auto& row : codec.rows)
        count += std::all_of(set.begin(), set.end(),
                             [&](std::uint32_t id) { return row[codec.attr_of[id]] == id; });
  }
}

}  // namespace detail

/// Level-wise (apriori) mining of every itemset of size 1..max_size whose
/// support count reaches min_support_count. Output is ordered by size, then
/// by (attr, value) of the items.
inline std::vector<Itemset> frequent_itemsets(const Dataset& data, std::uint64_t min_support_count,
                                              std::size_t max_size) {
  if (min_support_count < 1) throw ArgumentError("min_support_count must be at least 1");
  if (data.absent_count() != 0 && !data.sentinel_coded())
    throw PreconditionError("mining requires a sentinel-coded dataset (apply encode_missing)");

  std::vector<Itemset> result;
  if (data.row_count() == 0 || data.attribute_count() == 0) return result;
  const std::size_t width = data.attribute_count();
  max_size = std::min(max_size, width);
  const detail::ItemCodec codec(data);

  std::map<detail::IdSet, std::uint64_t> level;
  for (std::uint32_t id = 0; id < codec.items.size(); ++id) level[{id}] = 0;
  detail::count_candidates(level, 1, codec, width);

  for (std::size_t k = 1; k <= max_size; ++k) {
    std::erase_if(level, [&](const auto& kv) { return kv.second < min_support_count; });
    if (level.empty()) break;
    for (const auto& [set, count] : level) {
      Itemset is;
      is.support_count = count;
      for (auto id : set) is.items.push_back(codec.items[id]);
      result.push_back(std::move(is));
    }
    if (k == max_size) break;
    std::map<detail::IdSet, std::uint64_t> next;
    for (auto& cand : detail::apriori_candidates(level, codec.attr_of)) next.emplace(std::move(cand), 0);
    detail::count_candidates(next, k + 1, codec, width);
    level = std::move(next);
  }
  return result;
}

/// Every single-consequent rule whose itemset (antecedent + consequent) is
/// frequent and whose antecedent has 1..max_antecedent_len items.
inline std::vector<AssociationRule> mine_rules(const Dataset& data, const MineOptions& opts = {}) {
  if (opts.min_support_count < 1) throw ArgumentError("min_support_count must be at least 1");
  const std::size_t width = data.attribute_count();
  const std::size_t max_ante =
      opts.max_antecedent_len.value_or(width == 0 ? 0 : width - 1);
  std::vector<AssociationRule> rules;
  if (max_ante == 0) return rules;
  const auto sets = frequent_itemsets(data, opts.min_support_count, max_ante + 1);

  std::map<std::vector<Item>, std::uint64_t> support;
  for (const auto& s : sets) support.emplace(s.items, s.support_count);

  for (const auto& s : sets) {
    if (s.items.size() < 2) continue;
    for (std::size_t c = 0; c < s.items.size(); ++c) {
      AssociationRule rule;
      rule.consequent = s.items[c];
      for (std::size_t t = 0; t < s.items.size(); ++t)
        if (t != c) rule.antecedent.push_back(s.items[t]);
      rule.support_count = s.support_count;
      // Subsets of a frequent itemset are frequent, so this lookup succeeds.
      rule.antecedent_support = support.at(rule.antecedent);
      rules.push_back(std::move(rule));
    }
  }
  return rules;
}

/// Keep rules with enough support whose consequent is not the sentinel.
/// Sentinel values in antecedents are kept.
inline std::vector<AssociationRule> filter_rules(std::vector<AssociationRule> rules,
                                                 std::uint64_t min_support_count,
                                                 std::string_view sentinel) {
  std::erase_if(rules, [&](const AssociationRule& r) {
    return r.support_count < min_support_count || r.consequent.value == sentinel;
  });
  return rules;
}

// "A=x & B=y => C=z\tsupport=N\tconfidence=N/D"
inline std::string format_rule(const AssociationRule& rule, std::span<const std::string> names) {
  std::string out;
  for (std::size_t i = 0; i < rule.antecedent.size(); ++i) {
    if (i) out += " & ";
    out += names[rule.antecedent[i].attr] + "=" + rule.antecedent[i].value;
  }
  out += " => " + names[rule.consequent.attr] + "=" + rule.consequent.value;
  out += "\tsupport=" + std::to_string(rule.support_count);
  out += "\tconfidence=" + rule.confidence().to_string();
  return out;
}

/// Immutable rule sequence in decision order: confidence desc, support desc,
/// antecedent length asc, then canonical text. Also indexes rules by the
/// attribute of their consequent.
class RuleList {
 public:
  RuleList() = default;

  std::span<const AssociationRule> rules() const noexcept { return rules_; }
  const AssociationRule& operator[](std::size_t i) const { return rules_.at(i); }
  std::size_t size() const noexcept { return rules_.size(); }
  bool empty() const noexcept { return rules_.empty(); }
  auto begin() const noexcept { return rules_.begin(); }
  auto end() const noexcept { return rules_.end(); }

  // Indices (ascending) of rules whose consequent is on `attr`.
  std::span<const std::size_t> targeting(std::size_t attr) const {
    if (attr >= by_target_.size()) return {};
    return by_target_[attr];
  }

  friend bool operator==(const RuleList& a, const RuleList& b) { return a.rules_ == b.rules_; }

 private:
  friend RuleList sort_rules(std::vector<AssociationRule>, std::span<const std::string>);

  explicit RuleList(std::vector<AssociationRule> rules) : rules_(std::move(rules)) {
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      const auto attr = rules_[i].consequent.attr;
      if (attr >= by_target_.size()) by_target_.resize(attr + 1);
      by_target_[attr].push_back(i);
    }
  }

  std::vector<AssociationRule> rules_;
  std::vector<std::vector<std::size_t>> by_target_;
};

// Three-way comparison implementing the RuleList order.
inline std::strong_ordering compare_rules(const AssociationRule& a, const std::string& a_text,
                                          const AssociationRule& b, const std::string& b_text) {
  if (auto c = b.confidence() <=> a.confidence(); c != 0) return c;
  if (auto c = b.support_count <=> a.support_count; c != 0) return c;
  if (auto c = a.antecedent.size() <=> b.antecedent.size(); c != 0) return c;
  if (auto c = a_text <=> b_text; c != 0) return c;
  // Only reachable if two distinct rules print identically.
  if (auto c = a.antecedent <=> b.antecedent; c != 0) return c;
  return a.consequent <=> b.consequent;
}

/// Sort into decision order and drop exact duplicates.
inline RuleList sort_rules(std::vector<AssociationRule> rules,
                           std::span<const std::string> attribute_names) {
  std::vector<std::pair<std::string, AssociationRule>> keyed;
  keyed.reserve(rules.size());
  for (auto& r : rules) {
    for (const auto& it : r.antecedent)
      if (it.attr >= attribute_names.size()) throw ArgumentError("rule attribute out of range");
    if (r.consequent.attr >= attribute_names.size())
      throw ArgumentError("rule attribute out of range");
    keyed.emplace_back(format_rule(r, attribute_names), std::move(r));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
    return compare_rules(x.second, x.first, y.second, y.first) < 0;
  });
  std::vector<AssociationRule> sorted;
  sorted.reserve(keyed.size());
  for (auto& [text, rule] : keyed) {
    if (!sorted.empty() && sorted.back().antecedent == rule.antecedent &&
        sorted.back().consequent == rule.consequent)
      continue;
    sorted.push_back(std::move(rule));
  }
  return RuleList(std::move(sorted));
}

/// Consequent targets `target_attr` and every antecedent item equals the
/// row's cell on that attribute. The antecedent need not cover the row.
inline bool rule_matches(const AssociationRule& rule, std::span<const Cell> row,
                         std::size_t target_attr) {
  if (rule.consequent.attr != target_attr) return false;
  return std::all_of(rule.antecedent.begin(), rule.antecedent.end(), [&](const Item& it) {
    return it.attr < row.size() && row[it.attr] && *row[it.attr] == it.value;
  });
}

namespace detail {

inline Item parse_item(const std::string& text, std::span<const std::string> names,
                       std::size_t line) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ParseError("item '" + text + "' lacks '='", line);
  const std::string name = text.substr(0, eq);
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ParseError("unknown attribute '" + name + "'", line);
  std::string value = text.substr(eq + 1);
  if (value.empty()) throw ParseError("empty value in item '" + text + "'", line);
  return {static_cast<std::size_t>(it - names.begin()), std::move(value)};
}

inline std::uint64_t parse_count(const std::string& text, std::size_t line) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("bad count '" + text + "'", line);
  return std::stoull(text);
}

}  // namespace detail

/// Parse one canonical rule line against the given attribute names.
inline AssociationRule parse_rule(const std::string& line_text, std::span<const std::string> names,
                                  std::size_t line = 0) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line_text.find('\t', start);
    fields.push_back(line_text.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  if (fields.size() != 3) throw ParseError("expected 3 tab-separated fields", line);
  const auto arrow = fields[0].find(" => ");
  if (arrow == std::string::npos) throw ParseError("missing ' => '", line);

  AssociationRule rule;
  const std::string lhs = fields[0].substr(0, arrow);
  for (std::size_t pos = 0;;) {
    const auto amp = lhs.find(" & ", pos);
    rule.antecedent.push_back(detail::parse_item(lhs.substr(pos, amp - pos), names, line));
    if (amp == std::string::npos) break;
    pos = amp + 3;
  }
  rule.consequent = detail::parse_item(fields[0].substr(arrow + 4), names, line);

  if (fields[1].rfind("support=", 0) != 0) throw ParseError("missing support=", line);
  if (fields[2].rfind("confidence=", 0) != 0) throw ParseError("missing confidence=", line);
  rule.support_count = detail::parse_count(fields[1].substr(8), line);
  const std::string conf = fields[2].substr(11);
  const auto slash = conf.find('/');
  if (slash == std::string::npos) throw ParseError("confidence must be num/den", line);
  const auto num = detail::parse_count(conf.substr(0, slash), line);
  rule.antecedent_support = detail::parse_count(conf.substr(slash + 1), line);
  if (num != rule.support_count) throw ParseError("confidence numerator differs from support", line);
  if (rule.antecedent_support == 0 || rule.support_count == 0 ||
      rule.support_count > rule.antecedent_support)
    throw ParseError("confidence must lie in (0, 1]", line);

  std::sort(rule.antecedent.begin(), rule.antecedent.end());
  for (std::size_t i = 0; i < rule.antecedent.size(); ++i) {
    if (rule.antecedent[i].attr == rule.consequent.attr ||
        (i && rule.antecedent[i].attr == rule.antecedent[i - 1].attr))
      throw ParseError("attribute repeated within a rule", line);
  }
  return rule;
}

inline std::vector<AssociationRule> read_rules(std::istream& in, std::span<const std::string> names) {
  std::vector<AssociationRule> rules;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rules.push_back(parse_rule(line, names, line_no));
  }
  return rules;
}

inline void write_rules(const RuleList& rules, std::span<const std::string> names, std::ostream& out) {
  for (const auto& r : rules) out << format_rule(r, names) << '\n';
}

}  // namespace arimpute
