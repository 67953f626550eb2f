#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "arimpute/csv.hpp"
#include "arimpute/dataset.hpp"
#include "arimpute/generate.hpp"
#include "arimpute/rulemine.hpp"
#include "oracle.hpp"

namespace arimpute {
namespace {

namespace fs = std::filesystem;

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("arimpute_dataset_test_" + name);
}

TEST(Dataset, RejectsDuplicateAndEmptyNames) {
  EXPECT_THROW(Dataset({"a", "a"}, {}), SchemaError);
  EXPECT_THROW(Dataset({"a", ""}, {}), SchemaError);
}

TEST(Dataset, RejectsRaggedRows) {
  EXPECT_THROW(Dataset({"a", "b"}, {{"x"}}), SchemaError);
}

TEST(Dataset, ObservedSentinelIsACollision) {
  EXPECT_THROW(Dataset({"a"}, {{"MISSING"}}), CollisionError);
  EXPECT_NO_THROW(Dataset({"a"}, {{"MISSING"}}, "NA"));
}

TEST(Dataset, DomainsExcludeMissing) {
  Dataset d({"a", "b"}, {{"x", std::nullopt}, {"y", "z"}});
  EXPECT_EQ(d.schema().domains[0], (std::set<std::string>{"x", "y"}));
  EXPECT_EQ(d.schema().domains[1], (std::set<std::string>{"z"}));
  EXPECT_EQ(d.absent_count(), 1u);
}

TEST(Csv, LoadsCompleteT4) {
  const Dataset d = parse_csv("Color,Size\nred,small\nred,small\nred,big\nblue,big\n");
  EXPECT_EQ(d.row_count(), 4u);
  EXPECT_EQ(d.attribute_count(), 2u);
  EXPECT_EQ(d.absent_count(), 0u);
  EXPECT_EQ(d, oracle::t4());
}

TEST(Csv, QuestionMarkAndEmptyAreMissing) {
  const Dataset d = parse_csv("Color,Size\nred,?\n,big\n");
  EXPECT_EQ(d.row_count(), 2u);
  EXPECT_FALSE(d.cell(0, 1).has_value());
  EXPECT_FALSE(d.cell(1, 0).has_value());
  EXPECT_EQ(d.cell(1, 1), Cell("big"));
}

TEST(Csv, CustomMissingTokens) {
  CsvOptions opts;
  opts.missing_tokens = {"NA"};
  const Dataset d = parse_csv("a\nNA\n?\n", opts);
  EXPECT_FALSE(d.cell(0, 0).has_value());
  EXPECT_EQ(d.cell(1, 0), Cell("?"));
}

TEST(Csv, LiteralSentinelCollides) {
  EXPECT_THROW(parse_csv("Color,Size\nred,MISSING\n"), CollisionError);
}

TEST(Csv, RaggedRowReportsLine) {
  try {
    parse_csv("a,b\nx,y\nx,y,z\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Csv, DuplicateHeaderIsSchemaError) {
  EXPECT_THROW(parse_csv("a,a\nx,y\n"), SchemaError);
}

TEST(Csv, AcceptsCrlf) {
  EXPECT_EQ(parse_csv("Color,Size\r\nred,small\r\nred,small\r\nred,big\r\nblue,big\r\n"),
            oracle::t4());
}

TEST(Csv, SaveWritesHeaderPlusRows) {
  const auto path = temp_file("t4.csv");
  save_csv(oracle::t4(), path.string());
  std::ifstream in(path);
  std::size_t lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  EXPECT_EQ(lines, 5u);
  EXPECT_EQ(load_csv(path.string()), oracle::t4());
  fs::remove(path);
}

TEST(Csv, MissingSerializedAsQuestionMark) {
  Dataset d({"Color", "Size"}, {{"red", std::nullopt}, {"blue", "big"}});
  const std::string text = to_csv(d);
  EXPECT_EQ(text, "Color,Size\nred,?\nblue,big\n");
  EXPECT_EQ(std::count(text.begin(), text.end(), '?'), 1);
  // Coded sentinel cells print the same way.
  EXPECT_EQ(to_csv(encode_missing(d)), text);
}

TEST(Csv, UnwritablePathIsIoError) {
  EXPECT_THROW(save_csv(oracle::t4(), "/nonexistent-dir/x.csv"), IoError);
  EXPECT_THROW(load_csv("/nonexistent-dir/x.csv"), IoError);
}

TEST(Csv, RoundTripProperty) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const Dataset d = oracle::random_table(rng, 12, 5, 4, 0.2);
    EXPECT_EQ(parse_csv(to_csv(d)), d);
  }
}

TEST(EncodeMissing, ReplacesMissingWithSentinel) {
  Dataset d({"Color", "Size"}, {{"red", std::nullopt}, {"red", "small"}, {"red", "big"}, {"blue", "big"}});
  const Dataset coded = encode_missing(d);
  EXPECT_TRUE(coded.sentinel_coded());
  EXPECT_EQ(coded.cell(0, 1), Cell("MISSING"));
  EXPECT_EQ(coded.schema().domains[1], (std::set<std::string>{"small", "big", "MISSING"}));
  EXPECT_EQ(coded.schema().domains[0], (std::set<std::string>{"red", "blue"}));
  for (const auto& row : coded.rows())
    for (const auto& c : row) EXPECT_TRUE(c.has_value());
}

TEST(EncodeMissing, CompleteDatasetKeepsItsCells) {
  const Dataset coded = encode_missing(oracle::t4());
  EXPECT_EQ(coded.rows(), oracle::t4().rows());
  EXPECT_EQ(coded.schema().domains, oracle::t4().schema().domains);
}

TEST(EncodeMissing, AllMissing) {
  Dataset d({"a", "b"}, {{std::nullopt, std::nullopt}, {std::nullopt, std::nullopt}});
  const Dataset coded = encode_missing(d);
  for (const auto& row : coded.rows())
    for (const auto& c : row) EXPECT_EQ(c, Cell("MISSING"));
  EXPECT_EQ(coded.absent_count(), 4u);
}

TEST(EncodeMissing, IdempotentAndInvertible) {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const Dataset d = oracle::random_table(rng, 10, 4, 3, 0.3);
    const Dataset once = encode_missing(d);
    EXPECT_EQ(encode_missing(once), once);
    EXPECT_EQ(decode_missing(once), d);
  }
}

TEST(InjectMissing, ExactCount) {
  const Dataset d = gen_random(2000, 3, 3, 1);
  auto [incomplete, mask] = inject_missing(d, 0.10, 42);
  EXPECT_EQ(mask.size(), 600u);
  EXPECT_EQ(incomplete.absent_count(), 600u);
}

TEST(InjectMissing, ZeroRateIsIdentity) {
  const Dataset d = oracle::t4();
  auto [incomplete, mask] = inject_missing(d, 0.0, 3);
  EXPECT_EQ(incomplete, d);
  EXPECT_EQ(mask.size(), 0u);
}

TEST(InjectMissing, FullRateBlanksEverything) {
  auto [incomplete, mask] = inject_missing(oracle::t4(), 1.0, 3);
  EXPECT_EQ(mask.size(), 8u);
  EXPECT_EQ(incomplete.absent_count(), 8u);
}

TEST(InjectMissing, Errors) {
  EXPECT_THROW(inject_missing(oracle::t4(), -0.1, 1), ArgumentError);
  EXPECT_THROW(inject_missing(oracle::t4(), 1.5, 1), ArgumentError);
  auto [incomplete, mask] = inject_missing(oracle::t4(), 0.25, 1);
  EXPECT_THROW(inject_missing(incomplete, 0.1, 1), PreconditionError);
}

TEST(InjectMissing, MaskMatchesMissingCellsAndIsDeterministic) {
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    const Dataset d = oracle::random_table(rng, 20, 5, 4);
    const double rate = rng.unit();
    const auto seed = rng();
    auto [a, mask_a] = inject_missing(d, rate, seed);
    auto [b, mask_b] = inject_missing(d, rate, seed);
    EXPECT_EQ(mask_a, mask_b);
    EXPECT_EQ(to_csv(a), to_csv(b));
    EXPECT_EQ(mask_a.size(), static_cast<std::size_t>(std::llround(rate * d.cell_count())));
    EXPECT_TRUE(std::is_sorted(mask_a.positions.begin(), mask_a.positions.end()));
    EXPECT_EQ(std::adjacent_find(mask_a.positions.begin(), mask_a.positions.end()),
              mask_a.positions.end());
    for (std::size_t r = 0; r < d.row_count(); ++r)
      for (std::size_t c = 0; c < d.attribute_count(); ++c) {
        EXPECT_EQ(!a.cell(r, c).has_value(), mask_a.contains({r, c}));
        if (a.cell(r, c)) EXPECT_EQ(a.cell(r, c), d.cell(r, c));
      }
  }
}

TEST(InjectMissing, CoversCellsUniformly) {
  // 4-cell table, one masked cell per seed: each position should be hit
  // about a quarter of the time.
  const Dataset d({"a", "b"}, {{"x", "y"}, {"x", "y"}});
  std::map<Position, int> hits;
  const int n = 4000;
  for (int s = 0; s < n; ++s) ++hits[inject_missing(d, 0.25, s).second.positions.at(0)];
  ASSERT_EQ(hits.size(), 4u);
  const double sigma = std::sqrt(n * 0.25 * 0.75);
  for (const auto& [pos, count] : hits) EXPECT_LT(std::abs(count - n * 0.25), 4 * sigma);
}

TEST(Generators, DependentFollowsBijections) {
  const Dataset d = gen_dependent(2000, 3, 3, 9);
  EXPECT_EQ(d.row_count(), 2000u);
  EXPECT_EQ(d.attribute_count(), 3u);
  for (std::size_t j = 1; j < 3; ++j) {
    std::map<std::string, std::string> f;
    for (const auto& row : d.rows()) {
      auto [it, fresh] = f.emplace(*row[0], *row[j]);
      EXPECT_EQ(it->second, *row[j]);
    }
    ASSERT_EQ(f.size(), 3u);
    std::set<std::string> image;
    for (const auto& [k, v] : f) image.insert(v);
    EXPECT_EQ(image.size(), 3u) << "attribute " << j << " is not a bijection of attribute 0";
  }
}

TEST(Generators, DependentRulesHaveConfidenceOne) {
  const Dataset d = gen_dependent(10, 2, 2, 4);
  MineOptions opts;
  opts.max_antecedent_len = 1;
  for (const auto& rule : mine_rules(d, opts)) EXPECT_EQ(rule.confidence(), Ratio(1, 1));
  const auto brute = oracle::brute_force_rules(d, 1, 1);
  for (const auto& [ante, cons, sup, ante_sup] : brute) EXPECT_EQ(sup, ante_sup);
}

TEST(Generators, RandomDegenerateSize) {
  const Dataset d = gen_random(1, 1, 2, 1);
  EXPECT_EQ(d.cell_count(), 1u);
  EXPECT_TRUE(*d.cell(0, 0) == "v0" || *d.cell(0, 0) == "v1");
}

TEST(Generators, RandomFrequenciesWithinThreeSigma) {
  const Dataset d = gen_random(2000, 3, 3, 2024);
  const double p = 1.0 / 3.0;
  const double sigma = std::sqrt(2000 * p * (1 - p));
  for (std::size_t a = 0; a < 3; ++a) {
    std::map<std::string, int> counts;
    for (const auto& row : d.rows()) ++counts[*row[a]];
    ASSERT_EQ(counts.size(), 3u);
    for (const auto& [v, c] : counts) EXPECT_LT(std::abs(c - 2000 * p), 3 * sigma) << v;
  }
}

TEST(Generators, NoisyPairsKeepMostOfTheMapping) {
  const Dataset d = gen_noisy_pairs(1000, 5, 3, 0.1, 8);
  EXPECT_EQ(d.attribute_count(), 5u);
  std::map<std::pair<std::string, std::string>, int> joint;
  for (const auto& row : d.rows()) ++joint[{*row[0], *row[1]}];
  // Each driver value's top follower value should take ~93% of its rows.
  std::map<std::string, std::pair<int, int>> best;  // driver -> (top, total)
  for (const auto& [k, c] : joint) {
    auto& b = best[k.first];
    b.first = std::max(b.first, c);
    b.second += c;
  }
  for (const auto& [v, b] : best) EXPECT_GT(static_cast<double>(b.first) / b.second, 0.85);
}

TEST(Generators, ArgumentErrors) {
  EXPECT_THROW(gen_dependent(10, 1, 3, 0), ArgumentError);
  EXPECT_THROW(gen_dependent(10, 2, 1, 0), ArgumentError);
  EXPECT_THROW(gen_random(10, 0, 3, 0), ArgumentError);
  EXPECT_THROW(gen_random(10, 1, 1, 0), ArgumentError);
  EXPECT_THROW(gen_noisy_pairs(10, 5, 3, 1.5, 0), ArgumentError);
}

TEST(Generators, SeedDeterminism) {
  EXPECT_EQ(gen_dependent(50, 3, 4, 77), gen_dependent(50, 3, 4, 77));
  EXPECT_EQ(gen_random(50, 3, 4, 77), gen_random(50, 3, 4, 77));
  EXPECT_NE(gen_random(50, 3, 4, 77), gen_random(50, 3, 4, 78));
}

TEST(Rng, PinnedStream) {
  // Frozen first outputs; any change breaks seed reproducibility.
  Rng a(0), b(0);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a(), b());
  std::uint64_t sm = 0;
  EXPECT_EQ(splitmix64(sm), 0xE220A8397B1DCDAFULL);
}

TEST(McvTable, T4) {
  const MCVTable t = mcv_table(oracle::t4());
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].value, "red");
  EXPECT_EQ(t[0].rel_freq.num(), 3u);
  EXPECT_EQ(t[0].rel_freq.den(), 4u);
  EXPECT_EQ(t[1].value, "big");  // 2-2 tie, "big" < "small"
  EXPECT_EQ(t[1].rel_freq.num(), 2u);
  EXPECT_EQ(t[1].rel_freq.den(), 4u);
}

TEST(McvTable, SingleValueColumn) {
  const MCVTable t = mcv_table(Dataset({"a"}, {{"x"}, {"x"}, {std::nullopt}}));
  EXPECT_EQ(t[0].value, "x");
  EXPECT_EQ(t[0].rel_freq, Ratio(1, 1));
}

TEST(McvTable, ExcludesSentinel) {
  Dataset d({"Color", "Size"}, {{"red", std::nullopt}, {"red", "small"}, {"red", "big"}, {"blue", "big"}});
  const MCVTable t = mcv_table(encode_missing(d));
  EXPECT_EQ(t[1].value, "big");
  EXPECT_EQ(t[1].rel_freq.num(), 2u);
  EXPECT_EQ(t[1].rel_freq.den(), 3u);
  // Over all four rows, as the empty-antecedent rule would count it.
  EXPECT_EQ(t[1].zero_rule_confidence.num(), 2u);
  EXPECT_EQ(t[1].zero_rule_confidence.den(), 4u);
  EXPECT_EQ(t[0].zero_rule_confidence, t[0].rel_freq);
  EXPECT_EQ(mcv_table(d), t);
}

TEST(McvTable, DegenerateAttribute) {
  EXPECT_THROW(mcv_table(Dataset({"a", "b"}, {{"x", std::nullopt}})), DegenerateAttributeError);
  EXPECT_THROW(mcv_table(encode_missing(Dataset({"a", "b"}, {{"x", std::nullopt}}))),
               DegenerateAttributeError);
}

TEST(McvTable, RowDuplicationInvariant) {
  Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    const Dataset d = oracle::random_table(rng, 10, 4, 4, 0.1);
    if (d.absent_count() != 0) {
      bool degenerate = false;
      for (std::size_t a = 0; a < d.attribute_count(); ++a) degenerate |= d.schema().domains[a].empty();
      if (degenerate) continue;
    }
    std::vector<Row> doubled = d.rows();
    doubled.insert(doubled.end(), d.rows().begin(), d.rows().end());
    EXPECT_EQ(mcv_table(Dataset(d.names(), doubled)), mcv_table(d));
  }
}

}  // namespace
}  // namespace arimpute
