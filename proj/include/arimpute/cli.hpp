#pragma once

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "arimpute/bench.hpp"
#include "arimpute/csv.hpp"
#include "arimpute/dataset.hpp"
#include "arimpute/generate.hpp"
#include "arimpute/impute.hpp"
#include "arimpute/rulemine.hpp"

namespace arimpute {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Default seed when --seed is absent; overridable through this variable.
inline constexpr const char* kSeedEnvVar = "ARIMPUTE_SEED";

namespace cli_detail {

struct GenParams {
  std::string kind = "dependent";
  std::optional<std::size_t> cases;
  std::optional<std::size_t> attrs;
  std::size_t values = 3;
  double noise = 0.1;
};

inline Dataset generate(const GenParams& p, std::uint64_t seed) {
  if (p.kind == "dependent")
    return gen_dependent(p.cases.value_or(2000), p.attrs.value_or(3), p.values, seed);
  if (p.kind == "random")
    return gen_random(p.cases.value_or(2000), p.attrs.value_or(3), p.values, seed);
  if (p.kind == "paired")
    return gen_noisy_pairs(p.cases.value_or(1000), p.attrs.value_or(5), p.values, p.noise, seed);
  throw ArgumentError("unknown kind '" + p.kind + "'");
}

inline void add_gen_options(CLI::App& cmd, GenParams& p) {
  cmd.add_option("--kind", p.kind, "dependent, random or paired")
      ->check(CLI::IsMember({"dependent", "random", "paired"}));
  cmd.add_option("--cases", p.cases, "Number of rows")->check(CLI::PositiveNumber);
  cmd.add_option("--attrs", p.attrs, "Number of attributes")->check(CLI::PositiveNumber);
  cmd.add_option("--values", p.values, "Distinct values per attribute")->check(CLI::Range(2, 1000000));
  cmd.add_option("--noise", p.noise, "Follower redraw probability (paired only)")
      ->check(CLI::Range(0.0, 1.0));
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw IoError("write to '" + path + "' failed");
}

inline std::string provenance_csv(const ImputationOutcome& outcome, const Dataset& data) {
  std::ostringstream out;
  out << "row,attr,value,source\n";
  for (const auto& c : outcome.cells) {
    out << c.position.row << ',' << data.names()[c.position.attr] << ','
        << (c.source == Source::Unfilled ? std::string(kMissingOutputToken) : c.value) << ',';
    if (c.source == Source::Rule)
      out << "rule:" << c.rule_index;
    else
      out << source_name(c.source);
    out << '\n';
  }
  return out.str();
}

inline std::uint64_t default_seed() {
  if (const char* env = std::getenv(kSeedEnvVar); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw ArgumentError(std::string(kSeedEnvVar) + " is not an unsigned integer");
  }
  return 0;
}

}  // namespace cli_detail

/// Entry point of the `arimpute` tool. `args` excludes the program name.
/// Returns 0 on success, 2 on usage errors, 1 on runtime failures.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Categorical missing-value imputation with association rules", "arimpute"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string sentinel(kDefaultSentinel);
  std::uint64_t min_support = 1;
  std::optional<std::size_t> max_antecedent;
  std::string input, output;

  auto* gen = app.add_subcommand("gen", "Generate a synthetic complete dataset");
  cli_detail::GenParams gen_params;
  cli_detail::add_gen_options(*gen, gen_params);
  gen->add_option("--seed", seed, "PRNG seed");
  gen->add_option("-o,--output", output, "Output CSV (stdout if omitted)");

  auto* mine = app.add_subcommand("mine", "Mine, filter and sort rules from a CSV");
  mine->add_option("-i,--input", input, "Input CSV")->required()->check(CLI::ExistingFile);
  mine->add_option("--min-support", min_support, "Minimum support count")->check(CLI::PositiveNumber);
  mine->add_option("--max-antecedent", max_antecedent, "Maximum antecedent length");
  mine->add_option("--sentinel", sentinel, "Token used to code missing values");
  mine->add_option("-o,--output", output, "Rule file (stdout if omitted)");

  auto* imp = app.add_subcommand("impute", "Fill missing cells of a CSV");
  std::string rules_path, provenance_path;
  int variant = 3;
  imp->add_option("-i,--input", input, "Input CSV")->required()->check(CLI::ExistingFile);
  imp->add_option("--rules", rules_path, "Rule file (mined internally if omitted)")
      ->check(CLI::ExistingFile);
  imp->add_option("--variant", variant, "Algorithm variant 1, 2 or 3")->check(CLI::Range(1, 3));
  imp->add_option("--min-support", min_support, "Minimum support count")->check(CLI::PositiveNumber);
  imp->add_option("--max-antecedent", max_antecedent, "Maximum antecedent length");
  imp->add_option("--sentinel", sentinel, "Token used to code missing values");
  imp->add_option("-o,--output", output, "Output CSV (stdout if omitted)");
  imp->add_option("--provenance", provenance_path, "Write row,attr,value,source per filled cell");

  auto* bench = app.add_subcommand("bench", "Run the missing-rate benchmark");
  cli_detail::GenParams bench_params;
  cli_detail::add_gen_options(*bench, bench_params);
  std::vector<double> rates_pct{1, 2, 5, 10, 20, 40, 70};
  std::vector<std::string> method_names{"v3", "mcv"};
  std::size_t trials = 5;
  std::string csv_path, label;
  bench->add_option("-i,--input", input, "Complete CSV to benchmark instead of a generated one")
      ->check(CLI::ExistingFile);
  bench->add_option("--rates", rates_pct, "Missing rates in percent")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 100.0));
  bench->add_option("--methods", method_names, "Methods: mcv, v1, v2, v3")
      ->delimiter(',')
      ->check(CLI::IsMember({"mcv", "v1", "v2", "v3"}));
  bench->add_option("--trials", trials, "Trials per cell")->check(CLI::PositiveNumber);
  bench->add_option("--seed", seed, "Base seed");
  bench->add_option("--min-support", min_support, "Minimum support count")->check(CLI::PositiveNumber);
  bench->add_option("--max-antecedent", max_antecedent, "Maximum antecedent length");
  bench->add_option("--csv", csv_path, "Also write method,rate,mean_error_pct,trials,seed");
  bench->add_option("--label", label, "Title suffix for the table");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    seed_given = (gen->count("--seed") + bench->count("--seed")) > 0;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "arimpute: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (!seed_given) seed = cli_detail::default_seed();
    CsvOptions csv_opts;
    csv_opts.sentinel = sentinel;
    VariantConfig config;
    config.variant = variant;
    config.min_support_count = min_support;
    config.max_antecedent_len = max_antecedent;

    if (*gen) {
      cli_detail::write_text(output, to_csv(cli_detail::generate(gen_params, seed)), out);
    } else if (*mine) {
      const Dataset coded = encode_missing(load_csv(input, csv_opts));
      std::ostringstream text;
      write_rules(prepare_rules(coded, config), coded.names(), text);
      cli_detail::write_text(output, text.str(), out);
    } else if (*imp) {
      const Dataset data = load_csv(input, csv_opts);
      const Dataset coded = encode_missing(data);
      RuleList rules;
      if (rules_path.empty()) {
        rules = prepare_rules(coded, config);
      } else {
        std::ifstream in(rules_path);
        if (!in) throw IoError("cannot open '" + rules_path + "'");
        rules = sort_rules(filter_rules(read_rules(in, coded.names()), min_support, sentinel),
                           coded.names());
      }
      const ImputationOutcome outcome = impute_with(coded, rules, config);
      cli_detail::write_text(output, to_csv(outcome.filled), out);
      if (!provenance_path.empty())
        cli_detail::write_text(provenance_path, cli_detail::provenance_csv(outcome, data), out);
    } else if (*bench) {
      Dataset complete;
      std::string title = label;
      if (!input.empty()) {
        complete = load_csv(input, csv_opts);
        if (title.empty()) title = input;
      } else {
        complete = cli_detail::generate(bench_params, seed);
        if (title.empty()) title = bench_params.kind;
      }
      std::vector<double> rates;
      for (double pct : rates_pct) rates.push_back(pct / 100.0);
      std::vector<Method> methods;
      for (const auto& m : method_names) methods.push_back(parse_method(m));
      const Report report = run_experiment(complete, rates, methods, config, trials, seed, title);
      out << render_report(report);
      if (!csv_path.empty()) cli_detail::write_text(csv_path, render_report_csv(report), out);
    }
  } catch (const ArgumentError& e) {
    err << "arimpute: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "arimpute: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace arimpute
