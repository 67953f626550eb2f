#pragma once

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "arimpute/dataset.hpp"
#include "arimpute/impute.hpp"
#include "arimpute/random.hpp"

namespace arimpute {

enum class Method { Mcv, V1, V2, V3 };

inline std::string method_name(Method m) {
  switch (m) {
    case Method::Mcv:
      return "mcv";
    case Method::V1:
      return "v1";
    case Method::V2:
      return "v2";
    case Method::V3:
      return "v3";
  }
  return "?";
}

inline Method parse_method(std::string_view name) {
  if (name == "mcv") return Method::Mcv;
  if (name == "v1") return Method::V1;
  if (name == "v2") return Method::V2;
  if (name == "v3") return Method::V3;
  throw ArgumentError("unknown method '" + std::string(name) + "' (expected mcv, v1, v2 or v3)");
}

struct TrialResult {
  Method method = Method::Mcv;
  double rate = 0.0;
  std::uint64_t seed = 0;
  std::size_t missing_cells = 0;
  std::size_t incorrect = 0;  // includes unfilled
  std::size_t unfilled = 0;

  Ratio error_pct() const { return Ratio(100 * incorrect, missing_cells); }

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

/// Impute `incomplete` with one method and score it against `complete` at
/// the masked positions. Unfilled cells count as incorrect.
inline TrialResult score_method(const Dataset& complete, const Dataset& incomplete,
                                const MissingnessMask& mask, Method method,
                                const VariantConfig& config) {
  ImputationOutcome outcome;
  if (method == Method::Mcv) {
    outcome = impute_mcv(incomplete);
  } else {
    VariantConfig cfg = config;
    cfg.variant = method == Method::V1 ? 1 : method == Method::V2 ? 2 : 3;
    outcome = impute(incomplete, cfg);
  }

  TrialResult result;
  result.method = method;
  result.missing_cells = mask.size();
  for (const Position p : mask.positions) {
    if (outcome.filled.is_absent(p.row, p.attr)) {
      ++result.unfilled;
      ++result.incorrect;
    } else if (outcome.filled.cell(p) != complete.cell(p)) {
      ++result.incorrect;
    }
  }
  return result;
}

/// One test: inject missingness with `seed`, impute, count wrong estimates.
inline TrialResult run_trial(const Dataset& complete, double rate, Method method,
                             const VariantConfig& config, std::uint64_t seed) {
  auto [incomplete, mask] = inject_missing(complete, rate, seed);
  if (mask.size() == 0)
    throw PreconditionError("missing rate " + std::to_string(rate) + " masks no cell of a " +
                            std::to_string(complete.cell_count()) + "-cell dataset");
  TrialResult r = score_method(complete, incomplete, mask, method, config);
  r.rate = rate;
  r.seed = seed;
  return r;
}

/// Seed of trial `trial_index` at rate `rate_index`. The method is not an
/// input, so every method sees the same mask for a given (rate, trial).
inline std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t rate_index,
                                std::size_t trial_index) {
  const std::uint64_t r = mix64(base_seed + 0x9E3779B97F4A7C15ULL * (rate_index + 1));
  return mix64(r ^ (0xD1B54A32D192ED03ULL * (trial_index + 1)));
}

struct ReportCell {
  Ratio mean_error_pct;  // exact: all trials at one rate share a denominator
  std::size_t trials = 0;
};

struct Report {
  std::string label;
  std::vector<Method> methods;
  std::vector<double> rates;
  std::vector<std::vector<ReportCell>> grid;  // [method][rate]
  std::size_t trials = 0;
  std::uint64_t base_seed = 0;
  std::vector<TrialResult> trial_results;

  const ReportCell& at(Method m, std::size_t rate_index) const {
    for (std::size_t i = 0; i < methods.size(); ++i)
      if (methods[i] == m) return grid[i].at(rate_index);
    throw ArgumentError("method " + method_name(m) + " not in report");
  }
};

inline Report run_experiment(const Dataset& complete, const std::vector<double>& rates,
                             const std::vector<Method>& methods, const VariantConfig& config,
                             std::size_t trials = 5, std::uint64_t base_seed = 0,
                             std::string label = {}) {
  if (trials < 1) throw ArgumentError("trials must be at least 1");
  if (rates.empty()) throw ArgumentError("at least one missing rate is required");

  Report report;
  report.label = std::move(label);
  report.methods = methods;
  report.rates = rates;
  report.trials = trials;
  report.base_seed = base_seed;

  std::vector<std::vector<std::uint64_t>> incorrect(methods.size(),
                                                    std::vector<std::uint64_t>(rates.size(), 0));
  std::vector<std::uint64_t> denominators(rates.size(), 0);
  for (std::size_t ri = 0; ri < rates.size(); ++ri) {
    for (std::size_t t = 0; t < trials; ++t) {
      const std::uint64_t seed = trial_seed(base_seed, ri, t);
      auto [incomplete, mask] = inject_missing(complete, rates[ri], seed);
      if (mask.size() == 0)
        throw PreconditionError("missing rate " + std::to_string(rates[ri]) + " masks no cell");
      denominators[ri] += mask.size();
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        TrialResult r = score_method(complete, incomplete, mask, methods[mi], config);
        r.rate = rates[ri];
        r.seed = seed;
        incorrect[mi][ri] += r.incorrect;
        report.trial_results.push_back(r);
      }
    }
  }
  report.grid.assign(methods.size(), std::vector<ReportCell>(rates.size()));
  for (std::size_t mi = 0; mi < methods.size(); ++mi)
    for (std::size_t ri = 0; ri < rates.size(); ++ri)
      report.grid[mi][ri] = {Ratio(100 * incorrect[mi][ri], denominators[ri]), trials};
  return report;
}

namespace detail {

inline std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline std::string fmt_fixed1(double v, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%*.1f", width, v);
  return buf;
}

inline std::string pad(const std::string& s, std::size_t width, bool left) {
  if (s.size() >= width) return s;
  return left ? s + std::string(width - s.size(), ' ') : std::string(width - s.size(), ' ') + s;
}

}  // namespace detail

/// Methods as rows, missing-rate percentages as columns, one decimal.
inline std::string render_report(const Report& report) {
  constexpr std::size_t kLabelWidth = 8;
  constexpr int kColWidth = 7;
  std::ostringstream out;
  out << "Average % of incorrectly estimated missing values";
  if (!report.label.empty()) out << " (" << report.label << ")";
  out << '\n';
  out << detail::pad("method", kLabelWidth, true);
  for (double r : report.rates) out << detail::pad(detail::fmt_g(r * 100.0), kColWidth, false);
  out << "   % missing\n";
  if (report.methods.empty() || report.rates.empty()) return out.str();
  for (std::size_t mi = 0; mi < report.methods.size(); ++mi) {
    out << detail::pad(method_name(report.methods[mi]), kLabelWidth, true);
    for (const auto& cell : report.grid[mi])
      out << detail::fmt_fixed1(cell.mean_error_pct.to_double(), kColWidth);
    out << '\n';
  }
  out << "trials per cell: " << report.trials << ", base seed: " << report.base_seed << '\n';
  return out.str();
}

// method,rate,mean_error_pct,trials,seed  (rate as a fraction)
inline std::string render_report_csv(const Report& report) {
  std::ostringstream out;
  out << "method,rate,mean_error_pct,trials,seed\n";
  for (std::size_t mi = 0; mi < report.methods.size(); ++mi) {
    for (std::size_t ri = 0; ri < report.rates.size(); ++ri) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f", report.grid[mi][ri].mean_error_pct.to_double());
      out << method_name(report.methods[mi]) << ',' << detail::fmt_g(report.rates[ri]) << ','
          << buf << ',' << report.grid[mi][ri].trials << ',' << report.base_seed << '\n';
    }
  }
  return out.str();
}

}  // namespace arimpute
