#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arimpute/dataset.hpp"
#include "arimpute/random.hpp"

namespace arimpute {

// Attribute names are A0..A(k-1), values v0..v(n-1).
inline std::vector<std::string> generated_names(std::size_t n_attrs) {
  std::vector<std::string> names;
  for (std::size_t a = 0; a < n_attrs; ++a) names.push_back("A" + std::to_string(a));
  return names;
}

inline std::string generated_value(std::size_t v) { return "v" + std::to_string(v); }

/// Attribute 0 uniform over n_values tokens; every attribute j >= 1 is a
/// seeded random bijection of attribute 0.
inline Dataset gen_dependent(std::size_t n_cases = 2000, std::size_t n_attrs = 3,
                             std::size_t n_values = 3, std::uint64_t seed = 0) {
  if (n_attrs < 2) throw ArgumentError("gen_dependent needs at least 2 attributes");
  if (n_values < 2) throw ArgumentError("gen_dependent needs at least 2 values");
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> maps(n_attrs);
  for (std::size_t j = 1; j < n_attrs; ++j) maps[j] = random_permutation(n_values, rng);

  std::vector<Row> rows(n_cases);
  for (auto& row : rows) {
    const auto root = static_cast<std::size_t>(rng.below(n_values));
    row.reserve(n_attrs);
    row.emplace_back(generated_value(root));
    for (std::size_t j = 1; j < n_attrs; ++j) row.emplace_back(generated_value(maps[j][root]));
  }
  return Dataset(generated_names(n_attrs), std::move(rows));
}

/// Every cell i.i.d. uniform over n_values tokens.
inline Dataset gen_random(std::size_t n_cases = 2000, std::size_t n_attrs = 3,
                          std::size_t n_values = 3, std::uint64_t seed = 0) {
  if (n_attrs < 1) throw ArgumentError("gen_random needs at least 1 attribute");
  if (n_values < 2) throw ArgumentError("gen_random needs at least 2 values");
  Rng rng(seed);
  std::vector<Row> rows(n_cases);
  for (auto& row : rows) {
    row.reserve(n_attrs);
    for (std::size_t j = 0; j < n_attrs; ++j)
      row.emplace_back(generated_value(static_cast<std::size_t>(rng.below(n_values))));
  }
  return Dataset(generated_names(n_attrs), std::move(rows));
}

/// Attributes come in (driver, follower) pairs: the driver is uniform and the
/// follower is a seeded bijection of it, except that with probability `noise`
/// the follower is redrawn uniformly. An odd attribute count leaves the last
/// attribute independent.
inline Dataset gen_noisy_pairs(std::size_t n_cases = 1000, std::size_t n_attrs = 5,
                               std::size_t n_values = 3, double noise = 0.1,
                               std::uint64_t seed = 0) {
  if (n_attrs < 1) throw ArgumentError("gen_noisy_pairs needs at least 1 attribute");
  if (n_values < 2) throw ArgumentError("gen_noisy_pairs needs at least 2 values");
  if (!(noise >= 0.0 && noise <= 1.0)) throw ArgumentError("noise must lie in [0, 1]");
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> maps(n_attrs);
  for (std::size_t j = 1; j < n_attrs; j += 2) maps[j] = random_permutation(n_values, rng);

  std::vector<Row> rows(n_cases);
  for (auto& row : rows) {
    row.reserve(n_attrs);
    std::size_t driver = 0;
    for (std::size_t j = 0; j < n_attrs; ++j) {
      std::size_t v = static_cast<std::size_t>(rng.below(n_values));
      if (j % 2 == 0) {
        driver = v;
      } else if (rng.unit() >= noise) {
        v = maps[j][driver];
      }
      row.emplace_back(generated_value(v));
    }
  }
  return Dataset(generated_names(n_attrs), std::move(rows));
}

}  // namespace arimpute
