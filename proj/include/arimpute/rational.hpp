#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "arimpute/error.hpp"

namespace arimpute {

// Non-negative count ratio kept exactly as num/den (not reduced).
// Comparisons cross-multiply, so 2/4 == 1/2 and no float enters a decision.
class Ratio {
 public:
  constexpr Ratio() = default;
  constexpr Ratio(std::uint64_t num, std::uint64_t den) : num_(num), den_(den) {
    if (den == 0) throw ArgumentError("ratio with zero denominator");
  }

  constexpr std::uint64_t num() const noexcept { return num_; }
  constexpr std::uint64_t den() const noexcept { return den_; }

  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  Ratio reduced() const {
    const auto g = std::gcd(num_, den_);
    return g == 0 ? *this : Ratio(num_ / g, den_ / g);
  }

  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) noexcept {
    const auto lhs = static_cast<unsigned __int128>(a.num_) * b.den_;
    const auto rhs = static_cast<unsigned __int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }
  friend bool operator==(const Ratio& a, const Ratio& b) noexcept {
    return (a <=> b) == std::strong_ordering::equal;
  }

  std::string to_string() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Ratio& r) {
    return os << r.to_string();
  }

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

}  // namespace arimpute
