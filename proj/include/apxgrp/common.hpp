#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>

namespace apxgrp {

/// Non-negative rational number kept in lowest terms.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  Ratio() = default;
  Ratio(std::uint64_t n, std::uint64_t d) : num(n), den(d) {
    const std::uint64_t g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }
  bool operator==(const Ratio&) const = default;
};

inline constexpr std::size_t kDefaultElementBudget = 50'000'000;

/// Resource limits and parallelism shared by every set-producing operation.
/// Results never depend on `threads`.
struct ExecOptions {
  std::size_t element_budget = kDefaultElementBudget;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;
};

}  // namespace apxgrp
