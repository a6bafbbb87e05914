#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "diskspace/disk_point.hpp"

namespace diskspace {

/// Coefficient rule for the terms past the stored prefix:
/// a_n = scale * n^power for n >= prefix length.
struct TailRule {
  complex scale{1.0, 0.0};
  double power = 0.0;

  complex at(std::size_t n) const { return scale * std::pow(static_cast<double>(n), power); }
  bool bounded() const { return scale == complex{} || power <= 0.0; }
  bool vanishing() const { return scale == complex{} || power < 0.0; }
};

/// Lacunary series sum_n a_n z^{e_n} over a gap sequence of exponents.
class GapSeries {
 public:
  /// Validates the exponents and records the gap ratio. `terms` is the index
  /// of the last term summed (the truncation order); it defaults to the last
  /// stored exponent. Throws NotAGapSequence when the exponent ratios do not
  /// stay above 1, ParameterError for malformed input.
  static GapSeries build(std::vector<std::uint64_t> exponents, std::vector<complex> prefix,
                         std::optional<std::size_t> terms = std::nullopt,
                         std::optional<TailRule> tail = std::nullopt);

  const std::vector<std::uint64_t>& exponents() const { return exponents_; }
  const std::vector<complex>& prefix() const { return prefix_; }
  const std::optional<TailRule>& tail_rule() const { return tail_; }
  std::size_t truncation() const { return terms_; }
  /// Smallest ratio e_{n+1}/e_n over the stored exponents.
  double gap_ratio() const { return gap_ratio_; }

  /// a_n: the stored prefix, then the tail rule (zero when no rule is declared).
  complex coefficient(std::size_t n) const;
  /// sup_{n > truncation} |a_n|; +inf for growing tail rules.
  double tail_sup() const;

  struct Value {
    complex value;
    double tail_bound;  ///< bound on sum_{n > N} |a_n| |z|^{e_n}
  };
  Value eval(const DiskPoint& p) const;
  complex deriv(const DiskPoint& p) const;

 private:
  GapSeries() = default;

  std::vector<std::uint64_t> exponents_;
  std::vector<complex> prefix_;
  std::optional<TailRule> tail_;
  std::size_t terms_ = 0;
  double gap_ratio_ = 0.0;
};

}  // namespace diskspace
