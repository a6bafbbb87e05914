#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "diskspace/errors.hpp"
#include "diskspace/gap_series.hpp"

namespace diskspace {

namespace {

// Ratio limit extrapolated linearly in 1/n from the last two ratios. Catches
// prefixes such as consecutive integers whose ratios stay above 1 but tend to 1.
double extrapolated_ratio(const std::vector<std::uint64_t>& e) {
  const std::size_t n = e.size();
  const double r1 = static_cast<double>(e[n - 2]) / static_cast<double>(e[n - 3]);
  const double r2 = static_cast<double>(e[n - 1]) / static_cast<double>(e[n - 2]);
  const double x1 = static_cast<double>(n - 2);
  const double x2 = static_cast<double>(n - 1);
  return (x2 * r2 - x1 * r1) / (x2 - x1);
}

}  // namespace

GapSeries GapSeries::build(std::vector<std::uint64_t> exponents, std::vector<complex> prefix,
                           std::optional<std::size_t> terms, std::optional<TailRule> tail) {
  if (exponents.size() < 2) throw ParameterError("gap series needs at least two exponents");
  if (prefix.empty()) throw ParameterError("gap series needs at least one stored coefficient");
  if (exponents.front() == 0) throw ParameterError("gap series exponents must be positive");
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < exponents.size(); ++i) {
    if (exponents[i] <= exponents[i - 1]) throw ParameterError("gap series exponents must be strictly increasing");
    min_ratio = std::min(min_ratio, static_cast<double>(exponents[i]) / static_cast<double>(exponents[i - 1]));
  }
  if (!(min_ratio > 1.0)) throw NotAGapSequence("exponent ratio does not exceed 1");
  if (exponents.size() >= 3 && extrapolated_ratio(exponents) < 1.0 + 1e-3) {
    throw NotAGapSequence("exponent ratios tend to 1 (min ratio " + std::to_string(min_ratio) + ")");
  }
  const std::size_t n_terms = terms.value_or(exponents.size() - 1);
  if (n_terms >= exponents.size()) throw ParameterError("truncation order exceeds the stored exponents");

  GapSeries gs;
  gs.exponents_ = std::move(exponents);
  gs.prefix_ = std::move(prefix);
  gs.tail_ = tail;
  gs.terms_ = n_terms;
  gs.gap_ratio_ = min_ratio;
  return gs;
}

complex GapSeries::coefficient(std::size_t n) const {
  if (n < prefix_.size()) return prefix_[n];
  return tail_ ? tail_->at(n) : complex{};
}

double GapSeries::tail_sup() const {
  double sup = 0.0;
  for (std::size_t n = terms_ + 1; n < prefix_.size(); ++n) sup = std::max(sup, std::abs(prefix_[n]));
  if (tail_) {
    if (!tail_->bounded()) return std::numeric_limits<double>::infinity();
    const std::size_t first = std::max(terms_ + 1, prefix_.size());
    sup = std::max(sup, std::abs(tail_->at(first)));
  }
  return sup;
}

GapSeries::Value GapSeries::eval(const DiskPoint& p) const {
  complex sum{};
  for (std::size_t n = 0; n <= terms_; ++n) {
    const complex a = coefficient(n);
    if (a == complex{}) continue;
    const complex zp = p.pow(exponents_[n]);
    if (zp == complex{}) break;  // later exponents underflow as well
    sum += a * zp;
  }
  // The next exponent is at least e_N + 1 when it is not stored.
  const double next = terms_ + 1 < exponents_.size() ? static_cast<double>(exponents_[terms_ + 1])
                                                     : static_cast<double>(exponents_[terms_]) + 1.0;
  const double sup = tail_sup();
  double bound = 0.0;
  if (std::isinf(sup)) {
    bound = sup;
  } else if (sup > 0.0) {
    bound = sup * std::exp(next * std::log1p(-p.offset())) / p.offset();
  }
  return {sum, bound};
}

complex GapSeries::deriv(const DiskPoint& p) const {
  complex sum{};
  for (std::size_t n = 0; n <= terms_; ++n) {
    const complex a = coefficient(n);
    if (a == complex{}) continue;
    const std::uint64_t e = exponents_[n];
    const complex zp = p.pow(e - 1);
    if (zp == complex{} && e > 1) break;
    sum += a * static_cast<double>(e) * zp;
  }
  return sum;
}

}  // namespace diskspace
