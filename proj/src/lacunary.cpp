#include <algorithm>
#include <cmath>
#include <random>

#include "diskspace/errors.hpp"
#include "diskspace/witness.hpp"

namespace diskspace {

namespace {
constexpr double kTruncationGuard = 4.0;
constexpr int kMinCheckRings = 12;
}  // namespace

LacunaryReport lacunary_classify(const GapSeries& gs, const GridConfig& cfg) {
  LacunaryReport report{Verdict::inconclusive, Verdict::inconclusive, Verdict::inconclusive,
                        Verdict::inconclusive, 0.0, true};
  if (const auto& rule = gs.tail_rule()) {
    report.bloch = rule->bounded() ? Verdict::member : Verdict::non_member;
    report.little_bloch = rule->vanishing() ? Verdict::member : Verdict::non_member;
  }

  // Ring k is dominated by exponents near 2^k; past the last summed exponent
  // the truncated profile falls off whatever the coefficients do.
  const double horizon = std::floor(std::log2(static_cast<double>(gs.exponents()[gs.truncation()]))) - kTruncationGuard;
  GridConfig check_cfg = cfg;
  check_cfg.rings = std::min(std::max(cfg.rings, kLacunaryCheckRings), static_cast<int>(horizon));
  if (check_cfg.rings < kMinCheckRings) return report;
  const AnalyticExpr f = lacunary(gs);
  const RingProfile profile = profile_from_rings(ring_sweep(f, SupQuantity::bloch, check_cfg), check_cfg);
  report.tail_estimate = profile.tail_estimate;
  const NormEstimate est = estimate_from_rings(profile.rings, check_cfg);
  if (est.divergent) {
    report.numeric_bloch = Verdict::non_member;
  } else if (est.converged) {
    report.numeric_bloch = Verdict::member;
  }
  if (report.numeric_bloch == Verdict::non_member || profile.little_bloch_excluded) {
    report.numeric_little_bloch = Verdict::non_member;
  } else if (profile.little_bloch_consistent) {
    report.numeric_little_bloch = Verdict::member;
  }

  auto contradicts = [](Verdict symbolic, Verdict numeric) {
    return symbolic != Verdict::inconclusive && numeric != Verdict::inconclusive && symbolic != numeric;
  };
  report.cross_check_agrees =
      !contradicts(report.bloch, report.numeric_bloch) && !contradicts(report.little_bloch, report.numeric_little_bloch);
  return report;
}

std::vector<LacunaryTrial> lacunary_trials(std::size_t trials, std::uint64_t seed, const GridConfig& cfg) {
  static constexpr double kPowers[] = {-1.5, -1.0, -0.5, 0.0, 0.5, 1.0};
  std::vector<LacunaryTrial> out;
  out.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(t)));
    std::uniform_int_distribution<int> pick_power(0, 5);
    std::uniform_real_distribution<double> scale_mod(0.25, 2.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * 3.141592653589793);
    LacunaryTrial trial{};
    trial.base = 2;
    trial.rule.scale = std::polar(scale_mod(rng), phase(rng));
    trial.rule.power = kPowers[pick_power(rng)];

    // Exponents base^n up to the largest that fits in 64 bits.
    std::vector<std::uint64_t> exps;
    for (std::uint64_t e = 1; exps.size() < 63; e *= trial.base) exps.push_back(e);
    const GapSeries gs = GapSeries::build(exps, {trial.rule.scale}, std::nullopt, trial.rule);

    // Oracle: sampled coefficient moduli over six decades.
    std::vector<double> mods;
    for (double n = 10.0; n <= 1e6; n *= 10.0) {
      mods.push_back(std::abs(trial.rule.scale) * std::pow(n, trial.rule.power));
    }
    const bool bounded = mods.back() <= mods.front() * (1.0 + 1e-12);
    const bool vanishing = mods.back() <= 1e-2 * mods.front();
    trial.expected_bloch = bounded ? Verdict::member : Verdict::non_member;
    trial.expected_little_bloch = vanishing ? Verdict::member : Verdict::non_member;

    trial.report = lacunary_classify(gs, cfg);
    trial.agrees = trial.report.bloch == trial.expected_bloch &&
                   trial.report.little_bloch == trial.expected_little_bloch && trial.report.cross_check_agrees;
    out.push_back(std::move(trial));
  }
  return out;
}

}  // namespace diskspace
