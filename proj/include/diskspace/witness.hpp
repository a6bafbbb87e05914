#pragma once

// Membership verdicts and constructive witnesses for the Bloch, little Bloch,
// H-infinity and Bergman spaces.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diskspace/expr.hpp"
#include "diskspace/gap_series.hpp"
#include "diskspace/norm.hpp"

namespace diskspace {

enum class Verdict { member, non_member, inconclusive };
const char* verdict_name(Verdict v);

/// A point z with a quantity strictly above the target. Construction checks
/// achieved > target.
class WitnessResult {
 public:
  WitnessResult(double target, DiskPoint point, double achieved);

  double target() const { return target_; }
  const DiskPoint& point() const { return point_; }
  double achieved() const { return achieved_; }

 private:
  double target_;
  DiskPoint point_;
  double achieved_;
};

struct WitnessOptions {
  /// The search aims for target + margin, then accepts anything above target.
  double margin = 1.0;
  /// Largest log2(1 / (1 - |z|)) reached by the radial march.
  double max_depth = 1000.0;
};

/// Point with |f(z)| > n. Throws SearchExhausted if none is found.
WitnessResult unboundedness_witness(const AnalyticExpr& f, double n, const GridConfig& cfg = {},
                                    const WitnessOptions& opt = {});
/// Point with (1 - |z|^2)|f'(z)| > n. Throws SearchExhausted if none is found.
WitnessResult seminorm_witness(const AnalyticExpr& f, double n, const GridConfig& cfg = {},
                               const WitnessOptions& opt = {});

/// h + (eps/3) log(1 - z)
AnalyticExpr perturb_to_unbounded(const AnalyticExpr& h, double eps);

struct BergmanRequest {
  double p = 2.0;
  std::optional<double> alpha;
};

struct BergmanVerdict {
  BergmanRequest request;
  Verdict verdict;
  NormEstimate estimate;
};

struct ClassificationReport {
  Verdict bloch = Verdict::inconclusive;
  Verdict little_bloch = Verdict::inconclusive;
  Verdict hinf = Verdict::inconclusive;
  std::vector<BergmanVerdict> bergman;
  NormEstimate bloch_estimate;
  NormEstimate sup_estimate;
  RingProfile profile;
  std::vector<std::string> notes;
};

/// Runs the estimators and maps converged / divergent outcomes to verdicts.
/// Divergence is numerical evidence, not proof; member(H-infinity) is never
/// reported when any trace diverged. An unsettled sup trace becomes
/// non-member(H-infinity) when unboundedness witnesses exist at 2, 4, ..., 32
/// times the grid estimate.
ClassificationReport classify(const AnalyticExpr& f, const std::vector<BergmanRequest>& bergman,
                              const GridConfig& cfg = {});

struct RankResult {
  std::size_t rank;
  /// sigma_max / sigma_min over the |fs| singular values; +inf when singular.
  double condition;
  std::vector<double> singular_values;
};

/// Numerical rank of [c_j(f_i)], j = 1..N, with threshold N * eps * sigma_max.
/// Full rank means the family is not numerically dependent at truncation N.
RankResult independence_rank(const std::vector<AnalyticExpr>& fs, std::size_t N);

struct SumBoundCheck {
  double seminorm;
  double bound;  ///< 2 sum |c_k|
  bool holds;
};
inline constexpr double kSumBoundTolerance = 1e-3;

/// Seminorm of sum c_k log(1 - alpha_k z) against 2 sum |c_k|.
SumBoundCheck bound_2sum_check(const std::vector<complex>& coeffs, const std::vector<complex>& alphas,
                               const GridConfig& cfg = {});

struct SumBoundTrial {
  std::vector<complex> coeffs;
  std::vector<complex> alphas;
  SumBoundCheck check;
};
/// Random combinations with 1..max_terms terms, seeded per trial.
std::vector<SumBoundTrial> bound_2sum_trials(std::size_t trials, std::size_t max_terms, std::uint64_t seed,
                                             const GridConfig& cfg = {});

struct QuotientCheck {
  double limit;
  std::size_t leading_index;  ///< index of the coefficient whose ray is followed
  std::vector<std::pair<double, double>> samples;  ///< (m, (1 - |w_m|^2)|f'(w_m)|)
  bool nonzero_class;
};
inline constexpr double kQuotientTolerance = 1e-2;

/// Follows w_m = conj(alpha_1)(1 - 1/m) for f = sum beta_k log(1 - alpha_k z),
/// where index 1 is the first nonzero coefficient, and Richardson-extrapolates
/// the weighted derivative from m in {m_max/4, m_max/2, m_max}.
QuotientCheck quotient_independence_check(const std::vector<complex>& betas, const std::vector<complex>& alphas,
                                          std::size_t m_max);

struct LacunaryReport {
  Verdict bloch;
  Verdict little_bloch;
  /// Verdicts read off the ring sweep of the truncated series.
  Verdict numeric_bloch;
  Verdict numeric_little_bloch;
  double tail_estimate;
  /// No numeric verdict contradicts the symbolic one.
  bool cross_check_agrees;
};

inline constexpr int kLacunaryCheckRings = 40;

/// Coefficient criterion: Bloch iff (a_n) bounded, little Bloch iff a_n -> 0,
/// decided from the tail rule. Without a tail rule both are inconclusive. The
/// cross-check sweeps max(cfg.rings, kLacunaryCheckRings) rings, cut back to
/// four rings below log2 of the last summed exponent; with fewer than twelve
/// usable rings the numeric verdicts stay inconclusive.
LacunaryReport lacunary_classify(const GapSeries& gs, const GridConfig& cfg = {});

struct LacunaryTrial {
  std::uint64_t base;
  TailRule rule;
  LacunaryReport report;
  Verdict expected_bloch;
  Verdict expected_little_bloch;
  bool agrees;
};
/// Random gap series with base^n exponents and tail rules; expected verdicts
/// come from sampling |a_n| directly.
std::vector<LacunaryTrial> lacunary_trials(std::size_t trials, std::uint64_t seed, const GridConfig& cfg = {});

/// splitmix64 step, used to derive per-trial seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace diskspace
