#pragma once

// Numerical estimators for Bloch, sup, multiplier and Bergman quantities.
//
// Sup-type quantities are sampled on rings |z| = r_k = 1 - 2^{-k}, k = 0..K,
// with M equispaced angles per ring. Around each ring's argmax a
// golden-section search refines the angle, then the radius between the
// neighbouring rings, then the angle again. Every reported value is attained
// at an actual point, so sup estimates are lower bounds.

#include <cstdint>
#include <optional>
#include <vector>

#include "diskspace/disk_point.hpp"
#include "diskspace/expr.hpp"

namespace diskspace {

struct GridConfig {
  int rings = 20;                ///< K
  int angles = 4096;             ///< M, a power of two >= 64
  int refine_iterations = 60;    ///< golden-section steps per coordinate sweep
  int quad_order = 8;            ///< Gauss-Legendre nodes per radial panel
  double rtol = 1e-4;            ///< convergence: last two levels agree to rtol
  double divergence_cap = 1e8;
  double little_bloch_eps = 1e-3;    ///< profile tail below this reads as little Bloch
  double little_bloch_floor = 0.1;   ///< profile tail above this reads as not little Bloch
  std::uint64_t seed = 0x5eedULL;

  /// Throws ParameterError unless 4 <= K <= 60 and M is a power of two >= 64.
  void validate() const;
};

/// Samples and refinement result for one ring.
struct RingRecord {
  int k;
  double radius;        ///< r_k
  double ring_max;      ///< max over the M grid angles
  double refined_max;   ///< after local refinement, >= ring_max
  DiskPoint argmax;
};

struct NormEstimate {
  double value = 0.0;
  bool infinite = false;
  /// Sup-type: running maximum after each ring. Quadrature: partial norms after each panel.
  std::vector<double> trace;
  bool converged = false;
  bool divergent = false;
  std::optional<DiskPoint> achieved_at;
  std::vector<RingRecord> rings;
  /// Quadrature only: the coarse and fine totals compared for convergence.
  std::vector<double> levels;
};

struct RingProfile {
  std::vector<RingRecord> rings;
  /// Limit of the ring maxima as r -> 1: the extrapolated limit, capped by
  /// the last ring maximum and floored at zero.
  double tail_estimate = 0.0;
  /// Ring maxima non-increasing over the last five rings.
  bool tail_decreasing = false;
  /// Mean of the last four ring maxima over the mean of rings K-11..K-8.
  double tail_ratio = 1.0;
  bool little_bloch_consistent = false;
  /// Tail at or above the floor and not decaying (tail_ratio >= kFlatTailRatio).
  bool little_bloch_excluded = false;
};
inline constexpr double kFlatTailRatio = 0.95;

/// sup (1 - |z|^2) |f'(z)|
NormEstimate bloch_seminorm(const AnalyticExpr& f, const GridConfig& cfg = {});
/// |f(0)| + bloch seminorm
NormEstimate bloch_norm(const AnalyticExpr& f, const GridConfig& cfg = {});
RingProfile ring_profile(const AnalyticExpr& f, const GridConfig& cfg = {});
/// Profile summary of already swept Bloch-quantity rings.
RingProfile profile_from_rings(std::vector<RingRecord> rings, const GridConfig& cfg);
NormEstimate sup_norm_estimate(const AnalyticExpr& f, const GridConfig& cfg = {});
/// sup (1 - |z|^2) |f'(z)| log(1 / (1 - |z|^2))
NormEstimate multiplier_bound(const AnalyticExpr& f, const GridConfig& cfg = {});
/// Weighted Bergman norm ((1/pi) int |f|^p dA_alpha)^{1/p}; unweighted when
/// weight_alpha is empty. Throws ParameterError for p < 1 or alpha <= -1.
NormEstimate bergman_norm(const AnalyticExpr& f, double p, std::optional<double> weight_alpha = std::nullopt,
                          const GridConfig& cfg = {});
/// Bloch norm of f(r z) - f(z).
NormEstimate dilate_deviation(const AnalyticExpr& f, double r, const GridConfig& cfg = {});

struct GrowthCheck {
  double lhs;         ///< max_{|z| <= r} |f(z)|
  double rhs;         ///< M_r * bloch norm
  double growth_constant;  ///< M_r = 1 + log((1 + r)/(1 - r)) / 2
  double bloch_norm;
  bool holds;
};
inline constexpr double kGrowthTolerance = 1e-6;
GrowthCheck growth_bound_check(const AnalyticExpr& f, double r, const GridConfig& cfg = {});

/// Quantity maximised by the ring sweeps.
enum class SupQuantity { value, bloch, multiplier };

/// Ring sweep shared by the sup-type estimators.
std::vector<RingRecord> ring_sweep(const AnalyticExpr& f, SupQuantity q, const GridConfig& cfg);
/// Weight times |f| or |f'| at one point.
double sup_quantity(const AnalyticExpr& f, SupQuantity q, const DiskPoint& p);

/// Sup-type estimate from swept rings: running maximum, convergence and
/// divergence verdicts.
NormEstimate estimate_from_rings(std::vector<RingRecord> rings, const GridConfig& cfg);

/// Limit of a sequence of ring maxima, fitted as L + a/k + b/k^2 by least
/// squares over the last (up to) eight rings; returns L.
double extrapolate_ring_limit(const std::vector<RingRecord>& rings);

/// Divergence verdict for a sequence of per-level maxima: strictly
/// increasing over the last five levels and either past `cap` or with
/// increments that do not shrink (ratio of consecutive increments >= 0.95).
bool growth_diverges(const std::vector<double>& levels, double cap);

}  // namespace diskspace
