#pragma once

// The algebra E = C^d with pointwise product and sup norm, maps E -> E built
// from simple nodes, and power-series fitting along the diagonal.

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "diskspace/disk_point.hpp"
#include "diskspace/norm.hpp"

namespace diskspace {

class AlgebraElement {
 public:
  /// Throws ParameterError when d < 2.
  explicit AlgebraElement(std::vector<complex> components);

  static AlgebraElement identity(std::size_t d);
  static AlgebraElement filled(std::size_t d, complex c);

  std::size_t dim() const { return c_.size(); }
  const std::vector<complex>& components() const { return c_; }
  complex operator[](std::size_t i) const { return c_[i]; }

  /// max_i |z_i|
  double norm() const;
  bool invertible() const;

  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  /// Pointwise product.
  AlgebraElement operator*(const AlgebraElement& o) const;
  AlgebraElement operator*(complex s) const;
  /// Pointwise power z^n.
  AlgebraElement pow(unsigned n) const;

 private:
  void require_same_dim(const AlgebraElement& o) const;
  std::vector<complex> c_;
};

/// phi(z) = sum_i w_i z_i
class LinearFunctional {
 public:
  explicit LinearFunctional(std::vector<complex> weights);
  const std::vector<complex>& weights() const { return w_; }
  std::size_t dim() const { return w_.size(); }
  complex operator()(const AlgebraElement& z) const;
  /// Operator norm against the sup norm: sum_i |w_i|.
  double norm() const;

 private:
  std::vector<complex> w_;
};

/// Minimal-norm weights with phi(e) = 1 and phi(x0) = 0. Throws
/// ParameterError when x0 is a multiple of e or is not invertible.
LinearFunctional make_separating_functional(const AlgebraElement& x0);

/// Coefficient sequence a_n in E.
struct CoefficientRule {
  enum class Kind { explicit_list, geometric, inv_factorial, exp_neg_square };
  Kind kind = Kind::explicit_list;
  /// explicit_list: a_0, a_1, ...; zero past the end.
  std::vector<AlgebraElement> terms;
  /// geometric: a_n = omega^n base.
  complex omega{0.0, 0.0};
  /// exp_neg_square: a_n = q^(n^2) base.
  double q = 0.5;
  /// Multiplier for the closed-form kinds (usually e).
  std::optional<AlgebraElement> base;

  std::size_t dim() const;
  AlgebraElement at(std::size_t n) const;
  /// log ||a_n||, -inf for a zero term. Closed form for the analytic kinds.
  double log_norm(std::size_t n) const;
};

struct VectorMap;
using VectorMapPtr = std::shared_ptr<const VectorMap>;

namespace vmap {
/// F(z)_i = z_{perm[i]}
struct Permutation {
  std::vector<std::size_t> perm;
};
/// F(z) = sum_k c_k z^k, pointwise powers.
struct PointwisePoly {
  std::vector<AlgebraElement> coeffs;
};
/// F(z) = sum_{n <= N} a_n z^n with a_n from a rule.
struct PowerSeries {
  CoefficientRule rule;
  std::size_t terms;
};
/// F(z) = sum_{n <= N} a_n phi(z)^n
struct FunctionalPower {
  LinearFunctional phi;
  CoefficientRule rule;
  std::size_t terms;
};
struct Sum {
  std::vector<VectorMapPtr> children;
};
/// F(alpha z)
struct ScaleArg {
  VectorMapPtr child;
  complex alpha;
};
}  // namespace vmap

struct VectorMap {
  std::variant<vmap::Permutation, vmap::PointwisePoly, vmap::PowerSeries, vmap::FunctionalPower, vmap::Sum,
               vmap::ScaleArg>
      data;
  std::size_t dim;
};

VectorMapPtr make_permutation(std::vector<std::size_t> perm);
VectorMapPtr make_pointwise_poly(std::vector<AlgebraElement> coeffs);
VectorMapPtr make_power_series(CoefficientRule rule, std::size_t terms);
VectorMapPtr make_functional_power(LinearFunctional phi, CoefficientRule rule, std::size_t terms);
VectorMapPtr make_sum(std::vector<VectorMapPtr> children);
VectorMapPtr make_scale_arg(VectorMapPtr child, complex alpha);

/// Radius of the sup-norm ball on which the map's series converge (+inf when
/// every series is finite or entire). Geometric rules converge only for
/// |omega| ||z|| < 1, or |omega| |phi(z)| < 1 for functional powers.
double convergence_radius(const VectorMap& F);
/// Throws DomainError outside the convergence ball, ParameterError on a
/// dimension mismatch.
AlgebraElement evaluate(const VectorMap& F, const AlgebraElement& z);

struct LorchFit {
  std::vector<AlgebraElement> coeffs;  ///< a_0..a_N
  double rho;
  std::size_t samples;                 ///< M
  double decay_estimate;               ///< max over the last half of ||a_n||^(1/n)
  /// Largest ||a_n - a'_n|| against a refit with 2M samples.
  double aliasing_gap;
  bool aliasing_detected;
};
inline constexpr double kAliasingThreshold = 1e-8;

/// a_n = (1/M) sum_j F(lambda_j e) lambda_j^(-n), lambda_j = rho e^(2 pi i j / M).
/// Throws ParameterError unless M >= 2(N + 1) and rho > 0.
LorchFit lorch_fit(const VectorMap& F, std::size_t N, double rho = 1.0, std::optional<std::size_t> M = std::nullopt);

/// sum_n a_n z^n
AlgebraElement lorch_eval(const LorchFit& fit, const AlgebraElement& z);

struct ResidualReport {
  std::vector<double> deviations;  ///< ||F(z) - sum a_n z^n|| per test point
  double max_deviation;
};
ResidualReport lorch_residual(const VectorMap& F, const LorchFit& fit, const std::vector<AlgebraElement>& points);

enum class LorchVerdict { consistent, non_lorch_evidence, inconclusive };
const char* lorch_verdict_name(LorchVerdict v);
inline constexpr double kResidualThreshold = 1e-4;

struct LorchAssessment {
  LorchFit fit;
  ResidualReport residual;
  ResidualReport doubled_residual;  ///< with 2N and 2M
  LorchVerdict verdict;
};
/// Fits at (N, M) and (2N, 2M); a residual above kResidualThreshold at both
/// is non-Lorch evidence, below it at both is consistent.
LorchAssessment lorch_assess(const VectorMap& F, std::size_t N, double rho, std::optional<std::size_t> M,
                             const std::vector<AlgebraElement>& points);

struct DecayReport {
  double estimate;             ///< max over n in (N/2, N] of ||a_n||^(1/n)
  std::vector<double> trend;   ///< ||a_n||^(1/n) over that range
  bool decreasing;
  bool entire_consistent;
};
inline constexpr double kDecayEpsilon = 0.05;
/// Throws ParameterError for N < 8.
DecayReport coefficient_decay(const CoefficientRule& rule, std::size_t N);

/// g(z) = sum_{n <= N} b_n phi(z)^n. Throws ParameterError when the rule does
/// not decay (coefficient_decay over 256 terms is not entire-consistent).
VectorMapPtr build_nonlorch_g(const CoefficientRule& b, const LinearFunctional& phi, std::size_t N);

struct DiagonalReport {
  std::vector<complex> d;
  double max_abs;
  bool all_zero;
  /// Rank of the leading Vandermonde system [beta_k^n], n < length(c).
  std::size_t vandermonde_rank;
  bool certifies_zero;  ///< all_zero with a full-rank Vandermonde system
};
/// d_n = sum_k c_k beta_k^n for n = 0..n_max. Throws ParameterError for
/// repeated betas, betas outside (0, 1) or n_max < length(c).
DiagonalReport diagonal_coeff_criterion(const std::vector<complex>& c, const std::vector<double>& beta,
                                        std::size_t n_max);

struct DiagonalTrial {
  std::vector<complex> c;
  std::vector<double> beta;
  DiagonalReport report;
};
/// Random nonzero c with distinct betas; every trial should detect c != 0.
std::vector<DiagonalTrial> diagonal_trials(std::size_t trials, std::uint64_t seed);

/// Lower estimate of sup ||F(z)|| over ||z|| <= R from phase-grid corners
/// and seeded random points; the trace is the running maximum.
NormEstimate hb_ball_norm(const VectorMap& F, double R, std::size_t samples, std::uint64_t seed = 0x5eedULL);

}  // namespace diskspace
