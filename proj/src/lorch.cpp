#include "diskspace/lorch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "diskspace/errors.hpp"
#include "diskspace/kernels.hpp"
#include "diskspace/parallel.hpp"
#include "diskspace/witness.hpp"

namespace diskspace {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dim(std::size_t have, std::size_t want) {
  if (have != want) {
    throw ParameterError("dimension mismatch: expected " + std::to_string(want) + ", got " + std::to_string(have));
  }
}

double rule_radius(const CoefficientRule& rule) {
  if (rule.kind == CoefficientRule::Kind::geometric && rule.omega != complex{}) return 1.0 / std::abs(rule.omega);
  return kInf;
}

void validate_rule(const CoefficientRule& rule) {
  (void)rule.dim();
  if (rule.kind == CoefficientRule::Kind::exp_neg_square && !(rule.q > 0.0 && rule.q < 1.0)) {
    throw ParameterError("exp_neg_square ratio q must lie in (0, 1)");
  }
  for (const auto& t : rule.terms) require_dim(t.dim(), rule.dim());
}

}  // namespace

VectorMapPtr make_permutation(std::vector<std::size_t> perm) {
  const std::size_t d = perm.size();
  std::vector<bool> seen(d, false);
  for (std::size_t p : perm) {
    if (p >= d || seen[p]) throw ParameterError("permutation must list each index 0..d-1 once");
    seen[p] = true;
  }
  if (d < 2) throw ParameterError("algebra dimension must be at least 2");
  return std::make_shared<const VectorMap>(VectorMap{vmap::Permutation{std::move(perm)}, d});
}

VectorMapPtr make_pointwise_poly(std::vector<AlgebraElement> coeffs) {
  if (coeffs.empty()) throw ParameterError("pointwise polynomial needs at least one coefficient");
  const std::size_t d = coeffs.front().dim();
  for (const auto& c : coeffs) require_dim(c.dim(), d);
  return std::make_shared<const VectorMap>(VectorMap{vmap::PointwisePoly{std::move(coeffs)}, d});
}

VectorMapPtr make_power_series(CoefficientRule rule, std::size_t terms) {
  validate_rule(rule);
  const std::size_t d = rule.dim();
  return std::make_shared<const VectorMap>(VectorMap{vmap::PowerSeries{std::move(rule), terms}, d});
}

VectorMapPtr make_functional_power(LinearFunctional phi, CoefficientRule rule, std::size_t terms) {
  validate_rule(rule);
  const std::size_t d = rule.dim();
  require_dim(phi.dim(), d);
  return std::make_shared<const VectorMap>(VectorMap{vmap::FunctionalPower{std::move(phi), std::move(rule), terms}, d});
}

VectorMapPtr make_sum(std::vector<VectorMapPtr> children) {
  if (children.empty()) throw ParameterError("sum needs at least one child");
  const std::size_t d = children.front()->dim;
  for (const auto& c : children) require_dim(c->dim, d);
  return std::make_shared<const VectorMap>(VectorMap{vmap::Sum{std::move(children)}, d});
}

VectorMapPtr make_scale_arg(VectorMapPtr child, complex alpha) {
  if (alpha == complex{}) throw ParameterError("argument scale must be nonzero");
  const std::size_t d = child->dim;
  return std::make_shared<const VectorMap>(VectorMap{vmap::ScaleArg{std::move(child), alpha}, d});
}

double convergence_radius(const VectorMap& F) {
  return std::visit(
      [](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, vmap::PowerSeries>) {
          return rule_radius(n.rule);
        } else if constexpr (std::is_same_v<T, vmap::FunctionalPower>) {
          const double r = rule_radius(n.rule);
          return std::isinf(r) ? r : r / n.phi.norm();
        } else if constexpr (std::is_same_v<T, vmap::Sum>) {
          double r = kInf;
          for (const auto& c : n.children) r = std::min(r, convergence_radius(*c));
          return r;
        } else if constexpr (std::is_same_v<T, vmap::ScaleArg>) {
          return convergence_radius(*n.child) / std::abs(n.alpha);
        } else {
          return kInf;
        }
      },
      F.data);
}

AlgebraElement evaluate(const VectorMap& F, const AlgebraElement& z) {
  require_dim(z.dim(), F.dim);
  return std::visit(
      [&](const auto& n) -> AlgebraElement {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, vmap::Permutation>) {
          std::vector<complex> out(F.dim);
          for (std::size_t i = 0; i < F.dim; ++i) out[i] = z[n.perm[i]];
          return AlgebraElement(std::move(out));
        } else if constexpr (std::is_same_v<T, vmap::PointwisePoly>) {
          AlgebraElement acc = n.coeffs.back();
          for (std::size_t k = n.coeffs.size() - 1; k-- > 0;) acc = acc * z + n.coeffs[k];
          return acc;
        } else if constexpr (std::is_same_v<T, vmap::PowerSeries>) {
          if (!(z.norm() < rule_radius(n.rule))) {
            throw DomainError("point lies outside the convergence ball of radius " + std::to_string(rule_radius(n.rule)));
          }
          AlgebraElement acc = n.rule.at(0);
          AlgebraElement power = AlgebraElement::identity(F.dim);
          for (std::size_t k = 1; k <= n.terms; ++k) {
            power = power * z;
            acc = acc + n.rule.at(k) * power;
          }
          return acc;
        } else if constexpr (std::is_same_v<T, vmap::FunctionalPower>) {
          const complex t = n.phi(z);
          if (!(std::abs(t) < rule_radius(n.rule))) {
            throw DomainError("phi(z) lies outside the convergence disk of the coefficient rule");
          }
          AlgebraElement acc = n.rule.at(0);
          complex power = 1.0;
          for (std::size_t k = 1; k <= n.terms; ++k) {
            power *= t;
            acc = acc + n.rule.at(k) * power;
          }
          return acc;
        } else if constexpr (std::is_same_v<T, vmap::Sum>) {
          AlgebraElement acc = evaluate(*n.children.front(), z);
          for (std::size_t k = 1; k < n.children.size(); ++k) acc = acc + evaluate(*n.children[k], z);
          return acc;
        } else {
          return evaluate(*n.child, z * n.alpha);
        }
      },
      F.data);
}

namespace {

std::vector<AlgebraElement> fit_coefficients(const VectorMap& F, std::size_t N, double rho, std::size_t M) {
  const std::size_t d = F.dim;
  const double step = 2.0 * std::numbers::pi / static_cast<double>(M);
  std::vector<complex> twiddle(M);
  for (std::size_t k = 0; k < M; ++k) twiddle[k] = std::polar(1.0, step * static_cast<double>(k));

  // samples[i] holds component i of F(lambda_j e) for j = 0..M-1.
  std::vector<std::vector<double>> s_re(d, std::vector<double>(M)), s_im(d, std::vector<double>(M));
  parallel_for(M, [&](std::size_t j) {
    const AlgebraElement v = evaluate(F, AlgebraElement::filled(d, rho * twiddle[j]));
    for (std::size_t i = 0; i < d; ++i) {
      s_re[i][j] = v[i].real();
      s_im[i][j] = v[i].imag();
    }
  });

  std::vector<AlgebraElement> coeffs;
  std::vector<double> b_re(M), b_im(M);
  for (std::size_t n = 0; n <= N; ++n) {
    for (std::size_t j = 0; j < M; ++j) {
      const complex w = std::conj(twiddle[(j * n) % M]);
      b_re[j] = w.real();
      b_im[j] = w.imag();
    }
    const double scale = std::pow(rho, -static_cast<double>(n)) / static_cast<double>(M);
    std::vector<complex> a(d);
    for (std::size_t i = 0; i < d; ++i) a[i] = kernels::complex_dot(s_re[i], s_im[i], b_re, b_im) * scale;
    coeffs.emplace_back(std::move(a));
  }
  return coeffs;
}

double decay_of(const std::vector<AlgebraElement>& coeffs) {
  const std::size_t N = coeffs.size() - 1;
  double est = 0.0;
  for (std::size_t n = std::max<std::size_t>(1, N / 2 + 1); n <= N; ++n) {
    const double v = coeffs[n].norm();
    if (v > 0.0) est = std::max(est, std::pow(v, 1.0 / static_cast<double>(n)));
  }
  return est;
}

}  // namespace

LorchFit lorch_fit(const VectorMap& F, std::size_t N, double rho, std::optional<std::size_t> M) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ParameterError("sample radius rho must be positive");
  const std::size_t samples = M.value_or(4 * (N + 1));
  if (samples < 2 * (N + 1)) throw ParameterError("sample count M must be at least 2(N + 1)");
  LorchFit fit;
  fit.rho = rho;
  fit.samples = samples;
  fit.coeffs = fit_coefficients(F, N, rho, samples);
  const auto refit = fit_coefficients(F, N, rho, 2 * samples);
  fit.aliasing_gap = 0.0;
  for (std::size_t n = 0; n <= N; ++n) fit.aliasing_gap = std::max(fit.aliasing_gap, (fit.coeffs[n] - refit[n]).norm());
  fit.aliasing_detected = fit.aliasing_gap > kAliasingThreshold;
  fit.decay_estimate = decay_of(fit.coeffs);
  return fit;
}

AlgebraElement lorch_eval(const LorchFit& fit, const AlgebraElement& z) {
  AlgebraElement acc = fit.coeffs.front();
  AlgebraElement power = AlgebraElement::identity(z.dim());
  for (std::size_t n = 1; n < fit.coeffs.size(); ++n) {
    power = power * z;
    acc = acc + fit.coeffs[n] * power;
  }
  return acc;
}

ResidualReport lorch_residual(const VectorMap& F, const LorchFit& fit, const std::vector<AlgebraElement>& points) {
  ResidualReport r{{}, 0.0};
  for (const auto& z : points) {
    const double dev = (evaluate(F, z) - lorch_eval(fit, z)).norm();
    r.deviations.push_back(dev);
    r.max_deviation = std::max(r.max_deviation, dev);
  }
  return r;
}

const char* lorch_verdict_name(LorchVerdict v) {
  switch (v) {
    case LorchVerdict::consistent:
      return "consistent";
    case LorchVerdict::non_lorch_evidence:
      return "non-lorch-evidence";
    case LorchVerdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

LorchAssessment lorch_assess(const VectorMap& F, std::size_t N, double rho, std::optional<std::size_t> M,
                             const std::vector<AlgebraElement>& points) {
  LorchAssessment a;
  a.fit = lorch_fit(F, N, rho, M);
  a.residual = lorch_residual(F, a.fit, points);
  const LorchFit doubled = lorch_fit(F, 2 * N + 1, rho, 2 * a.fit.samples);
  a.doubled_residual = lorch_residual(F, doubled, points);
  const bool hi1 = a.residual.max_deviation > kResidualThreshold;
  const bool hi2 = a.doubled_residual.max_deviation > kResidualThreshold;
  a.verdict = hi1 && hi2 ? LorchVerdict::non_lorch_evidence
              : (!hi1 && !hi2) ? LorchVerdict::consistent
                               : LorchVerdict::inconclusive;
  return a;
}

DecayReport coefficient_decay(const CoefficientRule& rule, std::size_t N) {
  if (N < 8) throw ParameterError("coefficient_decay needs N >= 8");
  DecayReport r{0.0, {}, true, false};
  for (std::size_t n = N / 2 + 1; n <= N; ++n) {
    const double ln = rule.log_norm(n);
    const double v = std::isinf(ln) ? 0.0 : std::exp(ln / static_cast<double>(n));
    if (!r.trend.empty() && v > r.trend.back() * (1.0 + 1e-12)) r.decreasing = false;
    r.trend.push_back(v);
    r.estimate = std::max(r.estimate, v);
  }
  r.entire_consistent = r.decreasing && r.estimate < kDecayEpsilon;
  return r;
}

VectorMapPtr build_nonlorch_g(const CoefficientRule& b, const LinearFunctional& phi, std::size_t N) {
  if (b.kind != CoefficientRule::Kind::explicit_list && !coefficient_decay(b, 256).entire_consistent) {
    throw ParameterError("coefficients b_n must satisfy ||b_n||^(1/n) -> 0");
  }
  return make_functional_power(phi, b, N);
}

DiagonalReport diagonal_coeff_criterion(const std::vector<complex>& c, const std::vector<double>& beta,
                                        std::size_t n_max) {
  const std::size_t L = c.size();
  if (L == 0 || beta.size() != L) throw ParameterError("need matching, nonempty c and beta lists");
  if (n_max < L) throw ParameterError("n_max must be at least the number of coefficients");
  for (std::size_t i = 0; i < L; ++i) {
    if (!(beta[i] > 0.0 && beta[i] < 1.0)) throw ParameterError("betas must lie in (0, 1)");
    for (std::size_t j = 0; j < i; ++j) {
      if (beta[i] == beta[j]) throw ParameterError("betas must be pairwise distinct");
    }
  }
  DiagonalReport r{};
  double scale = 0.0;
  for (complex v : c) scale += std::abs(v);
  scale = std::max(1.0, scale);
  std::vector<double> powers(L, 1.0);
  for (std::size_t n = 0; n <= n_max; ++n) {
    complex s = 0.0;
    for (std::size_t k = 0; k < L; ++k) s += c[k] * powers[k];
    r.d.push_back(s);
    r.max_abs = std::max(r.max_abs, std::abs(s));
    for (std::size_t k = 0; k < L; ++k) powers[k] *= beta[k];
  }
  r.all_zero = r.max_abs < 1e-12 * scale;

  Eigen::MatrixXd V(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(L));
  for (std::size_t n = 0; n < L; ++n) {
    for (std::size_t k = 0; k < L; ++k) {
      V(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k)) = std::pow(beta[k], static_cast<double>(n));
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(V);
  const auto& sv = svd.singularValues();
  const double threshold = static_cast<double>(L) * std::numeric_limits<double>::epsilon() * sv(0);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) ++r.vandermonde_rank;
  }
  r.certifies_zero = r.all_zero && r.vandermonde_rank == L;
  return r;
}

std::vector<DiagonalTrial> diagonal_trials(std::size_t trials, std::uint64_t seed) {
  std::vector<DiagonalTrial> out;
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(t)));
    std::uniform_int_distribution<std::size_t> count(1, 5);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> b(0.05, 0.95);
    DiagonalTrial trial;
    const std::size_t L = count(rng);
    while (trial.beta.size() < L) {
      const double v = b(rng);
      if (std::all_of(trial.beta.begin(), trial.beta.end(), [&](double x) { return std::abs(x - v) > 0.02; })) {
        trial.beta.push_back(v);
      }
    }
    for (std::size_t k = 0; k < L; ++k) trial.c.emplace_back(unit(rng), unit(rng));
    // Guarantee a nonzero vector even if every draw was tiny.
    if (std::all_of(trial.c.begin(), trial.c.end(), [](complex v) { return std::abs(v) < 1e-3; })) trial.c[0] = 1.0;
    trial.report = diagonal_coeff_criterion(trial.c, trial.beta, 3 * L);
    out.push_back(std::move(trial));
  }
  return out;
}

NormEstimate hb_ball_norm(const VectorMap& F, double R, std::size_t samples, std::uint64_t seed) {
  if (!(R > 0.0) || !std::isfinite(R)) throw ParameterError("ball radius R must be positive");
  const std::size_t d = F.dim;
  constexpr std::size_t phases = 8;
  constexpr std::size_t max_corners = 4096;
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double step = 2.0 * std::numbers::pi / phases;

  NormEstimate est;
  double best = 0.0;
  auto visit = [&](const AlgebraElement& z) {
    const double v = evaluate(F, z).norm();
    best = std::max(best, v);
    est.trace.push_back(best);
  };

  double corners = 1.0;
  for (std::size_t i = 0; i < d && corners <= static_cast<double>(max_corners); ++i) corners *= phases;
  if (corners <= static_cast<double>(max_corners)) {
    const auto total = static_cast<std::size_t>(corners);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::vector<complex> z(d);
      std::size_t rest = idx;
      for (std::size_t i = 0; i < d; ++i) {
        z[i] = std::polar(R, step * static_cast<double>(rest % phases));
        rest /= phases;
      }
      visit(AlgebraElement(std::move(z)));
    }
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, phases - 1);
    for (std::size_t s = 0; s < max_corners; ++s) {
      std::vector<complex> z(d);
      for (auto& v : z) v = std::polar(R, step * static_cast<double>(pick(rng)));
      visit(AlgebraElement(std::move(z)));
    }
  }
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<complex> z(d);
    for (auto& v : z) v = std::polar(R * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
    visit(AlgebraElement(std::move(z)));
  }
  est.value = best;
  est.converged = true;
  return est;
}

}  // namespace diskspace
