#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/legendre.hpp>

#include "diskspace/errors.hpp"
#include "diskspace/kernels.hpp"
#include "diskspace/norm.hpp"
#include "diskspace/parallel.hpp"

namespace diskspace {
namespace {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Rule gauss_legendre(int n) {
  Rule rule;
  const auto positive = boost::math::legendre_p_zeros<double>(n);
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) {
    if (*it == 0.0) continue;
    rule.nodes.push_back(-*it);
  }
  for (double x : positive) rule.nodes.push_back(x);
  std::sort(rule.nodes.begin(), rule.nodes.end());
  for (double x : rule.nodes) {
    const double d = boost::math::legendre_p_prime(n, x);
    rule.weights.push_back(2.0 / ((1.0 - x * x) * d * d));
  }
  return rule;
}

struct Level {
  double total = 0.0;
  std::vector<double> panels;
  bool finite = true;
};

// Panel k integrates offsets in [2^{-k}, 2^{-(k-1)}] for k = 1..K; panel K+1 covers [0, 2^{-K}].
Level integrate(const AnalyticExpr& f, double p, double alpha, int K, int q, int M) {
  const Rule rule = gauss_legendre(q);
  const auto m = static_cast<std::size_t>(M);
  std::vector<double> panels(static_cast<std::size_t>(K) + 1, 0.0);
  parallel_for(panels.size(), [&](std::size_t i) {
    const double hi = std::exp2(-static_cast<double>(i));
    const double lo = i == static_cast<std::size_t>(K) ? 0.0 : std::exp2(-static_cast<double>(i) - 1.0);
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    std::vector<DiskPoint> points(m, DiskPoint::polar(1.0, 0.0));
    std::vector<double> re(m), im(m), mag(m);
    double acc = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double u = mid + half * rule.nodes[j];
      for (std::size_t a = 0; a < m; ++a) {
        points[a] = DiskPoint::polar(u, 2.0 * std::numbers::pi * static_cast<double>(a) / M);
      }
      eval_many(f, Order::value, points, re, im);
      double s;
      if (p == 2.0) {
        s = kernels::sum_abs2(re, im);
      } else {
        for (std::size_t a = 0; a < m; ++a) mag[a] = std::pow(std::sqrt(re[a] * re[a] + im[a] * im[a]), p);
        s = kernels::sum(mag);
      }
      const double t = points[0].one_minus_abs2();
      const double weight = alpha == 0.0 ? 1.0 : (alpha + 1.0) * std::pow(t, alpha);
      acc += rule.weights[j] * half * weight * (1.0 - u) * s;
    }
    panels[i] = acc * 2.0 / M;
  });
  Level level;
  level.panels = panels;
  for (double v : panels) {
    if (!std::isfinite(v)) level.finite = false;
    level.total += v;
  }
  return level;
}

bool panels_diverge(const std::vector<double>& panels) {
  constexpr std::size_t window = 5;
  if (panels.size() < window + 1) return false;
  // The last panel is the boundary remainder, so only the geometric ones count.
  const std::size_t end = panels.size() - 1;
  for (std::size_t i = end - window; i < end; ++i) {
    if (!(panels[i - 1] > 0.0) || panels[i] < 0.95 * panels[i - 1]) return false;
  }
  return true;
}

}  // namespace

NormEstimate bergman_norm(const AnalyticExpr& f, double p, std::optional<double> weight_alpha, const GridConfig& cfg) {
  cfg.validate();
  if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("Bergman exponent p must be >= 1, got " + std::to_string(p));
  const double alpha = weight_alpha.value_or(0.0);
  if (!(alpha > -1.0) || !std::isfinite(alpha)) {
    throw ParameterError("Bergman weight alpha must exceed -1, got " + std::to_string(alpha));
  }
  const Level coarse = integrate(f, p, alpha, cfg.rings, cfg.quad_order, cfg.angles);
  const Level fine = integrate(f, p, alpha, cfg.rings, 2 * cfg.quad_order, 2 * cfg.angles);

  NormEstimate est;
  const double inv_p = 1.0 / p;
  double partial = 0.0;
  for (double v : fine.panels) {
    partial += v;
    est.trace.push_back(std::pow(partial, inv_p));
  }
  est.levels = {std::pow(coarse.total, inv_p), std::pow(fine.total, inv_p)};
  est.infinite = !coarse.finite || !fine.finite;
  est.value = est.infinite ? (est.trace.empty() ? 0.0 : est.trace.back()) : est.levels[1];
  est.divergent = est.infinite || panels_diverge(fine.panels) || fine.total > cfg.divergence_cap;
  if (!est.divergent) {
    const double a = est.levels[0];
    const double b = est.levels[1];
    est.converged = (a == 0.0 && b == 0.0) || std::abs(a - b) <= 5e-3 * std::abs(b);
  }
  return est;
}

}  // namespace diskspace
