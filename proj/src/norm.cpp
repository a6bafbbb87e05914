#include "diskspace/norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "diskspace/errors.hpp"
#include "diskspace/kernels.hpp"
#include "diskspace/parallel.hpp"

namespace diskspace {

void GridConfig::validate() const {
  if (rings < 4 || rings > 60) throw ParameterError("ring count K must lie in [4, 60], got " + std::to_string(rings));
  if (angles < 64 || (angles & (angles - 1)) != 0) {
    throw ParameterError("angles per ring must be a power of two >= 64, got " + std::to_string(angles));
  }
  if (refine_iterations < 0) throw ParameterError("refine_iterations must be >= 0");
  if (quad_order < 2) throw ParameterError("quad_order must be >= 2");
  if (!(rtol > 0.0)) throw ParameterError("rtol must be positive");
  if (!(divergence_cap > 0.0)) throw ParameterError("divergence cap must be positive");
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double offset_at(double s) { return std::exp2(-s); }

struct Best {
  double value;
  double theta;
  double s;
};

// Golden-section maximisation of g on [a, b]; returns the best evaluated point.
template <class G>
std::pair<double, double> golden_max(G&& g, double a, double b, int iterations) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = g(x1);
  double f2 = g(x2);
  double best_x = f1 >= f2 ? x1 : x2;
  double best_f = std::max(f1, f2);
  for (int i = 0; i < iterations; ++i) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = g(x1);
      if (f1 > best_f) {
        best_f = f1;
        best_x = x1;
      }
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = g(x2);
      if (f2 > best_f) {
        best_f = f2;
        best_x = x2;
      }
    }
  }
  return {best_x, best_f};
}

double safe(double v) { return std::isnan(v) ? -1.0 : v; }

RingRecord sweep_one(const AnalyticExpr& f, SupQuantity q, const GridConfig& cfg, int k) {
  const int K = cfg.rings;
  const double delta = offset_at(k);
  RingRecord rec{k, 1.0 - delta, 0.0, 0.0, DiskPoint::polar(delta, 0.0)};
  auto objective = [&](double theta, double s) { return safe(sup_quantity(f, q, DiskPoint::polar(offset_at(s), theta))); };

  Best best{0.0, 0.0, static_cast<double>(k)};
  if (k == 0) {
    best.value = safe(sup_quantity(f, q, rec.argmax));
  } else {
    const auto M = static_cast<std::size_t>(cfg.angles);
    std::vector<DiskPoint> points;
    points.reserve(M);
    for (std::size_t j = 0; j < M; ++j) points.push_back(DiskPoint::polar(delta, kTwoPi * static_cast<double>(j) / cfg.angles));
    std::vector<double> re(M), im(M);
    eval_many(f, q == SupQuantity::value ? Order::value : Order::derivative, points, re, im);
    const auto mx = kernels::max_abs2(re, im);
    const std::size_t j = mx.index == static_cast<std::size_t>(-1) ? 0 : mx.index;
    best.value = mx.index == static_cast<std::size_t>(-1) ? -1.0 : sup_quantity(f, q, points[j]);
    best.theta = kTwoPi * static_cast<double>(j) / cfg.angles;
    rec.argmax = points[j];
  }
  rec.ring_max = std::max(best.value, 0.0);

  if (cfg.refine_iterations > 0) {
    const double h = kTwoPi / cfg.angles;
    auto refine_theta = [&] {
      if (best.s == 0.0) return;  // the origin has no angle
      const auto [t, v] = golden_max([&](double th) { return objective(th, best.s); }, best.theta - h, best.theta + h,
                                     cfg.refine_iterations);
      if (v > best.value) best = {v, t, best.s};
    };
    auto refine_radius = [&] {
      const double lo = std::max(0.0, static_cast<double>(k) - 1.0);
      const double hi = std::min(static_cast<double>(K), static_cast<double>(k) + 1.0);
      const auto [s, v] = golden_max([&](double ss) { return objective(best.theta, ss); }, lo, hi, cfg.refine_iterations);
      if (v > best.value) best = {v, best.theta, s};
    };
    refine_theta();
    refine_radius();
    refine_theta();
    rec.argmax = DiskPoint::polar(offset_at(best.s), best.theta);
  }
  rec.refined_max = std::max(rec.ring_max, std::max(best.value, 0.0));
  return rec;
}

}  // namespace

NormEstimate estimate_from_rings(std::vector<RingRecord> rings, const GridConfig& cfg) {
  NormEstimate est;
  std::vector<double> ring_maxima;
  double running = 0.0;
  double last_finite = 0.0;
  std::size_t best_ring = 0;
  for (std::size_t i = 0; i < rings.size(); ++i) {
    const double v = rings[i].refined_max;
    if (!std::isfinite(v)) {
      est.infinite = true;
      est.trace.push_back(last_finite);
      ring_maxima.push_back(v);
      continue;
    }
    if (v > running) {
      running = v;
      best_ring = i;
    }
    last_finite = running;
    est.trace.push_back(running);
    ring_maxima.push_back(rings[i].ring_max);
  }
  est.value = last_finite;
  est.achieved_at = rings[best_ring].argmax;
  est.divergent = est.infinite || growth_diverges(ring_maxima, cfg.divergence_cap);
  if (!est.divergent && est.trace.size() >= 2) {
    const double a = est.trace[est.trace.size() - 1];
    const double b = est.trace[est.trace.size() - 2];
    // The last ring must not still be climbing: refinement can carry ring K-1
    // past r_K and flatten the trace while the grid maxima keep rising.
    const double rising = ring_maxima[ring_maxima.size() - 1] - ring_maxima[ring_maxima.size() - 2];
    est.converged = std::abs(a - b) <= cfg.rtol * std::abs(a) && rising <= cfg.rtol * std::abs(a);
  }
  est.rings = std::move(rings);
  return est;
}

double sup_quantity(const AnalyticExpr& f, SupQuantity q, const DiskPoint& p) {
  const complex v = q == SupQuantity::value ? eval(f, p) : deriv(f, p);
  const double m = std::sqrt(v.real() * v.real() + v.imag() * v.imag());
  switch (q) {
    case SupQuantity::value:
      return m;
    case SupQuantity::bloch:
      return p.one_minus_abs2() * m;
    case SupQuantity::multiplier: {
      const double t = p.one_minus_abs2();
      if (m == 0.0) return 0.0;
      return -t * std::log(t) * m;
    }
  }
  return m;
}

std::vector<RingRecord> ring_sweep(const AnalyticExpr& f, SupQuantity q, const GridConfig& cfg) {
  cfg.validate();
  std::vector<std::optional<RingRecord>> slots(static_cast<std::size_t>(cfg.rings) + 1);
  parallel_for(slots.size(), [&](std::size_t k) { slots[k] = sweep_one(f, q, cfg, static_cast<int>(k)); });
  std::vector<RingRecord> rings;
  rings.reserve(slots.size());
  for (auto& s : slots) rings.push_back(*s);
  return rings;
}

bool growth_diverges(const std::vector<double>& levels, double cap) {
  constexpr std::size_t window = 5;
  if (levels.size() < window + 1) return false;
  const std::size_t start = levels.size() - window - 1;
  std::vector<double> inc;
  for (std::size_t i = start + 1; i < levels.size(); ++i) {
    if (!std::isfinite(levels[i])) return true;
    const double d = levels[i] - levels[i - 1];
    if (!(d > 0.0)) return false;
    inc.push_back(d);
  }
  if (levels.back() > cap) return true;
  for (std::size_t i = 1; i < inc.size(); ++i) {
    if (inc[i] < 0.95 * inc[i - 1]) return false;
  }
  return true;
}

double extrapolate_ring_limit(const std::vector<RingRecord>& rings) {
  std::vector<const RingRecord*> tail;
  for (auto it = rings.rbegin(); it != rings.rend() && tail.size() < 8; ++it) {
    if (it->k >= 1) tail.push_back(&*it);
  }
  if (tail.empty()) return 0.0;
  if (tail.size() < 3) return tail.front()->ring_max;
  Eigen::MatrixXd A(static_cast<Eigen::Index>(tail.size()), 3);
  Eigen::VectorXd y(static_cast<Eigen::Index>(tail.size()));
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const double x = 1.0 / tail[i]->k;
    const auto row = static_cast<Eigen::Index>(i);
    A(row, 0) = 1.0;
    A(row, 1) = x;
    A(row, 2) = x * x;
    y(row) = tail[i]->ring_max;
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
  return c(0);
}

NormEstimate bloch_seminorm(const AnalyticExpr& f, const GridConfig& cfg) {
  return estimate_from_rings(ring_sweep(f, SupQuantity::bloch, cfg), cfg);
}

NormEstimate bloch_norm(const AnalyticExpr& f, const GridConfig& cfg) {
  NormEstimate est = bloch_seminorm(f, cfg);
  const double at_zero = std::abs(eval(f, complex{}));
  est.value += at_zero;
  for (double& t : est.trace) t += at_zero;
  return est;
}

RingProfile profile_from_rings(std::vector<RingRecord> rings, const GridConfig& cfg) {
  RingProfile profile;
  profile.rings = std::move(rings);
  const auto& r = profile.rings;
  // A fast-decaying tail is already below its own fit; take whichever is smaller.
  profile.tail_estimate = std::max(0.0, std::min(extrapolate_ring_limit(r), r.back().ring_max));
  profile.tail_decreasing = r.size() >= 6;
  for (std::size_t i = r.size() >= 5 ? r.size() - 4 : 1; i < r.size(); ++i) {
    if (r[i].ring_max > r[i - 1].ring_max) profile.tail_decreasing = false;
  }
  if (r.size() >= 12) {
    double recent = 0.0, earlier = 0.0;
    for (std::size_t i = r.size() - 4; i < r.size(); ++i) recent += r[i].ring_max;
    for (std::size_t i = r.size() - 12; i < r.size() - 8; ++i) earlier += r[i].ring_max;
    profile.tail_ratio = earlier > 0.0 ? recent / earlier : (recent > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
  }
  profile.little_bloch_consistent = profile.tail_decreasing && profile.tail_estimate < cfg.little_bloch_eps;
  profile.little_bloch_excluded =
      profile.tail_estimate >= cfg.little_bloch_floor && profile.tail_ratio >= kFlatTailRatio;
  return profile;
}

RingProfile ring_profile(const AnalyticExpr& f, const GridConfig& cfg) {
  return profile_from_rings(ring_sweep(f, SupQuantity::bloch, cfg), cfg);
}

NormEstimate sup_norm_estimate(const AnalyticExpr& f, const GridConfig& cfg) {
  return estimate_from_rings(ring_sweep(f, SupQuantity::value, cfg), cfg);
}

NormEstimate multiplier_bound(const AnalyticExpr& f, const GridConfig& cfg) {
  return estimate_from_rings(ring_sweep(f, SupQuantity::multiplier, cfg), cfg);
}

NormEstimate dilate_deviation(const AnalyticExpr& f, double r, const GridConfig& cfg) {
  if (!(r > 0.0 && r < 1.0)) throw ParameterError("dilation radius must lie in (0, 1)");
  return bloch_norm(lin_comb({1.0, -1.0}, {dilate(f, r), f}), cfg);
}

GrowthCheck growth_bound_check(const AnalyticExpr& f, double r, const GridConfig& cfg) {
  if (!(r > 0.0 && r < 1.0)) throw ParameterError("growth check radius must lie in (0, 1)");
  cfg.validate();
  constexpr int circles = 8;
  const auto M = static_cast<std::size_t>(cfg.angles);
  double lhs = std::abs(eval(f, complex{}));
  double best_rho = 0.0;
  double best_theta = 0.0;
  std::vector<DiskPoint> points(M, DiskPoint::polar(1.0, 0.0));
  std::vector<double> re(M), im(M);
  for (int i = 1; i <= circles; ++i) {
    const double rho = r * i / circles;
    for (std::size_t j = 0; j < M; ++j) points[j] = DiskPoint::polar(1.0 - rho, kTwoPi * static_cast<double>(j) / cfg.angles);
    eval_many(f, Order::value, points, re, im);
    const auto mx = kernels::max_abs2(re, im);
    if (mx.index == static_cast<std::size_t>(-1)) continue;
    const double v = std::sqrt(mx.value);
    if (v > lhs) {
      lhs = v;
      best_rho = rho;
      best_theta = kTwoPi * static_cast<double>(mx.index) / cfg.angles;
    }
  }
  if (best_rho > 0.0 && cfg.refine_iterations > 0) {
    const double h = kTwoPi / cfg.angles;
    const auto [t, v] = golden_max(
        [&](double th) { return safe(std::abs(eval(f, DiskPoint::polar(1.0 - best_rho, th)))); }, best_theta - h,
        best_theta + h, cfg.refine_iterations);
    (void)t;
    lhs = std::max(lhs, v);
  }
  GrowthCheck check{};
  check.lhs = lhs;
  check.growth_constant = 1.0 + 0.5 * std::log((1.0 + r) / (1.0 - r));
  check.bloch_norm = bloch_norm(f, cfg).value;
  check.rhs = check.growth_constant * check.bloch_norm;
  check.holds = check.lhs <= check.rhs + kGrowthTolerance;
  return check;
}

}  // namespace diskspace
