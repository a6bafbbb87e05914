#include "diskspace/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <tuple>

#include <Eigen/Dense>

#include "diskspace/errors.hpp"
#include "diskspace/kernels.hpp"
#include "diskspace/parallel.hpp"

namespace diskspace {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::member:
      return "member";
    case Verdict::non_member:
      return "non-member";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

WitnessResult::WitnessResult(double target, DiskPoint point, double achieved)
    : target_(target), point_(point), achieved_(achieved) {
  if (!(achieved > target)) {
    throw Error("witness value " + std::to_string(achieved) + " does not exceed target " + std::to_string(target));
  }
  if (!(point.offset() > 0.0)) throw DomainError("witness point is not inside the disk");
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kWitnessLadder = 5;
constexpr int kStallSteps = 64;
constexpr std::size_t kGrowthCandidates = 4;

// Golden-section maximisation returning the best evaluated abscissa and value.
template <class G>
std::pair<double, double> golden_max(G&& g, double a, double b, int iterations) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = g(x1);
  double f2 = g(x2);
  std::pair<double, double> best = f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
  for (int i = 0; i < iterations; ++i) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = g(x1);
      if (f1 > best.second) best = {x1, f1};
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = g(x2);
      if (f2 > best.second) best = {x2, f2};
    }
  }
  return best;
}

struct Search {
  const AnalyticExpr& f;
  SupQuantity q;
  const GridConfig& cfg;

  double at(double s, double theta) const {
    const double v = sup_quantity(f, q, DiskPoint::polar(std::exp2(-s), theta));
    return std::isnan(v) ? -1.0 : v;
  }

  // Bisects s in [lo, hi], keeping at(hi) >= goal, and returns the final hi.
  double bisect(double lo, double hi, double theta, double goal) const {
    for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++i) {
      const double mid = 0.5 * (lo + hi);
      if (at(mid, theta) >= goal) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  }
};

WitnessResult witness_search(const AnalyticExpr& f, SupQuantity q, double n, const GridConfig& cfg,
                             const WitnessOptions& opt) {
  if (!(n > 0.0) || !std::isfinite(n)) throw ParameterError("witness target must be positive, got " + std::to_string(n));
  if (!(opt.margin >= 0.0)) throw ParameterError("witness margin must be nonnegative");
  cfg.validate();
  const Search search{f, q, cfg};
  const double goal = n + opt.margin;
  const double h = kTwoPi / cfg.angles;
  const auto M = static_cast<std::size_t>(cfg.angles);

  // Best point seen so far, used when nothing reaches the goal.
  double best_v = -1.0, best_s = 0.0, best_theta = 0.0;
  auto note = [&](double v, double s, double theta) {
    if (v > best_v) {
      best_v = v;
      best_s = s;
      best_theta = theta;
    }
  };
  auto finish = [&](double lo, double hi, double theta) {
    const double s = search.bisect(lo, hi, theta, goal);
    const DiskPoint p = DiskPoint::polar(std::exp2(-s), theta);
    return WitnessResult(n, p, sup_quantity(f, q, p));
  };

  const double origin = search.at(0.0, 0.0);
  if (origin > n) return WitnessResult(n, DiskPoint::polar(1.0, 0.0), origin);
  note(origin, 0.0, 0.0);

  std::vector<DiskPoint> points(M, DiskPoint::polar(1.0, 0.0));
  std::vector<double> re(M), im(M), prev_abs(M, 0.0), growth(M, 0.0);
  double ring_theta = 0.0;
  for (int k = 1; k <= cfg.rings; ++k) {
    const double delta = std::exp2(-k);
    for (std::size_t j = 0; j < M; ++j) points[j] = DiskPoint::polar(delta, h * static_cast<double>(j));
    eval_many(f, q == SupQuantity::value ? Order::value : Order::derivative, points, re, im);
    for (std::size_t j = 0; j < M; ++j) {
      const double a = std::hypot(re[j], im[j]);
      growth[j] = std::isfinite(a) ? a - prev_abs[j] : -1.0;
      prev_abs[j] = a;
    }
    const auto mx = kernels::max_abs2(re, im);
    if (mx.index == static_cast<std::size_t>(-1)) continue;
    double theta = h * static_cast<double>(mx.index);
    double v = search.at(k, theta);
    if (v < goal && cfg.refine_iterations > 0) {
      const auto [t, rv] = golden_max([&](double th) { return search.at(k, th); }, theta - h, theta + h,
                                      cfg.refine_iterations);
      if (rv > v) {
        v = rv;
        theta = t;
      }
    }
    note(v, k, theta);
    ring_theta = theta;
    if (v >= goal) return finish(k - 1.0, k, theta);
  }

  // March outward from the last ring, re-centring the angle at each step.
  // Returns the depth bracket [lo, hi] and angle once the goal is reached.
  auto march = [&](double theta) -> std::optional<std::tuple<double, double, double>> {
    double prev_s = cfg.rings;
    double local_best = -1.0;
    int stalled = 0;
    for (double s = cfg.rings + 1.0; s <= opt.max_depth; s += 1.0) {
      double v = search.at(s, theta);
      // Peaks narrower than one ulp of the angle are only hit on exactly
      // representable directions such as grid angles.
      const double snapped = h * std::round(theta / h);
      if (const double sv = search.at(s, snapped); sv > v) {
        v = sv;
        theta = snapped;
      }
      if (cfg.refine_iterations > 0) {
        const auto [t, rv] = golden_max([&](double th) { return search.at(s, th); }, theta - h, theta + h,
                                        cfg.refine_iterations);
        if (rv > v) {
          v = rv;
          theta = t;
        }
      }
      note(v, s, theta);
      if (v >= goal) return std::tuple{prev_s, s, theta};
      prev_s = s;
      if (v > local_best * (1.0 + 1e-12) + 1e-300) {
        local_best = v;
        stalled = 0;
      } else if (++stalled >= kStallSteps) {
        break;
      }
    }
    return std::nullopt;
  };

  // The peak direction first, then the angles where the last ring grew most:
  // a slowly growing singularity can sit below a bounded peak elsewhere.
  std::vector<double> candidates{ring_theta};
  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < M; ++j) {
    const double g = growth[j];
    if (g > 0.0 && g >= growth[(j + M - 1) % M] && g > growth[(j + 1) % M]) order.push_back(j);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return growth[a] > growth[b]; });
  for (std::size_t i = 0; i < order.size() && i < kGrowthCandidates; ++i) {
    const double t = h * static_cast<double>(order[i]);
    if (std::abs(std::remainder(t - ring_theta, kTwoPi)) > 2.0 * h) candidates.push_back(t);
  }
  for (const double theta : candidates) {
    if (const auto hit = march(theta)) {
      const auto [lo, hi, t] = *hit;
      return finish(lo, hi, t);
    }
  }
  if (best_v > n) return WitnessResult(n, DiskPoint::polar(std::exp2(-best_s), best_theta), best_v);
  throw SearchExhausted("no point exceeds " + std::to_string(n) + "; largest value found " + std::to_string(best_v));
}

}  // namespace

WitnessResult unboundedness_witness(const AnalyticExpr& f, double n, const GridConfig& cfg,
                                    const WitnessOptions& opt) {
  return witness_search(f, SupQuantity::value, n, cfg, opt);
}

WitnessResult seminorm_witness(const AnalyticExpr& f, double n, const GridConfig& cfg, const WitnessOptions& opt) {
  return witness_search(f, SupQuantity::bloch, n, cfg, opt);
}

AnalyticExpr perturb_to_unbounded(const AnalyticExpr& h, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ParameterError("perturbation size must be positive");
  return lin_comb({1.0, eps / 3.0}, {h, log_one_minus(1.0)});
}

ClassificationReport classify(const AnalyticExpr& f, const std::vector<BergmanRequest>& bergman,
                              const GridConfig& cfg) {
  ClassificationReport report;
  report.bloch_estimate = bloch_seminorm(f, cfg);
  report.profile = ring_profile(f, cfg);
  report.sup_estimate = sup_norm_estimate(f, cfg);

  const auto& b = report.bloch_estimate;
  if (b.divergent) {
    report.bloch = Verdict::non_member;
  } else if (b.converged) {
    report.bloch = Verdict::member;
  }

  if (report.bloch == Verdict::non_member) {
    report.little_bloch = Verdict::non_member;
  } else if (report.profile.little_bloch_excluded) {
    report.little_bloch = Verdict::non_member;
  } else if (report.bloch == Verdict::member && report.profile.little_bloch_consistent) {
    report.little_bloch = Verdict::member;
  }

  bool any_divergent = b.divergent || report.sup_estimate.divergent;
  for (const auto& req : bergman) {
    BergmanVerdict bv{req, Verdict::inconclusive, bergman_norm(f, req.p, req.alpha, cfg)};
    if (bv.estimate.divergent) {
      bv.verdict = Verdict::non_member;
      any_divergent = true;
    } else if (bv.estimate.converged) {
      bv.verdict = Verdict::member;
    }
    report.bergman.push_back(std::move(bv));
  }

  const auto& s = report.sup_estimate;
  if (s.divergent) {
    report.hinf = Verdict::non_member;
    report.notes.push_back("H-infinity: divergent sup trace is numerical evidence of unboundedness, not a proof");
  } else if (report.bloch == Verdict::non_member) {
    report.hinf = Verdict::non_member;
    report.notes.push_back("H-infinity: excluded because bounded functions are Bloch");
  } else if (s.converged && !any_divergent) {
    report.hinf = Verdict::member;
  } else if (!s.converged) {
    // Climb a ladder of doubling targets past the grid estimate.
    const double base = std::max(s.value, 1.0);
    int reached = 0;
    for (; reached < kWitnessLadder; ++reached) {
      try {
        unboundedness_witness(f, base * std::exp2(reached + 1), cfg);
      } catch (const SearchExhausted&) {
        break;
      }
    }
    if (reached == kWitnessLadder) {
      report.hinf = Verdict::non_member;
      report.notes.push_back("H-infinity: unboundedness witnesses found above " + std::to_string(base) +
                             " times 2, 4, ..., " + std::to_string(1 << kWitnessLadder));
    }
  }
  if (report.little_bloch == Verdict::inconclusive) {
    report.notes.push_back("little Bloch: profile tail " + std::to_string(report.profile.tail_estimate) +
                           " lies between the member and non-member thresholds");
  }
  return report;
}

RankResult independence_rank(const std::vector<AnalyticExpr>& fs, std::size_t N) {
  if (fs.empty()) throw ParameterError("independence_rank needs at least one function");
  if (N < fs.size()) throw ParameterError("truncation N must be at least the number of functions");
  Eigen::MatrixXcd A(static_cast<Eigen::Index>(fs.size()), static_cast<Eigen::Index>(N));
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto c = taylor_coeffs(fs[i], N);
    for (std::size_t j = 1; j <= N; ++j) A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j - 1)) = c[j];
  }
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  const Eigen::VectorXd& sv = svd.singularValues();
  RankResult result{0, std::numeric_limits<double>::infinity(), {}};
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double threshold = static_cast<double>(N) * std::numeric_limits<double>::epsilon() * smax;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    result.singular_values.push_back(sv(i));
    if (sv(i) > threshold) ++result.rank;
  }
  const double smin = sv.size() > 0 ? sv(sv.size() - 1) : 0.0;
  if (smin > 0.0) result.condition = smax / smin;
  return result;
}

SumBoundCheck bound_2sum_check(const std::vector<complex>& coeffs, const std::vector<complex>& alphas,
                               const GridConfig& cfg) {
  if (coeffs.size() != alphas.size()) throw ParameterError("coefficient and alpha lists differ in length");
  if (coeffs.empty()) throw ParameterError("bound_2sum_check needs at least one term");
  std::vector<AnalyticExpr> terms;
  double bound = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (std::abs(std::abs(alphas[k]) - 1.0) > kUnitTolerance) throw ParameterError("alphas must lie on the unit circle");
    terms.push_back(log_one_minus(alphas[k]));
    bound += 2.0 * std::abs(coeffs[k]);
  }
  const double seminorm = bloch_seminorm(lin_comb(coeffs, terms), cfg).value;
  return {seminorm, bound, seminorm <= bound + kSumBoundTolerance};
}

std::vector<SumBoundTrial> bound_2sum_trials(std::size_t trials, std::size_t max_terms, std::uint64_t seed,
                                             const GridConfig& cfg) {
  if (max_terms == 0) throw ParameterError("max_terms must be positive");
  std::vector<SumBoundTrial> out(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(t)));
    std::uniform_int_distribution<std::size_t> count(1, max_terms);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    const std::size_t n = count(rng);
    for (std::size_t k = 0; k < n; ++k) {
      out[t].coeffs.emplace_back(unit(rng), unit(rng));
      out[t].alphas.push_back(std::polar(1.0, angle(rng)));
    }
  }
  // The estimators parallelise internally; trials run in sequence.
  for (auto& trial : out) trial.check = bound_2sum_check(trial.coeffs, trial.alphas, cfg);
  return out;
}

QuotientCheck quotient_independence_check(const std::vector<complex>& betas, const std::vector<complex>& alphas,
                                          std::size_t m_max) {
  if (betas.size() != alphas.size() || betas.empty()) throw ParameterError("need matching, nonempty beta and alpha lists");
  if (m_max < 8) throw ParameterError("m_max must be at least 8");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (std::abs(std::abs(alphas[i]) - 1.0) > kUnitTolerance) throw ParameterError("alphas must lie on the unit circle");
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(alphas[i] - alphas[j]) <= kUnitTolerance) throw ParameterError("alphas must be pairwise distinct");
    }
  }
  const auto lead = std::find_if(betas.begin(), betas.end(), [](complex b) { return b != complex{}; });
  if (lead == betas.end()) throw ZeroClassError("all coefficients are zero");
  QuotientCheck check{};
  check.leading_index = static_cast<std::size_t>(lead - betas.begin());

  std::vector<AnalyticExpr> terms;
  for (complex a : alphas) terms.push_back(log_one_minus(a));
  const AnalyticExpr f = lin_comb(betas, terms);
  const complex dir = std::conj(alphas[check.leading_index]);
  auto q = [&](double m) {
    const DiskPoint w = DiskPoint::on_ray(dir, 1.0 / m);
    return w.one_minus_abs2() * std::abs(deriv(f, w));
  };
  for (std::size_t m = 2; m <= m_max; m *= 2) check.samples.emplace_back(static_cast<double>(m), q(static_cast<double>(m)));
  const double m1 = static_cast<double>(m_max);
  check.limit = (8.0 * q(m1) - 6.0 * q(m1 / 2.0) + q(m1 / 4.0)) / 3.0;
  check.nonzero_class = check.limit >= 2.0 * std::abs(*lead) - kQuotientTolerance;
  return check;
}

}  // namespace diskspace
