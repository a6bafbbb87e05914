#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "diskspace/errors.hpp"
#include "diskspace/expr.hpp"
#include "diskspace/norm.hpp"
#include "diskspace/parallel.hpp"
#include "diskspace/report.hpp"

using namespace diskspace;

namespace {

// Frozen high-precision values (mpmath, 30 digits).
constexpr double kPowNeg04A2 = 1.07240527507311;   // (sum |c_n|^2 / (n + 1))^(1/2), c_n of (1 - z)^-0.4
constexpr double kPowNeg04Weighted1 = 1.03835264284091;  // alpha = 1 weighted A^2 norm
constexpr double kLog2 = 0.693147180559945;
constexpr double kGrowthRhsHalf = 3.09861228866811;  // 2 (1 + log(3) / 2)

GridConfig small_grid() {
  GridConfig cfg;
  cfg.rings = 12;
  cfg.angles = 256;
  cfg.refine_iterations = 40;
  return cfg;
}

AnalyticExpr g(double angle) { return log_one_minus(std::polar(1.0, angle)); }

AnalyticExpr random_g_comb(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int terms = 1 + static_cast<int>(u(rng) * 4);
  std::vector<complex> c;
  std::vector<AnalyticExpr> fs;
  for (int i = 0; i < terms; ++i) {
    c.push_back(std::polar(0.1 + 2.0 * u(rng), 2.0 * std::numbers::pi * u(rng)));
    fs.push_back(g(2.0 * std::numbers::pi * u(rng)));
  }
  return lin_comb(c, fs);
}

void check_nondecreasing(const NormEstimate& e) {
  for (std::size_t i = 1; i < e.trace.size(); ++i) CHECK(e.trace[i] >= e.trace[i - 1]);
}

}  // namespace

TEST_CASE("grid configuration limits") {
  GridConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.rings = 3;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = {};
  cfg.angles = 100;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.angles = 32;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  CHECK_THROWS_AS(bloch_seminorm(monomial(1), cfg), ParameterError);
}

TEST_CASE("Bloch seminorm examples") {
  const auto e = bloch_seminorm(g(0.0));
  CHECK(e.converged);
  CHECK_FALSE(e.divergent);
  CHECK(std::abs(e.value - 2.0) <= 1e-3);
  check_nondecreasing(e);

  CHECK(bloch_seminorm(constant(3.0)).value == 0.0);

  const auto z = bloch_seminorm(monomial(1));
  CHECK(z.value == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(z.achieved_at.has_value());
  CHECK(std::abs(z.achieved_at->z()) < 1e-6);
}

TEST_CASE("Bloch norm examples") {
  CHECK(std::abs(bloch_norm(g(0.0)).value - 2.0) <= 1e-3);
  CHECK(bloch_norm(constant(5.0)).value == doctest::Approx(5.0).epsilon(1e-15));
  const double eps = 0.3;
  CHECK(std::abs(bloch_norm(complex(eps / 3.0) * g(0.0)).value - 2.0 * eps / 3.0) <= 1e-4);
}

TEST_CASE("ring profile examples") {
  const auto log_profile = ring_profile(g(0.0));
  REQUIRE(log_profile.rings.size() == 21);
  for (std::size_t k = 1; k < log_profile.rings.size(); ++k)
    CHECK(log_profile.rings[k].refined_max >= log_profile.rings[k - 1].refined_max - 1e-12);
  CHECK(std::abs(log_profile.rings.back().refined_max - 2.0) <= 1e-2);
  CHECK_FALSE(log_profile.little_bloch_consistent);
  CHECK(log_profile.little_bloch_excluded);

  const auto sq = ring_profile(monomial(2));
  CHECK(sq.little_bloch_consistent);
  CHECK(sq.tail_estimate < 1e-3);

  std::vector<std::uint64_t> e;
  for (int n = 0; n <= 62; ++n) e.push_back(std::uint64_t{1} << n);
  GridConfig cfg;
  cfg.rings = 40;
  const auto gap = ring_profile(lacunary(GapSeries::build(e, {1.0}, std::nullopt, TailRule{1.0, 0.0})), cfg);
  CHECK_FALSE(gap.little_bloch_consistent);
  CHECK(gap.tail_estimate >= cfg.little_bloch_floor);
  double top = 0.0;
  for (const auto& r : gap.rings) top = std::max(top, r.refined_max);
  CHECK(top < 10.0);
}

TEST_CASE("sup norm examples") {
  const auto z = sup_norm_estimate(monomial(1));
  CHECK(z.value <= 1.0);
  CHECK(z.value > 1.0 - 1e-5);
  CHECK(z.converged);

  for (const auto& f : {g(0.0), half_log_ratio(0.0)}) {
    const auto e = sup_norm_estimate(f);
    CHECK(e.divergent);
    CHECK_FALSE(e.converged);
    CHECK(std::isfinite(e.value));
    check_nondecreasing(e);
  }
}

TEST_CASE("multiplier bound examples") {
  CHECK(multiplier_bound(constant(2.0)).value == 0.0);
  CHECK(std::abs(multiplier_bound(monomial(1)).value - std::exp(-1.0)) <= 1e-3);
  const auto e = multiplier_bound(g(0.0));
  CHECK(e.divergent);
  CHECK_FALSE(e.converged);
}

TEST_CASE("dilate deviation examples") {
  CHECK(std::abs(dilate_deviation(monomial(1), 0.9).value - 0.1) <= 1e-4);
  CHECK(dilate_deviation(constant(complex(1.0, 2.0)), 0.5).value == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(dilate_deviation(g(0.0), 0.999).value >= 1.9);
}

TEST_CASE("Bergman norm examples") {
  for (double p : {1.0, 2.0, 3.0}) CHECK(bergman_norm(constant(1.0), p).value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(bergman_norm(monomial(1), 2.0).value / std::sqrt(0.5) - 1.0) <= 5e-3);

  const auto pn = bergman_norm(pow_neg(0.4), 2.0);
  CHECK(pn.converged);
  CHECK(std::abs(pn.value / kPowNeg04A2 - 1.0) <= 5e-3);
  // Coefficient oracle computed in place.
  const auto c = taylor_coeffs(pow_neg(0.4), 4000);
  double s = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) s += std::norm(c[n]) / static_cast<double>(n + 1);
  CHECK(std::abs(std::sqrt(s) / kPowNeg04A2 - 1.0) < 1e-3);

  const auto w = bergman_norm(pow_neg(0.4), 2.0, 1.0);
  CHECK(std::abs(w.value / kPowNeg04Weighted1 - 1.0) <= 5e-3);

  CHECK_THROWS_AS(bergman_norm(monomial(1), 0.5), ParameterError);
  CHECK_THROWS_AS(bergman_norm(monomial(1), 2.0, -1.0), ParameterError);
}

TEST_CASE("Bergman norm of polynomials matches the coefficient formula") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 10; ++trial) {
    const unsigned deg = 1 + trial % 6;
    std::vector<complex> c;
    std::vector<AnalyticExpr> fs;
    double exact = 0.0;
    for (unsigned n = 0; n <= deg; ++n) {
      c.emplace_back(n01(rng), n01(rng));
      fs.push_back(monomial(n));
      exact += std::norm(c.back()) / (n + 1.0);
    }
    CHECK(std::abs(bergman_norm(lin_comb(c, fs), 2.0).value - std::sqrt(exact)) <= 1e-6);
  }
}

TEST_CASE("Bergman norm flags divergent integrands") {
  const auto e = bergman_norm(pow_neg(1.5), 2.0);
  CHECK(e.divergent);
  CHECK_FALSE(e.converged);
}

TEST_CASE("growth bound examples") {
  const auto chk = growth_bound_check(g(0.0), 0.5);
  CHECK(chk.holds);
  CHECK(chk.lhs == doctest::Approx(kLog2).epsilon(1e-9));
  CHECK(std::abs(chk.rhs - kGrowthRhsHalf) <= 1e-5);
  for (double r : {0.1, 0.5, 0.99}) {
    const auto c = growth_bound_check(constant(complex(-2.0, 1.0)), r);
    CHECK(c.holds);
    CHECK(c.lhs == doctest::Approx(std::sqrt(5.0)));
  }
}

TEST_CASE("growth bound holds on random combinations of log(1 - alpha z)") {
  std::mt19937_64 rng(2024);
  const GridConfig cfg = small_grid();
  int failures = 0;
  for (int i = 0; i < 100; ++i) {
    const AnalyticExpr f = random_g_comb(rng);
    for (double r : {0.3, 0.6, 0.9}) failures += growth_bound_check(f, r, cfg).holds ? 0 : 1;
  }
  CHECK(failures == 0);
}

TEST_CASE("final value dominates every grid sample") {
  const GridConfig cfg = small_grid();
  std::mt19937_64 rng(4);
  for (int i = 0; i < 5; ++i) {
    const AnalyticExpr f = random_g_comb(rng);
    for (auto q : {SupQuantity::bloch, SupQuantity::multiplier}) {
      const auto e = estimate_from_rings(ring_sweep(f, q, cfg), cfg);
      check_nondecreasing(e);
      for (int k = 0; k <= cfg.rings; ++k) {
        const double off = std::ldexp(1.0, -k);
        for (int j = 0; j < cfg.angles; ++j) {
          const double th = 2.0 * std::numbers::pi * j / cfg.angles;
          const double v = sup_quantity(f, q, k == 0 ? DiskPoint::from_complex(0.0) : DiskPoint::polar(off, th));
          CHECK(v <= e.value);
        }
      }
    }
  }
}

TEST_CASE("seminorm and norm are controlled by the sup norm for bounded functions") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n01;
  const GridConfig cfg = small_grid();
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<complex> c;
    std::vector<AnalyticExpr> fs;
    for (unsigned n = 0; n <= 4; ++n) {
      c.emplace_back(n01(rng), n01(rng));
      fs.push_back(monomial(n));
    }
    fs.push_back(dilate(g(n01(rng)), 0.8));
    c.emplace_back(n01(rng), 0.0);
    const AnalyticExpr f = lin_comb(c, fs);
    const double sup = sup_norm_estimate(f, cfg).value;
    CHECK(bloch_seminorm(f, cfg).value <= sup + 1e-9);
    CHECK(bloch_norm(f, cfg).value <= std::abs(eval(f, complex{})) + sup + 1e-9);
  }
}

TEST_CASE("Bloch norm scales with the modulus of a constant factor") {
  std::mt19937_64 rng(13);
  const GridConfig cfg = small_grid();
  for (int i = 0; i < 5; ++i) {
    const AnalyticExpr f = random_g_comb(rng) + constant(complex(0.5, -0.25));
    const complex c(-1.7, 0.4);
    const double a = bloch_norm(c * f, cfg).value;
    const double b = std::abs(c) * bloch_norm(f, cfg).value;
    CHECK(std::abs(a - b) <= 1e-10 * b);
  }
}

TEST_CASE("results do not depend on the worker count") {
  const AnalyticExpr f = lin_comb({1.0, complex(0.0, 0.5)}, {g(0.3), pow_neg(0.4)});
  set_worker_count(1);
  const auto a = bloch_seminorm(f);
  const auto ba = bergman_norm(f, 2.0);
  set_worker_count(4);
  const auto b = bloch_seminorm(f);
  const auto bb = bergman_norm(f, 2.0);
  set_worker_count(0);
  CHECK(std::bit_cast<std::uint64_t>(a.value) == std::bit_cast<std::uint64_t>(b.value));
  CHECK(a.trace == b.trace);
  CHECK(std::bit_cast<std::uint64_t>(ba.value) == std::bit_cast<std::uint64_t>(bb.value));
  CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("divergence rule") {
  CHECK_FALSE(growth_diverges({1, 2, 3, 4, 5}, 1e8));
  CHECK(growth_diverges({1, 2, 3, 4, 5, 6}, 1e8));
  CHECK_FALSE(growth_diverges({1, 1.5, 1.75, 1.875, 1.9375, 1.96875}, 1e8));
  CHECK(growth_diverges({1, 1.5, 1.75, 1.875, 1.9375, 2e8}, 1e8));
  CHECK_FALSE(growth_diverges({1, 2, 3, 4, 4, 5}, 1e8));
}

TEST_CASE("ring limit extrapolation recovers L + a/k") {
  std::vector<RingRecord> rings;
  for (int k = 0; k <= 20; ++k) {
    const double v = k == 0 ? 0.0 : 2.0 - 3.0 / k + 0.5 / (k * k);
    rings.push_back(RingRecord{k, 1.0 - std::ldexp(1.0, -k), v, v, DiskPoint::from_complex(0.0)});
  }
  CHECK(extrapolate_ring_limit(rings) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("profile CSV layout") {
  GridConfig cfg = small_grid();
  cfg.rings = 4;
  const auto p = ring_profile(monomial(1), cfg);
  std::istringstream in(profile_csv(p.rings));
  std::string line;
  std::getline(in, line);
  CHECK(line == "k,r_k,ring_max,refined_max");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 5);
}
