#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "diskspace/errors.hpp"
#include "diskspace/expr.hpp"
#include "diskspace/expr_json.hpp"

using namespace diskspace;

namespace {

complex random_point(std::mt19937_64& rng, double max_modulus) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(max_modulus * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
}

complex unit(double angle) { return std::polar(1.0, angle); }

GapSeries small_gap() {
  std::vector<std::uint64_t> e;
  for (int n = 0; n <= 12; ++n) e.push_back(std::uint64_t{1} << n);
  return GapSeries::build(e, {1.0, 0.5, complex(0.0, 0.25)}, std::nullopt, TailRule{1.0, -1.0});
}

// One representative per node kind, plus nested trees.
std::vector<std::pair<const char*, AnalyticExpr>> corpus() {
  const AnalyticExpr g = log_one_minus(1.0);
  return {
      {"constant", constant(complex(2.0, -1.0))},
      {"monomial", monomial(3)},
      {"log_one_minus", log_one_minus(unit(0.7) * 0.8)},
      {"log_one_minus_unit", g},
      {"pow_neg", pow_neg(0.4)},
      {"lacunary", lacunary(small_gap())},
      {"dilate", dilate(pow_neg(1.3), 0.6)},
      {"rotate", rotate(g, unit(2.0))},
      {"lin_comb", lin_comb({complex(1.0, 1.0), -0.5}, {g, rotate(g, unit(-1.0))})},
      {"product", product({log_one_minus(-1.0), log_one_minus(-1.0)})},
      {"half_log_ratio", half_log_ratio(1.1)},
      {"nested", product({dilate(lin_comb({1.0, 2.0}, {monomial(2), pow_neg(0.5)}), 0.9), rotate(half_log_ratio(0.0), unit(0.3))})},
  };
}

}  // namespace

TEST_CASE("closed-form values") {
  const AnalyticExpr g = log_one_minus(1.0);
  CHECK(std::abs(eval(g, complex{})) == 0.0);
  // |log(1 - z)| = 6 at z = 1 - e^-6.
  CHECK(std::abs(eval(g, DiskPoint::polar(std::exp(-6.0), 0.0))) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(std::abs(eval(g, complex(1.0 - std::exp(-6.0), 0.0))) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(eval(pow_neg(0.5), complex{}) == complex(1.0, 0.0));
  CHECK(deriv(g, complex{}) == complex(-1.0, 0.0));
  CHECK(deriv(dilate(monomial(1), 0.5), complex(0.3, 0.2)) == complex(0.5, 0.0));
}

TEST_CASE("half_log_ratio matches its defining formula") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const double t = 2.0 * std::numbers::pi * i / 50.0;
    const complex z = random_point(rng, 0.95);
    const complex w = std::polar(1.0, -t);
    const complex want = 0.5 * w * std::log((1.0 + w * z) / (1.0 - w * z));
    CHECK(std::abs(eval(half_log_ratio(t), z) - want) <= 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("points near the boundary keep full accuracy") {
  const AnalyticExpr g = log_one_minus(1.0);
  // log(1 - z) = log(delta) exactly on the positive axis.
  for (double delta : {1e-10, 1e-50, 1e-200}) {
    CHECK(eval(g, DiskPoint::polar(delta, 0.0)).real() == doctest::Approx(std::log(delta)).epsilon(1e-14));
  }
  CHECK(std::abs(eval(pow_neg(0.4), DiskPoint::polar(1e-20, 0.0))) == doctest::Approx(std::pow(1e-20, -0.4)).epsilon(1e-12));
}

TEST_CASE("derivatives agree with central differences") {
  std::mt19937_64 rng(99);
  const double h = 1e-6;
  for (const auto& [name, f] : corpus()) {
    CAPTURE(name);
    for (int i = 0; i < 100; ++i) {
      const complex z = random_point(rng, 0.9 - 2 * h);
      const complex fd = (eval(f, z + h) - eval(f, z - h)) / (2.0 * h);
      const complex d = deriv(f, z);
      CHECK(std::abs(fd - d) <= 1e-6 * std::max(1.0, std::abs(d)));
    }
  }
}

TEST_CASE("rotating by alpha and then conj(alpha) is the identity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (const auto& [name, f] : corpus()) {
    CAPTURE(name);
    for (int i = 0; i < 20; ++i) {
      const complex a = unit(angle(rng));
      const complex z = random_point(rng, 0.9);
      CHECK(std::abs(eval(rotate(rotate(f, a), std::conj(a)), z) - eval(f, z)) <= 1e-12);
    }
  }
}

TEST_CASE("Taylor coefficients") {
  const auto c = taylor_coeffs(log_one_minus(1.0), 3);
  REQUIRE(c.size() == 4);
  CHECK(c[0] == complex{});
  CHECK(c[1].real() == doctest::Approx(-1.0));
  CHECK(c[2].real() == doctest::Approx(-0.5));
  CHECK(c[3].real() == doctest::Approx(-1.0 / 3.0));

  const auto p = taylor_coeffs(pow_neg(0.4), 2);
  CHECK(p[0].real() == doctest::Approx(1.0));
  CHECK(p[1].real() == doctest::Approx(0.4));
  CHECK(p[2].real() == doctest::Approx(0.28));

  const complex a = unit(0.9);
  const auto base = taylor_coeffs(pow_neg(0.7), 10);
  const auto rot = taylor_coeffs(rotate(pow_neg(0.7), a), 10);
  for (std::size_t j = 0; j <= 10; ++j) CHECK(std::abs(rot[j] - base[j] * std::pow(a, static_cast<double>(j))) < 1e-14);
}

TEST_CASE("Taylor coefficients of a linear combination combine exactly") {
  const AnalyticExpr f = log_one_minus(unit(0.4));
  const AnalyticExpr g = pow_neg(1.5);
  const complex a(0.3, -2.0), b(1.25, 0.5);
  const auto cf = taylor_coeffs(f, 20), cg = taylor_coeffs(g, 20);
  const auto cl = taylor_coeffs(lin_comb({a, b}, {f, g}), 20);
  for (std::size_t j = 0; j <= 20; ++j) CHECK(cl[j] == a * cf[j] + b * cg[j]);
}

TEST_CASE("truncated Taylor series reproduce evaluation") {
  std::mt19937_64 rng(3);
  for (const auto& [name, f] : corpus()) {
    CAPTURE(name);
    const auto c = taylor_coeffs(f, 60);
    for (int i = 0; i < 10; ++i) {
      const complex z = random_point(rng, 0.3);
      complex s{};
      for (std::size_t j = c.size(); j-- > 0;) s = s * z + c[j];
      CHECK(std::abs(s - eval(f, z)) <= 1e-10 * std::max(1.0, std::abs(s)));
    }
  }
}

TEST_CASE("products above the degree budget are unsupported") {
  const AnalyticExpr sq = product({log_one_minus(-1.0), log_one_minus(-1.0)});
  CHECK_NOTHROW(taylor_coeffs(sq, 64));
  CHECK_THROWS_AS(taylor_coeffs(sq, 65), UnsupportedNode);
  CHECK_NOTHROW(taylor_coeffs(sq, 100, TaylorOptions{128}));
}

TEST_CASE("builders reject parameters that leave the disk") {
  CHECK_THROWS_AS(log_one_minus(1.5), ParameterError);
  CHECK_NOTHROW(log_one_minus(unit(2.5)));
  CHECK_THROWS_AS(pow_neg(0.0), ParameterError);
  CHECK_THROWS_AS(pow_neg(-1.0), ParameterError);
  CHECK_THROWS_AS(dilate(monomial(1), 1.0), ParameterError);
  CHECK_THROWS_AS(dilate(monomial(1), 0.0), ParameterError);
  CHECK_THROWS_AS(rotate(monomial(1), 0.5), ParameterError);
  CHECK_THROWS_AS(half_log_ratio(7.0), ParameterError);
  CHECK_THROWS_AS(product({}), ParameterError);
  CHECK_THROWS_AS(lin_comb({1.0}, {monomial(1), monomial(2)}), ParameterError);
}

TEST_CASE("evaluation outside the open disk is a domain error") {
  CHECK_THROWS_AS(eval(monomial(1), complex(1.0, 0.0)), DomainError);
  CHECK_THROWS_AS(deriv(monomial(1), complex(0.0, -1.5)), DomainError);
  CHECK_THROWS_AS(DiskPoint::from_complex(complex(0.6, 0.8)), DomainError);
}

TEST_CASE("JSON round trip is lossless") {
  std::mt19937_64 rng(17);
  for (const auto& [name, f] : corpus()) {
    CAPTURE(name);
    const json j = to_json(f);
    const AnalyticExpr g = expr_from_json(j);
    CHECK(to_json(g) == j);
    CHECK(expr_from_json(json::parse(j.dump())).node().data.index() == f.node().data.index());
    for (int i = 0; i < 5; ++i) {
      const complex z = random_point(rng, 0.9);
      CHECK(eval(g, z) == eval(f, z));
    }
  }
}

TEST_CASE("malformed specs are parse errors") {
  CHECK_THROWS_AS(expr_from_json(json{{"kind", "sine"}}), ParseError);
  CHECK_THROWS_AS(expr_from_json(json{{"kind", "pow_neg"}}), ParseError);
  CHECK_THROWS_AS(expr_from_json(json{{"kind", "log_one_minus"}, {"alpha", 3.0}}), ParseError);
  CHECK_THROWS_AS(expr_from_json(json{{"kind", "dilate"}, {"r", 0.5}, {"children", json::array()}}), ParseError);
  CHECK_THROWS_AS(load_expr("/nonexistent/spec.json"), ParseError);
}
