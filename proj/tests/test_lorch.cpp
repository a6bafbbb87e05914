#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "diskspace/errors.hpp"
#include "diskspace/lorch.hpp"
#include "diskspace/lorch_json.hpp"

using namespace diskspace;

namespace {

// Frozen series oracles (mpmath, 30 digits).
constexpr double kNonLorchResidual = 0.897294270971800;   // sum_{n>=1} 2^(-n^2) 1.5^n
constexpr double kNonLorchOther = 0.265870095230866;      // sum_{n>=1} 2^(-n^2) 0.5^n
constexpr double kExpResidual = 3.48168907033806;         // e^1.5 - 1
constexpr double kHbSeries = 2.26587009523087;            // sum_n 2^(-n^2) 2^n

using E = AlgebraElement;

E el(std::initializer_list<complex> c) { return E(std::vector<complex>(c)); }

E random_element(std::mt19937_64& rng, std::size_t d, double scale = 1.0) {
  std::normal_distribution<double> n01;
  std::vector<complex> c;
  for (std::size_t i = 0; i < d; ++i) c.emplace_back(scale * n01(rng), scale * n01(rng));
  return E(c);
}

CoefficientRule two_pow_neg_square(std::size_t d) {
  CoefficientRule r;
  r.kind = CoefficientRule::Kind::exp_neg_square;
  r.q = 0.5;
  r.base = E::identity(d);
  return r;
}

CoefficientRule inv_factorial(std::size_t d) {
  CoefficientRule r;
  r.kind = CoefficientRule::Kind::inv_factorial;
  r.base = E::identity(d);
  return r;
}

CoefficientRule geometric(complex omega, std::size_t d) {
  CoefficientRule r;
  r.kind = CoefficientRule::Kind::geometric;
  r.omega = omega;
  r.base = E::identity(d);
  return r;
}

double max_diff(const E& a, const E& b) { return (a - b).norm(); }

}  // namespace

TEST_CASE("algebra elements") {
  CHECK_THROWS_AS(el({1.0}), ParameterError);
  CHECK(E::identity(3).norm() == 1.0);
  CHECK(el({1.0, complex(0.0, -3.0)}).norm() == 3.0);
  CHECK(el({1.0, 2.0}).invertible());
  CHECK_FALSE(el({1.0, 0.0}).invertible());
  CHECK_THROWS_AS(el({1.0, 2.0}) + E::identity(3), ParameterError);
  CHECK(max_diff(el({2.0, complex(0.0, 1.0)}).pow(3), el({8.0, complex(0.0, -1.0)})) < 1e-15);
}

TEST_CASE("algebra laws on random triples") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 500; ++t) {
    const std::size_t d = 2 + t % 4;
    const E x = random_element(rng, d), y = random_element(rng, d), z = random_element(rng, d);
    CHECK(max_diff(x * y, y * x) <= 1e-12);
    CHECK(max_diff((x * y) * z, x * (y * z)) <= 1e-12 * (1.0 + x.norm() * y.norm() * z.norm()));
    CHECK(max_diff(x * E::identity(d), x) == 0.0);
    CHECK((x * y).norm() <= x.norm() * y.norm() * (1.0 + 1e-12));
    CHECK(max_diff(x * (y + z), x * y + x * z) <= 1e-12 * (1.0 + x.norm() * (y.norm() + z.norm())));
  }
}

TEST_CASE("separating functional examples") {
  const auto phi = make_separating_functional(el({0.5, 1.5}));
  REQUIRE(phi.dim() == 2);
  CHECK(std::abs(phi.weights()[0] - 1.5) < 1e-14);
  CHECK(std::abs(phi.weights()[1] + 0.5) < 1e-14);
  CHECK(std::abs(phi(E::identity(2)) - 1.0) < 1e-14);
  CHECK(std::abs(phi(el({0.5, 1.5}))) < 1e-14);

  CHECK_THROWS_AS(make_separating_functional(E::identity(2)), ParameterError);
  CHECK_THROWS_AS(make_separating_functional(E::filled(3, complex(2.0, 1.0))), ParameterError);
  CHECK_THROWS_AS(make_separating_functional(el({0.0, 1.0})), ParameterError);

  const E x3 = el({1.0, 2.0, 0.5});
  const auto p3 = make_separating_functional(x3);
  CHECK(std::abs(p3(E::identity(3)) - 1.0) <= 1e-14);
  CHECK(std::abs(p3(x3)) <= 1e-14);
}

TEST_CASE("separating functional postconditions on random inputs") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 300; ++t) {
    const std::size_t d = 2 + t % 5;
    const E x = random_element(rng, d);
    const auto phi = make_separating_functional(x);
    CHECK(std::abs(phi(E::identity(d)) - 1.0) <= 1e-13);
    CHECK(std::abs(phi(x)) <= 1e-13 * std::max(1.0, x.norm()));
  }
}

TEST_CASE("fit examples") {
  const auto swap = make_permutation({1, 0});
  const auto fs = lorch_fit(*swap, 8);
  CHECK(fs.samples == 36);
  for (std::size_t n = 0; n <= 8; ++n) CHECK(max_diff(fs.coeffs[n], n == 1 ? E::identity(2) : E::filled(2, 0.0)) < 1e-14);
  CHECK_FALSE(fs.aliasing_detected);

  const auto sq = make_pointwise_poly({E::filled(2, 0.0), E::filled(2, 0.0), E::identity(2)});
  const auto fq = lorch_fit(*sq, 6);
  for (std::size_t n = 0; n <= 6; ++n) CHECK(max_diff(fq.coeffs[n], n == 2 ? E::identity(2) : E::filled(2, 0.0)) < 1e-14);

  const auto phi = make_separating_functional(el({0.5, 1.5}));
  const auto rule = two_pow_neg_square(2);
  const auto g = build_nonlorch_g(rule, phi, 12);
  const auto fg = lorch_fit(*g, 16);
  for (std::size_t n = 0; n <= 16; ++n) CHECK(max_diff(fg.coeffs[n], n <= 12 ? rule.at(n) : E::filled(2, 0.0)) < 1e-14);
  CHECK(fg.decay_estimate >= 0.0);
  CHECK(fg.coeffs.size() < fg.samples);

  CHECK_THROWS_AS(lorch_fit(*swap, 8, 1.0, 17), ParameterError);
  CHECK_THROWS_AS(lorch_fit(*swap, 8, 0.0), ParameterError);
}

TEST_CASE("residual examples") {
  const auto swap = make_permutation({1, 0});
  const auto rs = lorch_residual(*swap, lorch_fit(*swap, 8), {el({1.0, 0.0})});
  CHECK(std::abs(rs.max_deviation - 1.0) <= 1e-12);

  const E x0 = el({0.5, 1.5});
  const auto phi = make_separating_functional(x0);
  const auto g = build_nonlorch_g(two_pow_neg_square(2), phi, 12);
  const auto fit = lorch_fit(*g, 16);
  const auto rg = lorch_residual(*g, fit, {x0});
  CHECK(std::abs(rg.max_deviation - kNonLorchResidual) <= 1e-6);
  const E pred = lorch_eval(fit, x0);
  CHECK(std::abs(pred[0] - (1.0 + kNonLorchOther)) <= 1e-12);
  CHECK(std::abs(pred[1] - (1.0 + kNonLorchResidual)) <= 1e-12);

  CoefficientRule only_b0;
  only_b0.terms = {el({1.0, -2.0})};
  const auto c = build_nonlorch_g(only_b0, phi, 10);
  CHECK(lorch_residual(*c, lorch_fit(*c, 10), {x0}).max_deviation < 1e-13);

  const auto ge = build_nonlorch_g(inv_factorial(2), phi, 40);
  CHECK(std::abs(lorch_residual(*ge, lorch_fit(*ge, 48), {x0}).max_deviation - kExpResidual) <= 1e-6);
}

TEST_CASE("assessment verdicts") {
  const std::vector<E> pts{el({1.0, 0.0}), el({0.3, complex(0.0, -0.7)})};
  CHECK(lorch_assess(*make_permutation({1, 0}), 8, 1.0, std::nullopt, pts).verdict == LorchVerdict::non_lorch_evidence);
  const auto sq = make_pointwise_poly({E::filled(2, 0.0), E::filled(2, 0.0), E::identity(2)});
  const auto a = lorch_assess(*sq, 8, 1.0, std::nullopt, pts);
  CHECK(a.verdict == LorchVerdict::consistent);
  CHECK(a.residual.max_deviation < 1e-10);
  CHECK(std::string(lorch_verdict_name(LorchVerdict::non_lorch_evidence)) == "non-lorch-evidence");
}

TEST_CASE("pointwise polynomials are recovered exactly") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 30; ++t) {
    const std::size_t d = 2 + t % 3;
    const std::size_t deg = 1 + t % 7;
    std::vector<E> coeffs;
    for (std::size_t k = 0; k <= deg; ++k) coeffs.push_back(random_element(rng, d));
    const auto F = make_pointwise_poly(coeffs);
    const std::size_t N = deg + static_cast<std::size_t>(t % 3);
    const auto fit = lorch_fit(*F, N);
    for (std::size_t k = 0; k <= N; ++k) CHECK(max_diff(fit.coeffs[k], k <= deg ? coeffs[k] : E::filled(d, 0.0)) <= 1e-12);
    std::vector<E> pts;
    for (int i = 0; i < 10; ++i) pts.push_back(random_element(rng, d, 0.5));
    CHECK(lorch_residual(*F, fit, pts).max_deviation < 1e-10);
  }
}

TEST_CASE("fits transform under argument rescaling") {
  const E x0 = el({0.5, 1.5});
  const auto phi = make_separating_functional(x0);
  const std::vector<VectorMapPtr> corpus{
      make_permutation({1, 0}),
      make_pointwise_poly({el({1.0, 2.0}), el({0.0, complex(0.0, 1.0)}), el({-0.5, 0.25})}),
      build_nonlorch_g(two_pow_neg_square(2), phi, 12),
  };
  const std::vector<E> pts{el({1.0, 0.0}), x0, el({complex(0.2, 0.1), -0.4})};
  for (const auto& F : corpus) {
    const auto base = lorch_fit(*F, 16);
    const bool base_nonzero = lorch_residual(*F, base, pts).max_deviation > kResidualThreshold;
    for (complex alpha : {complex(0.0, 0.5), std::polar(1.5, 0.3), complex(-1.0, 0.0)}) {
      const auto Fa = make_scale_arg(F, alpha);
      const auto fit = lorch_fit(*Fa, 16);
      for (std::size_t n = 0; n <= 16; ++n) {
        const E want = base.coeffs[n] * std::pow(alpha, static_cast<double>(n));
        CHECK(max_diff(fit.coeffs[n], want) <= 1e-10 * std::max(1.0, want.norm()));
      }
      std::vector<E> scaled;
      for (const auto& p : pts) scaled.push_back(p * (1.0 / alpha));
      CHECK((lorch_residual(*Fa, fit, scaled).max_deviation > kResidualThreshold) == base_nonzero);
    }
  }
}

TEST_CASE("constructed maps send x0 to b0") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 2 + t % 3;
    E x0 = random_element(rng, d);
    const auto phi = make_separating_functional(x0);
    CoefficientRule rule = t % 2 ? two_pow_neg_square(d) : inv_factorial(d);
    rule.base = random_element(rng, d);
    const auto g = build_nonlorch_g(rule, phi, 20);
    CHECK(max_diff(evaluate(*g, x0), rule.at(0)) <= 1e-13 * std::max(1.0, rule.at(0).norm()));
  }
}

TEST_CASE("coefficient decay verdicts") {
  const auto geo = coefficient_decay(geometric(0.5, 2), 64);
  CHECK(std::abs(geo.estimate - 0.5) <= 1e-3);
  CHECK_FALSE(geo.entire_consistent);

  const auto fact = coefficient_decay(inv_factorial(2), 256);
  CHECK(fact.entire_consistent);
  CHECK(fact.estimate < kDecayEpsilon);

  const auto sq = coefficient_decay(two_pow_neg_square(2), 32);
  CHECK(sq.entire_consistent);
  CHECK(sq.estimate == doctest::Approx(std::ldexp(1.0, -17)).epsilon(1e-9));

  CHECK_THROWS_AS(coefficient_decay(geometric(0.5, 2), 7), ParameterError);
  CHECK_THROWS_AS(build_nonlorch_g(geometric(0.5, 2), make_separating_functional(el({0.5, 1.5})), 10), ParameterError);
}

TEST_CASE("geometric series are restricted to their convergence ball") {
  const auto F = make_power_series(geometric(2.0, 2), 30);
  CHECK(convergence_radius(*F) == doctest::Approx(0.5));
  CHECK_NOTHROW(evaluate(*F, el({0.2, complex(0.0, 0.3)})));
  CHECK_THROWS_AS(evaluate(*F, el({0.6, 0.0})), DomainError);
  CHECK(std::isinf(convergence_radius(*make_permutation({1, 0}))));
  CHECK_THROWS_AS(lorch_fit(*F, 8, 1.0), DomainError);
  CHECK_NOTHROW(lorch_fit(*F, 8, 0.4));
}

TEST_CASE("diagonal coefficient examples") {
  const auto a = diagonal_coeff_criterion({1.0, -1.0}, {0.5, 0.25}, 10);
  CHECK(std::abs(a.d[1] - 0.25) < 1e-15);
  CHECK_FALSE(a.all_zero);

  const auto z = diagonal_coeff_criterion({0.0, 0.0, 0.0}, {0.2, 0.5, 0.8}, 10);
  CHECK(z.all_zero);
  CHECK(z.certifies_zero);
  CHECK(z.vandermonde_rank == 3);

  const auto b = diagonal_coeff_criterion({1.0, 2.0, -3.0}, {0.2, 0.5, 0.8}, 10);
  CHECK(std::abs(b.d[0]) < 1e-15);
  CHECK(std::abs(b.d[1] + 1.2) < 1e-14);
  CHECK_FALSE(b.all_zero);

  CHECK_THROWS_AS(diagonal_coeff_criterion({1.0, 1.0}, {0.5, 0.5}, 10), ParameterError);
  CHECK_THROWS_AS(diagonal_coeff_criterion({1.0, 1.0}, {0.5, 1.5}, 10), ParameterError);
  CHECK_THROWS_AS(diagonal_coeff_criterion({1.0, 1.0, 1.0}, {0.1, 0.5, 0.7}, 2), ParameterError);
}

TEST_CASE("diagonal trials detect every nonzero coefficient vector") {
  const auto trials = diagonal_trials(50, 99);
  REQUIRE(trials.size() == 50);
  for (const auto& t : trials) CHECK_FALSE(t.report.all_zero);
}

TEST_CASE("bounded-set norm examples") {
  const auto id = make_pointwise_poly({E::filled(2, 0.0), E::identity(2)});
  CHECK(hb_ball_norm(*id, 2.0, 200).value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(hb_ball_norm(*make_permutation({1, 0}), 1.0, 200).value == doctest::Approx(1.0).epsilon(1e-14));
  const auto g = build_nonlorch_g(two_pow_neg_square(2), make_separating_functional(el({0.5, 1.5})), 12);
  const auto e = hb_ball_norm(*g, 1.0, 500);
  CHECK(std::abs(e.value - kHbSeries) <= 1e-12);
  for (std::size_t i = 1; i < e.trace.size(); ++i) CHECK(e.trace[i] >= e.trace[i - 1]);
}

TEST_CASE("vector map JSON round trip") {
  const auto phi = make_separating_functional(el({0.5, 1.5}));
  const std::vector<VectorMapPtr> maps{
      make_permutation({2, 0, 1}),
      make_pointwise_poly({el({1.0, 2.0}), E::identity(2)}),
      make_functional_power(phi, geometric(complex(0.0, 0.5), 2), 8),
      make_power_series(inv_factorial(2), 12),
      make_sum({make_permutation({1, 0}), make_scale_arg(build_nonlorch_g(two_pow_neg_square(2), phi, 10), 0.5)}),
  };
  std::mt19937_64 rng(1);
  for (const auto& F : maps) {
    const json j = to_json(*F);
    const auto back = vector_map_from_json(json::parse(j.dump()));
    CHECK(to_json(*back) == j);
    const E z = random_element(rng, F->dim, 0.3);
    CHECK(max_diff(evaluate(*back, z), evaluate(*F, z)) == 0.0);
  }
  CHECK_THROWS_AS(vector_map_from_json(json{{"kind", "fourier"}}), ParseError);
  CHECK_THROWS_AS(vector_map_from_json(json{{"kind", "permutation"}, {"perm", {0, 0}}}), ParseError);
}
