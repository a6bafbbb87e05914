#include "diskspace/expr.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "diskspace/errors.hpp"

namespace diskspace {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

AnalyticExpr make(auto&& data) {
  return AnalyticExpr(std::make_shared<const ExprNode>(ExprNode{std::forward<decltype(data)>(data)}));
}

complex half_log_ratio_weight(double t) { return std::polar(1.0, -t); }

}  // namespace

AnalyticExpr constant(complex c) {
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw ParameterError("constant must be finite");
  return make(node::Constant{c});
}

AnalyticExpr monomial(unsigned degree) { return make(node::Monomial{degree}); }

AnalyticExpr log_one_minus(complex alpha) {
  if (!(std::abs(alpha) <= 1.0 + kUnitTolerance)) {
    throw ParameterError("log(1 - alpha z) needs |alpha| <= 1 to be analytic on the disk");
  }
  return make(node::LogOneMinus{alpha});
}

AnalyticExpr pow_neg(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("(1 - z)^(-beta) needs beta > 0");
  return make(node::PowNeg{beta});
}

AnalyticExpr lacunary(GapSeries series) {
  return make(node::Lacunary{std::make_shared<const GapSeries>(std::move(series))});
}

AnalyticExpr dilate(AnalyticExpr f, double r) {
  if (!(r > 0.0 && r < 1.0)) throw ParameterError("dilation radius must lie in (0, 1)");
  return make(node::Dilate{std::move(f), r});
}

AnalyticExpr rotate(AnalyticExpr f, complex alpha) {
  if (!(std::abs(std::abs(alpha) - 1.0) <= kUnitTolerance)) throw ParameterError("rotation needs |alpha| = 1");
  return make(node::Rotate{std::move(f), alpha});
}

AnalyticExpr lin_comb(std::vector<complex> coeffs, std::vector<AnalyticExpr> children) {
  if (coeffs.size() != children.size()) throw ParameterError("linear combination needs one coefficient per term");
  for (const complex& c : coeffs) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw ParameterError("coefficients must be finite");
  }
  return make(node::LinComb{std::move(coeffs), std::move(children)});
}

AnalyticExpr product(std::vector<AnalyticExpr> children) {
  if (children.empty()) throw ParameterError("product needs at least one factor");
  return make(node::Product{std::move(children)});
}

AnalyticExpr half_log_ratio(double t) {
  if (!(t >= 0.0 && t < 2.0 * std::numbers::pi)) throw ParameterError("half-log-ratio parameter t must lie in [0, 2 pi)");
  return make(node::HalfLogRatio{t});
}

AnalyticExpr operator+(const AnalyticExpr& f, const AnalyticExpr& g) { return lin_comb({1.0, 1.0}, {f, g}); }
AnalyticExpr operator-(const AnalyticExpr& f, const AnalyticExpr& g) { return lin_comb({1.0, -1.0}, {f, g}); }
AnalyticExpr operator*(complex c, const AnalyticExpr& f) { return lin_comb({c}, {f}); }
AnalyticExpr operator*(const AnalyticExpr& f, const AnalyticExpr& g) { return product({f, g}); }

complex eval(const AnalyticExpr& f, const DiskPoint& p) {
  return std::visit(
      Overloaded{
          [](const node::Constant& n) { return n.value; },
          [&](const node::Monomial& n) { return p.pow(n.degree); },
          [&](const node::LogOneMinus& n) { return std::log(p.one_minus(n.alpha)); },
          [&](const node::PowNeg& n) { return std::exp(-n.beta * std::log(p.one_minus(1.0))); },
          [&](const node::Lacunary& n) { return n.series->eval(p).value; },
          [&](const node::Dilate& n) { return eval(n.child, p.scaled(n.r)); },
          [&](const node::Rotate& n) { return eval(n.child, p.rotated(n.alpha)); },
          [&](const node::LinComb& n) {
            complex s{};
            for (std::size_t i = 0; i < n.children.size(); ++i) s += n.coeffs[i] * eval(n.children[i], p);
            return s;
          },
          [&](const node::Product& n) {
            complex s(1.0, 0.0);
            for (const auto& c : n.children) s *= eval(c, p);
            return s;
          },
          [&](const node::HalfLogRatio& n) {
            const complex w = half_log_ratio_weight(n.t);
            return 0.5 * w * (std::log(p.one_plus(w)) - std::log(p.one_minus(w)));
          },
      },
      f.node().data);
}

complex eval(const AnalyticExpr& f, complex z) { return eval(f, DiskPoint::from_complex(z)); }

BoundedValue eval_bounded(const AnalyticExpr& f, const DiskPoint& p) {
  return std::visit(
      Overloaded{
          [&](const node::Lacunary& n) {
            const auto v = n.series->eval(p);
            return BoundedValue{v.value, v.tail_bound};
          },
          [&](const node::Dilate& n) { return eval_bounded(n.child, p.scaled(n.r)); },
          [&](const node::Rotate& n) { return eval_bounded(n.child, p.rotated(n.alpha)); },
          [&](const node::LinComb& n) {
            BoundedValue s{{}, 0.0};
            for (std::size_t i = 0; i < n.children.size(); ++i) {
              const auto v = eval_bounded(n.children[i], p);
              s.value += n.coeffs[i] * v.value;
              s.tail_bound += std::abs(n.coeffs[i]) * v.tail_bound;
            }
            return s;
          },
          [&](const node::Product& n) {
            complex value(1.0, 0.0);
            double upper = 1.0;
            double exact = 1.0;
            for (const auto& c : n.children) {
              const auto v = eval_bounded(c, p);
              value *= v.value;
              upper *= std::abs(v.value) + v.tail_bound;
              exact *= std::abs(v.value);
            }
            return BoundedValue{value, upper - exact};
          },
          [&](const auto&) { return BoundedValue{eval(f, p), 0.0}; },
      },
      f.node().data);
}

complex deriv(const AnalyticExpr& f, const DiskPoint& p) {
  return std::visit(
      Overloaded{
          [](const node::Constant&) { return complex{}; },
          [&](const node::Monomial& n) {
            if (n.degree == 0) return complex{};
            return static_cast<double>(n.degree) * p.pow(n.degree - 1);
          },
          [&](const node::LogOneMinus& n) { return -n.alpha / p.one_minus(n.alpha); },
          [&](const node::PowNeg& n) { return n.beta * std::exp((-n.beta - 1.0) * std::log(p.one_minus(1.0))); },
          [&](const node::Lacunary& n) { return n.series->deriv(p); },
          [&](const node::Dilate& n) { return n.r * deriv(n.child, p.scaled(n.r)); },
          [&](const node::Rotate& n) { return n.alpha * deriv(n.child, p.rotated(n.alpha)); },
          [&](const node::LinComb& n) {
            complex s{};
            for (std::size_t i = 0; i < n.children.size(); ++i) s += n.coeffs[i] * deriv(n.children[i], p);
            return s;
          },
          [&](const node::Product& n) {
            std::vector<complex> values;
            values.reserve(n.children.size());
            for (const auto& c : n.children) values.push_back(eval(c, p));
            complex s{};
            for (std::size_t i = 0; i < n.children.size(); ++i) {
              complex term = deriv(n.children[i], p);
              for (std::size_t j = 0; j < n.children.size(); ++j) {
                if (j != i) term *= values[j];
              }
              s += term;
            }
            return s;
          },
          [&](const node::HalfLogRatio& n) {
            const complex w = half_log_ratio_weight(n.t);
            return w * w / (p.one_minus(w) * p.one_plus(w));
          },
      },
      f.node().data);
}

complex deriv(const AnalyticExpr& f, complex z) { return deriv(f, DiskPoint::from_complex(z)); }

void eval_many(const AnalyticExpr& f, Order order, std::span<const DiskPoint> points, std::span<double> re,
               std::span<double> im) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    const complex v = order == Order::value ? eval(f, points[i]) : deriv(f, points[i]);
    re[i] = v.real();
    im[i] = v.imag();
  }
}

namespace {

void scale_by_powers(std::vector<complex>& c, complex a) {
  complex ap(1.0, 0.0);
  for (auto& x : c) {
    x *= ap;
    ap *= a;
  }
}

}  // namespace

std::vector<complex> taylor_coeffs(const AnalyticExpr& f, std::size_t N, const TaylorOptions& options) {
  std::vector<complex> c(N + 1, complex{});
  std::visit(
      Overloaded{
          [&](const node::Constant& n) { c[0] = n.value; },
          [&](const node::Monomial& n) {
            if (n.degree <= N) c[n.degree] = 1.0;
          },
          [&](const node::LogOneMinus& n) {
            complex ap = n.alpha;
            for (std::size_t j = 1; j <= N; ++j) {
              c[j] = -ap / static_cast<double>(j);
              ap *= n.alpha;
            }
          },
          [&](const node::PowNeg& n) {
            c[0] = 1.0;
            for (std::size_t j = 1; j <= N; ++j) c[j] = c[j - 1] * ((static_cast<double>(j) - 1.0 + n.beta) / static_cast<double>(j));
          },
          [&](const node::Lacunary& n) {
            const auto& e = n.series->exponents();
            for (std::size_t k = 0; k <= n.series->truncation() && e[k] <= N; ++k) c[e[k]] = n.series->coefficient(k);
          },
          [&](const node::Dilate& n) {
            c = taylor_coeffs(n.child, N, options);
            scale_by_powers(c, n.r);
          },
          [&](const node::Rotate& n) {
            c = taylor_coeffs(n.child, N, options);
            scale_by_powers(c, n.alpha);
          },
          [&](const node::LinComb& n) {
            for (std::size_t i = 0; i < n.children.size(); ++i) {
              const auto ci = taylor_coeffs(n.children[i], N, options);
              for (std::size_t j = 0; j <= N; ++j) c[j] += n.coeffs[i] * ci[j];
            }
          },
          [&](const node::Product& n) {
            if (N > options.product_degree_budget) {
              throw UnsupportedNode("product expansion beyond degree budget " +
                                    std::to_string(options.product_degree_budget));
            }
            c = taylor_coeffs(n.children.front(), N, options);
            for (std::size_t i = 1; i < n.children.size(); ++i) {
              const auto b = taylor_coeffs(n.children[i], N, options);
              std::vector<complex> out(N + 1, complex{});
              for (std::size_t j = 0; j <= N; ++j) {
                for (std::size_t k = 0; k <= j; ++k) out[j] += c[k] * b[j - k];
              }
              c = std::move(out);
            }
          },
          [&](const node::HalfLogRatio& n) {
            const complex w = half_log_ratio_weight(n.t);
            complex wp = w * w;  // w^{j+1} for j = 1
            for (std::size_t j = 1; j <= N; ++j) {
              if (j % 2 == 1) c[j] = wp / static_cast<double>(j);
              wp *= w;
            }
          },
      },
      f.node().data);
  return c;
}

}  // namespace diskspace
