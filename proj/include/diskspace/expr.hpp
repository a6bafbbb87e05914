#pragma once

// Closed-form analytic functions on the unit disk.
//
// An AnalyticExpr is an immutable tree; copies share nodes. Every node kind
// is analytic on the whole open disk, which the builders enforce on their
// parameters. Logarithms and powers use the principal branch: for |a| <= 1 and
// |z| < 1 the argument 1 - a z has positive real part, so no branch cut
// meets the disk.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "diskspace/disk_point.hpp"
#include "diskspace/gap_series.hpp"

namespace diskspace {

struct ExprNode;

class AnalyticExpr {
 public:
  explicit AnalyticExpr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

  const ExprNode& node() const { return *node_; }

 private:
  std::shared_ptr<const ExprNode> node_;
};

namespace node {

struct Constant {
  complex value;
};
/// z^degree
struct Monomial {
  unsigned degree;
};
/// log(1 - alpha z), |alpha| <= 1
struct LogOneMinus {
  complex alpha;
};
/// (1 - z)^(-beta), beta > 0
struct PowNeg {
  double beta;
};
struct Lacunary {
  std::shared_ptr<const GapSeries> series;
};
/// f(r z), 0 < r < 1
struct Dilate {
  AnalyticExpr child;
  double r;
};
/// f(alpha z), |alpha| = 1
struct Rotate {
  AnalyticExpr child;
  complex alpha;
};
struct LinComb {
  std::vector<complex> coeffs;
  std::vector<AnalyticExpr> children;
};
struct Product {
  std::vector<AnalyticExpr> children;
};
/// (w/2) log((1 + w z)/(1 - w z)) with w = e^{-i t}
struct HalfLogRatio {
  double t;
};

}  // namespace node

struct ExprNode {
  std::variant<node::Constant, node::Monomial, node::LogOneMinus, node::PowNeg, node::Lacunary, node::Dilate,
               node::Rotate, node::LinComb, node::Product, node::HalfLogRatio>
      data;
};

// Builders. Each validates its parameters and throws ParameterError.
AnalyticExpr constant(complex c);
AnalyticExpr monomial(unsigned degree);
AnalyticExpr log_one_minus(complex alpha);
AnalyticExpr pow_neg(double beta);
AnalyticExpr lacunary(GapSeries series);
AnalyticExpr dilate(AnalyticExpr f, double r);
AnalyticExpr rotate(AnalyticExpr f, complex alpha);
AnalyticExpr lin_comb(std::vector<complex> coeffs, std::vector<AnalyticExpr> children);
AnalyticExpr product(std::vector<AnalyticExpr> children);
AnalyticExpr half_log_ratio(double t);

AnalyticExpr operator+(const AnalyticExpr& f, const AnalyticExpr& g);
AnalyticExpr operator-(const AnalyticExpr& f, const AnalyticExpr& g);
AnalyticExpr operator*(complex c, const AnalyticExpr& f);
AnalyticExpr operator*(const AnalyticExpr& f, const AnalyticExpr& g);

/// Tolerance used when checking |alpha| <= 1 and |alpha| = 1.
inline constexpr double kUnitTolerance = 1e-12;

complex eval(const AnalyticExpr& f, const DiskPoint& p);
/// Throws DomainError unless |z| < 1.
complex eval(const AnalyticExpr& f, complex z);

struct BoundedValue {
  complex value;
  /// Bound on the error from truncating lacunary nodes (zero when there are none).
  double tail_bound;
};
BoundedValue eval_bounded(const AnalyticExpr& f, const DiskPoint& p);

complex deriv(const AnalyticExpr& f, const DiskPoint& p);
complex deriv(const AnalyticExpr& f, complex z);

/// Value or derivative at many points, written as split real/imaginary arrays.
enum class Order { value, derivative };
void eval_many(const AnalyticExpr& f, Order order, std::span<const DiskPoint> points, std::span<double> re,
               std::span<double> im);

struct TaylorOptions {
  /// Largest order for which products are expanded by Cauchy product.
  std::size_t product_degree_budget = 64;
};

/// Taylor coefficients c_0..c_N at the origin. Throws UnsupportedNode for
/// products when N exceeds the degree budget.
std::vector<complex> taylor_coeffs(const AnalyticExpr& f, std::size_t N, const TaylorOptions& options = {});

}  // namespace diskspace
