#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "diskspace/errors.hpp"
#include "diskspace/lorch.hpp"

namespace diskspace {

AlgebraElement::AlgebraElement(std::vector<complex> components) : c_(std::move(components)) {
  if (c_.size() < 2) throw ParameterError("algebra dimension must be at least 2, got " + std::to_string(c_.size()));
}

AlgebraElement AlgebraElement::identity(std::size_t d) { return filled(d, 1.0); }

AlgebraElement AlgebraElement::filled(std::size_t d, complex c) { return AlgebraElement(std::vector<complex>(d, c)); }

double AlgebraElement::norm() const {
  double m = 0.0;
  for (complex v : c_) m = std::max(m, std::abs(v));
  return m;
}

bool AlgebraElement::invertible() const {
  return std::all_of(c_.begin(), c_.end(), [](complex v) { return v != complex{}; });
}

void AlgebraElement::require_same_dim(const AlgebraElement& o) const {
  if (o.dim() != dim()) throw ParameterError("algebra elements differ in dimension");
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  require_same_dim(o);
  std::vector<complex> r(dim());
  for (std::size_t i = 0; i < dim(); ++i) r[i] = c_[i] + o.c_[i];
  return AlgebraElement(std::move(r));
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  require_same_dim(o);
  std::vector<complex> r(dim());
  for (std::size_t i = 0; i < dim(); ++i) r[i] = c_[i] - o.c_[i];
  return AlgebraElement(std::move(r));
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
  require_same_dim(o);
  std::vector<complex> r(dim());
  for (std::size_t i = 0; i < dim(); ++i) r[i] = c_[i] * o.c_[i];
  return AlgebraElement(std::move(r));
}

AlgebraElement AlgebraElement::operator*(complex s) const {
  std::vector<complex> r(dim());
  for (std::size_t i = 0; i < dim(); ++i) r[i] = c_[i] * s;
  return AlgebraElement(std::move(r));
}

AlgebraElement AlgebraElement::pow(unsigned n) const {
  std::vector<complex> r(dim(), 1.0);
  for (std::size_t i = 0; i < dim(); ++i) {
    complex base = c_[i];
    for (unsigned e = n; e != 0; e >>= 1) {
      if (e & 1U) r[i] *= base;
      base *= base;
    }
  }
  return AlgebraElement(std::move(r));
}

LinearFunctional::LinearFunctional(std::vector<complex> weights) : w_(std::move(weights)) {
  if (w_.size() < 2) throw ParameterError("functional dimension must be at least 2");
}

complex LinearFunctional::operator()(const AlgebraElement& z) const {
  if (z.dim() != w_.size()) throw ParameterError("functional and element differ in dimension");
  complex s = 0.0;
  for (std::size_t i = 0; i < w_.size(); ++i) s += w_[i] * z[i];
  return s;
}

double LinearFunctional::norm() const {
  double s = 0.0;
  for (complex w : w_) s += std::abs(w);
  return s;
}

LinearFunctional make_separating_functional(const AlgebraElement& x0) {
  if (!x0.invertible()) throw ParameterError("x0 must be invertible (every component nonzero)");
  const std::size_t d = x0.dim();
  // Constraint rows are e and x0; the minimal-norm solution is A^H (A A^H)^{-1} b.
  complex sum_x = 0.0;
  double sum_abs2 = 0.0;
  for (complex v : x0.components()) {
    sum_x += v;
    sum_abs2 += std::norm(v);
  }
  const double det = static_cast<double>(d) * sum_abs2 - std::norm(sum_x);
  if (!(det > 1e-14 * static_cast<double>(d) * sum_abs2)) {
    throw ParameterError("x0 is parallel to the identity; no functional separates them");
  }
  // Solve (A A^H) y = r and add A^H y to w.
  auto correct = [&](std::vector<complex>& w, complex r0, complex r1) {
    const complex y0 = (sum_abs2 * r0 - std::conj(sum_x) * r1) / det;
    const complex y1 = (static_cast<double>(d) * r1 - sum_x * r0) / det;
    for (std::size_t i = 0; i < d; ++i) w[i] += y0 + std::conj(x0[i]) * y1;
  };
  std::vector<complex> w(d, 0.0);
  correct(w, 1.0, 0.0);
  // One step of iterative refinement.
  complex e_val = 0.0, x_val = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    e_val += w[i];
    x_val += w[i] * x0[i];
  }
  correct(w, 1.0 - e_val, -x_val);
  return LinearFunctional(std::move(w));
}

std::size_t CoefficientRule::dim() const {
  if (kind == Kind::explicit_list) {
    if (terms.empty()) throw ParameterError("explicit coefficient list is empty");
    return terms.front().dim();
  }
  if (!base) throw ParameterError("coefficient rule needs a base element");
  return base->dim();
}

AlgebraElement CoefficientRule::at(std::size_t n) const {
  switch (kind) {
    case Kind::explicit_list:
      if (n < terms.size()) return terms[n];
      return AlgebraElement::filled(dim(), 0.0);
    case Kind::geometric:
      return *base * std::pow(omega, static_cast<double>(n));
    case Kind::inv_factorial:
      return *base * std::exp(-std::lgamma(static_cast<double>(n) + 1.0));
    case Kind::exp_neg_square: {
      const double nn = static_cast<double>(n);
      return *base * std::pow(q, nn * nn);
    }
  }
  throw ParameterError("unknown coefficient rule");
}

double CoefficientRule::log_norm(std::size_t n) const {
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  const double nn = static_cast<double>(n);
  auto base_log = [&] {
    const double b = dim() > 0 ? base->norm() : 0.0;
    return b > 0.0 ? std::log(b) : neg_inf;
  };
  switch (kind) {
    case Kind::explicit_list: {
      if (n >= terms.size()) return neg_inf;
      const double v = terms[n].norm();
      return v > 0.0 ? std::log(v) : neg_inf;
    }
    case Kind::geometric:
      if (omega == complex{}) return n == 0 ? base_log() : neg_inf;
      return nn * std::log(std::abs(omega)) + base_log();
    case Kind::inv_factorial:
      return -std::lgamma(nn + 1.0) + base_log();
    case Kind::exp_neg_square:
      return nn * nn * std::log(q) + base_log();
  }
  return neg_inf;
}

}  // namespace diskspace
