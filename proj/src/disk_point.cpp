#include "diskspace/disk_point.hpp"

#include <cmath>
#include <string>

#include "diskspace/errors.hpp"

namespace diskspace {

DiskPoint DiskPoint::from_complex(complex z) {
  const double r = std::abs(z);
  if (!(r < 1.0)) throw DomainError("point outside the open unit disk: |z| = " + std::to_string(r));
  if (r == 0.0) return DiskPoint(z, complex(1.0, 0.0), 1.0);
  return DiskPoint(z, z / r, 1.0 - r);
}

DiskPoint DiskPoint::polar(double offset, double angle) {
  if (!(offset > 0.0 && offset <= 1.0)) throw DomainError("offset outside (0, 1]");
  const complex u(std::cos(angle), std::sin(angle));
  return DiskPoint((1.0 - offset) * u, u, offset);
}

DiskPoint DiskPoint::on_ray(complex direction, double offset) {
  if (!(offset > 0.0 && offset <= 1.0)) throw DomainError("offset outside (0, 1]");
  const double n = std::abs(direction);
  if (!(n > 0.0)) throw DomainError("ray direction must be nonzero");
  const complex u = n == 1.0 ? direction : direction / n;
  return DiskPoint((1.0 - offset) * u, u, offset);
}

complex DiskPoint::one_minus(complex a) const {
  // Away from the circle the direct form is exact enough and keeps 1 - a*0 = 1.
  if (offset_ >= 0.5) return 1.0 - a * z_;
  const complex au = a * direction_;
  return (1.0 - au) + au * offset_;
}

namespace {

complex binary_pow(complex base, std::uint64_t m) {
  complex result(1.0, 0.0);
  while (m > 0) {
    if (m & 1u) result *= base;
    m >>= 1;
    if (m > 0) base *= base;
  }
  return result;
}

}  // namespace

complex unit_pow(complex u, std::uint64_t m) {
  const complex result = binary_pow(u, m);
  const double n = std::abs(result);
  return n > 0.0 ? result / n : result;
}

complex DiskPoint::pow(std::uint64_t m) const {
  if (m == 0) return {1.0, 0.0};
  if (offset_ >= 0.5) return binary_pow(z_, m);
  const double modulus = std::exp(static_cast<double>(m) * std::log1p(-offset_));
  if (modulus == 0.0) return {0.0, 0.0};
  return modulus * unit_pow(direction_, m);
}

DiskPoint DiskPoint::scaled(double r) const {
  return DiskPoint(r * z_, direction_, (1.0 - r) + r * offset_);
}

DiskPoint DiskPoint::rotated(complex a) const { return DiskPoint(a * z_, a * direction_, offset_); }

}  // namespace diskspace
