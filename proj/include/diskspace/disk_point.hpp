#pragma once

#include <complex>
#include <cstdint>

namespace diskspace {

using complex = std::complex<double>;

/// A point of the open unit disk held as z = direction * (1 - offset), with
/// |direction| = 1 and offset in (0, 1].
///
/// The offset is kept separately so that 1 - |z|^2 and 1 - a z stay accurate
/// for points far closer to the circle than a plain double z can resolve
/// (offsets down to the smallest normal double are usable).
class DiskPoint {
 public:
  /// Throws DomainError unless |z| < 1.
  static DiskPoint from_complex(complex z);
  /// Point at angle `angle` and distance `offset` from the unit circle.
  static DiskPoint polar(double offset, double angle);
  /// `direction` is normalised; offset must lie in (0, 1].
  static DiskPoint on_ray(complex direction, double offset);

  complex z() const { return z_; }
  complex direction() const { return direction_; }
  double offset() const { return offset_; }
  double modulus() const { return 1.0 - offset_; }

  /// 1 - |z|^2 computed from the offset.
  double one_minus_abs2() const { return offset_ * (2.0 - offset_); }

  /// 1 - a z, accurate when a z is close to 1.
  complex one_minus(complex a) const;
  /// 1 + a z, accurate when a z is close to -1.
  complex one_plus(complex a) const { return one_minus(-a); }

  /// z^m with the modulus taken from the offset.
  complex pow(std::uint64_t m) const;

  /// The point r z for 0 < r <= 1.
  DiskPoint scaled(double r) const;
  /// The point a z for |a| = 1.
  DiskPoint rotated(complex a) const;

 private:
  DiskPoint(complex z, complex direction, double offset) : z_(z), direction_(direction), offset_(offset) {}

  complex z_;
  complex direction_;
  double offset_;
};

/// u^m for |u| = 1 by repeated squaring, renormalised to the unit circle.
complex unit_pow(complex u, std::uint64_t m);

}  // namespace diskspace
