#pragma once

// Reduction kernels used by the ring sweeps, the area quadrature and the
// coefficient fits. Every kernel has a scalar reference implementation and
// optional SIMD variants chosen at runtime.
//
// Summation order is fixed so that all variants agree bit for bit: the first
// 4*floor(n/4) elements are split into four interleaved lanes (element i goes
// to lane i % 4), the lanes are combined as (s0 + s2) + (s1 + s3), and the
// remaining n % 4 elements are then added in index order. No fused
// multiply-add is used anywhere.

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string_view>

namespace diskspace::kernels {

enum class Isa { scalar, avx2, neon };

struct MaxIndex {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t index = static_cast<std::size_t>(-1);
};

/// Largest re[i]^2 + im[i]^2; ties resolve to the lowest index and NaN
/// entries are skipped. Empty input yields {-inf, npos}.
MaxIndex max_abs2(std::span<const double> re, std::span<const double> im);

double sum(std::span<const double> x);

/// Sum of re[i]^2 + im[i]^2.
double sum_abs2(std::span<const double> re, std::span<const double> im);

/// Sum of a[i] * b[i] for complex arrays given as split real/imaginary parts.
std::complex<double> complex_dot(std::span<const double> a_re, std::span<const double> a_im,
                                 std::span<const double> b_re, std::span<const double> b_im);

Isa active_isa();
/// Best variant supported by both the build and the running CPU.
Isa best_isa();
bool isa_available(Isa isa);
/// Pins the dispatch to `isa`; throws ParameterError if it is unavailable.
void force_isa(Isa isa);
std::string_view isa_name(Isa isa);

namespace scalar {
MaxIndex max_abs2(std::span<const double> re, std::span<const double> im);
double sum(std::span<const double> x);
double sum_abs2(std::span<const double> re, std::span<const double> im);
std::complex<double> complex_dot(std::span<const double> a_re, std::span<const double> a_im,
                                 std::span<const double> b_re, std::span<const double> b_im);
}  // namespace scalar

#if defined(DISKSPACE_HAVE_AVX2)
namespace avx2 {
MaxIndex max_abs2(std::span<const double> re, std::span<const double> im);
double sum(std::span<const double> x);
double sum_abs2(std::span<const double> re, std::span<const double> im);
std::complex<double> complex_dot(std::span<const double> a_re, std::span<const double> a_im,
                                 std::span<const double> b_re, std::span<const double> b_im);
}  // namespace avx2
#endif

#if defined(DISKSPACE_HAVE_NEON)
namespace neon {
MaxIndex max_abs2(std::span<const double> re, std::span<const double> im);
double sum(std::span<const double> x);
double sum_abs2(std::span<const double> re, std::span<const double> im);
std::complex<double> complex_dot(std::span<const double> a_re, std::span<const double> a_im,
                                 std::span<const double> b_re, std::span<const double> b_im);
}  // namespace neon
#endif

}  // namespace diskspace::kernels
