#include "diskspace/kernels.hpp"

#include <arm_neon.h>

#include <cassert>

// Four logical lanes held in two float64x2 registers: lo = {s0, s1}, hi = {s2, s3}.

namespace diskspace::kernels::neon {

namespace {

inline double combine(float64x2_t lo, float64x2_t hi) {
  const float64x2_t pair = vaddq_f64(lo, hi);  // {s0 + s2, s1 + s3}
  return vgetq_lane_f64(pair, 0) + vgetq_lane_f64(pair, 1);
}

}  // namespace

MaxIndex max_abs2(std::span<const double> re, std::span<const double> im) {
  assert(re.size() == im.size());
  // Comparisons run in index order as in the scalar scan; only the squared
  // moduli are vectorised.
  const std::size_t n = re.size();
  MaxIndex best;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t r = vld1q_f64(re.data() + i);
    const float64x2_t m = vld1q_f64(im.data() + i);
    const float64x2_t a = vaddq_f64(vmulq_f64(r, r), vmulq_f64(m, m));
    const double a0 = vgetq_lane_f64(a, 0);
    const double a1 = vgetq_lane_f64(a, 1);
    if (a0 > best.value) {
      best.value = a0;
      best.index = i;
    }
    if (a1 > best.value) {
      best.value = a1;
      best.index = i + 1;
    }
  }
  for (; i < n; ++i) {
    const double m = re[i] * re[i] + im[i] * im[i];
    if (m > best.value) {
      best.value = m;
      best.index = i;
    }
  }
  return best;
}

double sum(std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t body = n - n % 4;
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < body; i += 4) {
    lo = vaddq_f64(lo, vld1q_f64(x.data() + i));
    hi = vaddq_f64(hi, vld1q_f64(x.data() + i + 2));
  }
  double total = combine(lo, hi);
  for (std::size_t i = body; i < n; ++i) total += x[i];
  return total;
}

double sum_abs2(std::span<const double> re, std::span<const double> im) {
  assert(re.size() == im.size());
  const std::size_t n = re.size();
  const std::size_t body = n - n % 4;
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < body; i += 4) {
    const float64x2_t r0 = vld1q_f64(re.data() + i);
    const float64x2_t m0 = vld1q_f64(im.data() + i);
    const float64x2_t r1 = vld1q_f64(re.data() + i + 2);
    const float64x2_t m1 = vld1q_f64(im.data() + i + 2);
    lo = vaddq_f64(lo, vaddq_f64(vmulq_f64(r0, r0), vmulq_f64(m0, m0)));
    hi = vaddq_f64(hi, vaddq_f64(vmulq_f64(r1, r1), vmulq_f64(m1, m1)));
  }
  double total = combine(lo, hi);
  for (std::size_t i = body; i < n; ++i) total += re[i] * re[i] + im[i] * im[i];
  return total;
}

std::complex<double> complex_dot(std::span<const double> a_re, std::span<const double> a_im,
                                 std::span<const double> b_re, std::span<const double> b_im) {
  assert(a_re.size() == a_im.size() && a_re.size() == b_re.size() && a_re.size() == b_im.size());
  const std::size_t n = a_re.size();
  const std::size_t body = n - n % 4;
  float64x2_t re_lo = vdupq_n_f64(0.0), re_hi = vdupq_n_f64(0.0);
  float64x2_t im_lo = vdupq_n_f64(0.0), im_hi = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < body; i += 4) {
    for (int half = 0; half < 2; ++half) {
      const std::size_t j = i + 2 * half;
      const float64x2_t ar = vld1q_f64(a_re.data() + j);
      const float64x2_t ai = vld1q_f64(a_im.data() + j);
      const float64x2_t br = vld1q_f64(b_re.data() + j);
      const float64x2_t bi = vld1q_f64(b_im.data() + j);
      const float64x2_t tr = vsubq_f64(vmulq_f64(ar, br), vmulq_f64(ai, bi));
      const float64x2_t ti = vaddq_f64(vmulq_f64(ar, bi), vmulq_f64(ai, br));
      if (half == 0) {
        re_lo = vaddq_f64(re_lo, tr);
        im_lo = vaddq_f64(im_lo, ti);
      } else {
        re_hi = vaddq_f64(re_hi, tr);
        im_hi = vaddq_f64(im_hi, ti);
      }
    }
  }
  double re = combine(re_lo, re_hi);
  double im = combine(im_lo, im_hi);
  for (std::size_t i = body; i < n; ++i) {
    re += a_re[i] * b_re[i] - a_im[i] * b_im[i];
    im += a_re[i] * b_im[i] + a_im[i] * b_re[i];
  }
  return {re, im};
}

}  // namespace diskspace::kernels::neon
