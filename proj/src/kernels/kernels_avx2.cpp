#include "diskspace/kernels.hpp"

#include <immintrin.h>

#include <cassert>
#include <cstdint>

namespace diskspace::kernels::avx2 {

namespace {

// (s0 + s2) + (s1 + s3)
inline double combine(__m256d s) {
  const __m128d lo = _mm256_castpd256_pd128(s);
  const __m128d hi = _mm256_extractf128_pd(s, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

}  // namespace

MaxIndex max_abs2(std::span<const double> re, std::span<const double> im) {
  assert(re.size() == im.size());
  const std::size_t n = re.size();
  const std::size_t body = n - n % 4;
  MaxIndex best;
  if (body > 0) {
    __m256d vmax = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    __m256i vidx = _mm256_set1_epi64x(-1);
    __m256i cur = _mm256_setr_epi64x(0, 1, 2, 3);
    const __m256i step = _mm256_set1_epi64x(4);
    for (std::size_t i = 0; i < body; i += 4) {
      const __m256d r = _mm256_loadu_pd(re.data() + i);
      const __m256d m = _mm256_loadu_pd(im.data() + i);
      const __m256d a = _mm256_add_pd(_mm256_mul_pd(r, r), _mm256_mul_pd(m, m));
      const __m256d gt = _mm256_cmp_pd(a, vmax, _CMP_GT_OQ);
      vmax = _mm256_blendv_pd(vmax, a, gt);
      vidx = _mm256_castpd_si256(
          _mm256_blendv_pd(_mm256_castsi256_pd(vidx), _mm256_castsi256_pd(cur), gt));
      cur = _mm256_add_epi64(cur, step);
    }
    alignas(32) double lane_val[4];
    alignas(32) std::int64_t lane_idx[4];
    _mm256_store_pd(lane_val, vmax);
    _mm256_store_si256(reinterpret_cast<__m256i*>(lane_idx), vidx);
    for (int l = 0; l < 4; ++l) {
      if (lane_idx[l] < 0) continue;
      const auto idx = static_cast<std::size_t>(lane_idx[l]);
      if (lane_val[l] > best.value || (lane_val[l] == best.value && idx < best.index)) {
        best.value = lane_val[l];
        best.index = idx;
      }
    }
  }
  for (std::size_t i = body; i < n; ++i) {
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
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x.data() + i));
  double total = combine(acc);
  for (std::size_t i = body; i < n; ++i) total += x[i];
  return total;
}

double sum_abs2(std::span<const double> re, std::span<const double> im) {
  assert(re.size() == im.size());
  const std::size_t n = re.size();
  const std::size_t body = n - n % 4;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d r = _mm256_loadu_pd(re.data() + i);
    const __m256d m = _mm256_loadu_pd(im.data() + i);
    acc = _mm256_add_pd(acc, _mm256_add_pd(_mm256_mul_pd(r, r), _mm256_mul_pd(m, m)));
  }
  double total = combine(acc);
  for (std::size_t i = body; i < n; ++i) total += re[i] * re[i] + im[i] * im[i];
  return total;
}

std::complex<double> complex_dot(std::span<const double> a_re, std::span<const double> a_im,
                                 std::span<const double> b_re, std::span<const double> b_im) {
  assert(a_re.size() == a_im.size() && a_re.size() == b_re.size() && a_re.size() == b_im.size());
  const std::size_t n = a_re.size();
  const std::size_t body = n - n % 4;
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d ar = _mm256_loadu_pd(a_re.data() + i);
    const __m256d ai = _mm256_loadu_pd(a_im.data() + i);
    const __m256d br = _mm256_loadu_pd(b_re.data() + i);
    const __m256d bi = _mm256_loadu_pd(b_im.data() + i);
    acc_re = _mm256_add_pd(acc_re, _mm256_sub_pd(_mm256_mul_pd(ar, br), _mm256_mul_pd(ai, bi)));
    acc_im = _mm256_add_pd(acc_im, _mm256_add_pd(_mm256_mul_pd(ar, bi), _mm256_mul_pd(ai, br)));
  }
  double re = combine(acc_re);
  double im = combine(acc_im);
  for (std::size_t i = body; i < n; ++i) {
    re += a_re[i] * b_re[i] - a_im[i] * b_im[i];
    im += a_re[i] * b_im[i] + a_im[i] * b_re[i];
  }
  return {re, im};
}

}  // namespace diskspace::kernels::avx2
