#include "diskspace/kernels.hpp"

#include <cassert>

namespace diskspace::kernels::scalar {

MaxIndex max_abs2(std::span<const double> re, std::span<const double> im) {
  assert(re.size() == im.size());
  MaxIndex best;
  for (std::size_t i = 0; i < re.size(); ++i) {
    const double m = re[i] * re[i] + im[i] * im[i];
    if (m > best.value) {
      best.value = m;
      best.index = i;
    }
  }
  return best;
}

namespace {

// Canonical four-lane order shared with the SIMD variants.
template <class Term>
double lane_sum(std::size_t n, Term term) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    s[0] += term(i);
    s[1] += term(i + 1);
    s[2] += term(i + 2);
    s[3] += term(i + 3);
  }
  double total = (s[0] + s[2]) + (s[1] + s[3]);
  for (std::size_t i = body; i < n; ++i) total += term(i);
  return total;
}

}  // namespace

double sum(std::span<const double> x) {
  return lane_sum(x.size(), [&](std::size_t i) { return x[i]; });
}

double sum_abs2(std::span<const double> re, std::span<const double> im) {
  assert(re.size() == im.size());
  return lane_sum(re.size(), [&](std::size_t i) { return re[i] * re[i] + im[i] * im[i]; });
}

std::complex<double> complex_dot(std::span<const double> a_re, std::span<const double> a_im,
                                 std::span<const double> b_re, std::span<const double> b_im) {
  assert(a_re.size() == a_im.size() && a_re.size() == b_re.size() && a_re.size() == b_im.size());
  const std::size_t n = a_re.size();
  const double re = lane_sum(n, [&](std::size_t i) { return a_re[i] * b_re[i] - a_im[i] * b_im[i]; });
  const double im = lane_sum(n, [&](std::size_t i) { return a_re[i] * b_im[i] + a_im[i] * b_re[i]; });
  return {re, im};
}

}  // namespace diskspace::kernels::scalar
