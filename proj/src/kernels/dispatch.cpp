#include <atomic>
#include <cstdlib>
#include <string>

#include "diskspace/errors.hpp"
#include "diskspace/kernels.hpp"

namespace diskspace::kernels {

namespace {

struct Table {
  MaxIndex (*max_abs2)(std::span<const double>, std::span<const double>);
  double (*sum)(std::span<const double>);
  double (*sum_abs2)(std::span<const double>, std::span<const double>);
  std::complex<double> (*complex_dot)(std::span<const double>, std::span<const double>,
                                      std::span<const double>, std::span<const double>);
};

constexpr Table kScalar{scalar::max_abs2, scalar::sum, scalar::sum_abs2, scalar::complex_dot};
#if defined(DISKSPACE_HAVE_AVX2)
constexpr Table kAvx2{avx2::max_abs2, avx2::sum, avx2::sum_abs2, avx2::complex_dot};
#endif
#if defined(DISKSPACE_HAVE_NEON)
constexpr Table kNeon{neon::max_abs2, neon::sum, neon::sum_abs2, neon::complex_dot};
#endif

const Table& table_for(Isa isa) {
  switch (isa) {
#if defined(DISKSPACE_HAVE_AVX2)
    case Isa::avx2:
      return kAvx2;
#endif
#if defined(DISKSPACE_HAVE_NEON)
    case Isa::neon:
      return kNeon;
#endif
    default:
      return kScalar;
  }
}

Isa initial_isa() {
  // DISKSPACE_ISA=scalar pins the reference kernels.
  if (const char* env = std::getenv("DISKSPACE_ISA")) {
    const std::string want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && isa_available(Isa::avx2)) return Isa::avx2;
    if (want == "neon" && isa_available(Isa::neon)) return Isa::neon;
  }
  return best_isa();
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

const Table& active() { return table_for(current().load(std::memory_order_relaxed)); }

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(DISKSPACE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(DISKSPACE_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa best_isa() {
  if (isa_available(Isa::avx2)) return Isa::avx2;
  if (isa_available(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (!isa_available(isa)) throw ParameterError("kernel variant not available: " + std::string(isa_name(isa)));
  current().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

MaxIndex max_abs2(std::span<const double> re, std::span<const double> im) {
  return active().max_abs2(re, im);
}

double sum(std::span<const double> x) { return active().sum(x); }

double sum_abs2(std::span<const double> re, std::span<const double> im) {
  return active().sum_abs2(re, im);
}

std::complex<double> complex_dot(std::span<const double> a_re, std::span<const double> a_im,
                                 std::span<const double> b_re, std::span<const double> b_im) {
  return active().complex_dot(a_re, a_im, b_re, b_im);
}

}  // namespace diskspace::kernels
