#include <cstdlib>
#include <cstring>

#include "rollwave/kernels/winding.hpp"

namespace rollwave::kernels {

namespace {

bool force_scalar() {
  const char* e = std::getenv("ROLLWAVE_FORCE_SCALAR");
  return e && std::strcmp(e, "0") != 0 && *e;
}

Backend detect() {
#if defined(ROLLWAVE_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  if (!force_scalar() && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return Backend::avx2;
#endif
  return Backend::scalar;
}

}  // namespace

Backend active_backend() {
  static const Backend b = detect();
  return b;
}

std::string_view to_string(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

void winding_sweep(const SplitView& s, const double* xi, std::size_t m, double period, SweepOut out) {
#if defined(ROLLWAVE_HAVE_AVX2_TU)
  if (active_backend() == Backend::avx2) return winding_sweep_avx2(s, xi, m, period, out);
#endif
  winding_sweep_scalar(s, xi, m, period, out);
}

}  // namespace rollwave::kernels
