#pragma once

#include <cstddef>
#include <string_view>

namespace rollwave::kernels {

// Split-determinant samples along a closed contour, structure of arrays.
// scale[j] = (|d0_j| + |d1_j|)^2 is used for the near-zero guard.
struct SplitView {
  const double* d0re;
  const double* d0im;
  const double* d1re;
  const double* d1im;
  const double* scale;
  std::size_t n;
};

// Per xi: sum of principal-value argument increments of d0 + e^{i xi X} d1 over
// the n closed-contour edges, the largest |increment|, and the smallest
// |hat Delta|^2 / scale.
struct SweepOut {
  double* total;
  double* max_step;
  double* min_ratio;
};

void winding_sweep_scalar(const SplitView& s, const double* xi, std::size_t m, double period,
                          SweepOut out);
#if defined(ROLLWAVE_HAVE_AVX2_TU)
void winding_sweep_avx2(const SplitView& s, const double* xi, std::size_t m, double period,
                        SweepOut out);
#endif

enum class Backend { scalar, avx2 };
Backend active_backend();
std::string_view to_string(Backend b);
// Runtime-dispatched entry point.  ROLLWAVE_FORCE_SCALAR=1 selects the scalar path.
void winding_sweep(const SplitView& s, const double* xi, std::size_t m, double period, SweepOut out);

}  // namespace rollwave::kernels
