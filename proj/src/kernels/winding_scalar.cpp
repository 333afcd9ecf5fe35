#include <algorithm>
#include <cmath>
#include <limits>

#include "rollwave/kernels/winding.hpp"

namespace rollwave::kernels {

void winding_sweep_scalar(const SplitView& s, const double* xi, std::size_t m, double period,
                          SweepOut out) {
  for (std::size_t k = 0; k < m; ++k) {
    const double er = std::cos(xi[k] * period), ei = std::sin(xi[k] * period);
    double total = 0, mx = 0, mn = std::numeric_limits<double>::infinity();
    double zr0 = s.d0re[0] + er * s.d1re[0] - ei * s.d1im[0];
    double zi0 = s.d0im[0] + er * s.d1im[0] + ei * s.d1re[0];
    for (std::size_t j = 0; j < s.n; ++j) {
      const std::size_t jn = j + 1 == s.n ? 0 : j + 1;
      const double zr1 = s.d0re[jn] + er * s.d1re[jn] - ei * s.d1im[jn];
      const double zi1 = s.d0im[jn] + er * s.d1im[jn] + ei * s.d1re[jn];
      const double wr = zr1 * zr0 + zi1 * zi0;
      const double wi = zi1 * zr0 - zr1 * zi0;
      const double d = std::atan2(wi, wr);
      total += d;
      mx = std::max(mx, std::abs(d));
      mn = std::min(mn, (zr0 * zr0 + zi0 * zi0) / s.scale[j]);
      zr0 = zr1;
      zi0 = zi1;
    }
    out.total[k] = total;
    out.max_step[k] = mx;
    out.min_ratio[k] = mn;
  }
}

}  // namespace rollwave::kernels
