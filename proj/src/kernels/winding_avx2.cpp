#include <immintrin.h>

#include <cmath>
#include <limits>

#include "rollwave/kernels/winding.hpp"

namespace rollwave::kernels {

namespace {

// Cephes atan coefficients.
constexpr double kP[5] = {-8.750608600031904122785e-1, -1.615753718733365076637e1,
                          -7.500855792314704667340e1, -1.228866684490136173410e2,
                          -6.485021904942025371773e1};
constexpr double kQ[5] = {2.485846490142306297962e1, 1.650270098316988542046e2,
                          4.328810604912902668951e2, 4.853903996359136964868e2,
                          1.945506571482613964425e2};
constexpr double kMoreBits = 6.123233995736765886130e-17;
constexpr double kPi = 3.14159265358979323846;

inline __m256d set1(double v) { return _mm256_set1_pd(v); }

// atan on [0, 1].
inline __m256d atan01(__m256d t) {
  const __m256d one = set1(1.0);
  const __m256d big = _mm256_cmp_pd(t, set1(0.66), _CMP_GT_OQ);
  const __m256d x = _mm256_blendv_pd(t, _mm256_div_pd(_mm256_sub_pd(t, one), _mm256_add_pd(t, one)), big);
  const __m256d y0 = _mm256_and_pd(big, set1(0.25 * kPi));
  const __m256d more = _mm256_and_pd(big, set1(0.5 * kMoreBits));
  const __m256d z = _mm256_mul_pd(x, x);
  __m256d p = set1(kP[0]);
  for (int i = 1; i < 5; ++i) p = _mm256_fmadd_pd(p, z, set1(kP[i]));
  __m256d q = _mm256_add_pd(z, set1(kQ[0]));
  for (int i = 1; i < 5; ++i) q = _mm256_fmadd_pd(q, z, set1(kQ[i]));
  const __m256d r = _mm256_div_pd(_mm256_mul_pd(z, p), q);
  const __m256d v = _mm256_fmadd_pd(x, r, x);
  return _mm256_add_pd(_mm256_add_pd(y0, v), more);
}

inline __m256d atan2v(__m256d y, __m256d x) {
  const __m256d sign = set1(-0.0);
  const __m256d ay = _mm256_andnot_pd(sign, y), ax = _mm256_andnot_pd(sign, x);
  const __m256d num = _mm256_min_pd(ay, ax), den = _mm256_max_pd(ay, ax);
  const __m256d zero_den = _mm256_cmp_pd(den, _mm256_setzero_pd(), _CMP_EQ_OQ);
  const __m256d t = _mm256_andnot_pd(zero_den, _mm256_div_pd(num, den));
  __m256d a = atan01(t);
  a = _mm256_blendv_pd(a, _mm256_sub_pd(set1(0.5 * kPi), a), _mm256_cmp_pd(ay, ax, _CMP_GT_OQ));
  a = _mm256_blendv_pd(a, _mm256_sub_pd(set1(kPi), a), x);  // sign bit of x
  return _mm256_or_pd(a, _mm256_and_pd(sign, y));
}

}  // namespace

void winding_sweep_avx2(const SplitView& s, const double* xi, std::size_t m, double period,
                        SweepOut out) {
  std::size_t k = 0;
  for (; k + 4 <= m; k += 4) {
    alignas(32) double c[4], sn[4];
    for (int l = 0; l < 4; ++l) {
      c[l] = std::cos(xi[k + l] * period);
      sn[l] = std::sin(xi[k + l] * period);
    }
    const __m256d er = _mm256_load_pd(c), ei = _mm256_load_pd(sn);
    __m256d total = _mm256_setzero_pd(), mx = _mm256_setzero_pd();
    __m256d mn = set1(std::numeric_limits<double>::infinity());
    auto z_at = [&](std::size_t j, __m256d& zr, __m256d& zi) {
      const __m256d ar = set1(s.d0re[j]), ai = set1(s.d0im[j]);
      const __m256d br = set1(s.d1re[j]), bi = set1(s.d1im[j]);
      zr = _mm256_sub_pd(_mm256_fmadd_pd(er, br, ar), _mm256_mul_pd(ei, bi));
      zi = _mm256_add_pd(_mm256_fmadd_pd(er, bi, ai), _mm256_mul_pd(ei, br));
    };
    __m256d zr0, zi0;
    z_at(0, zr0, zi0);
    const __m256d sign = set1(-0.0);
    for (std::size_t j = 0; j < s.n; ++j) {
      const std::size_t jn = j + 1 == s.n ? 0 : j + 1;
      __m256d zr1, zi1;
      z_at(jn, zr1, zi1);
      const __m256d wr = _mm256_fmadd_pd(zr1, zr0, _mm256_mul_pd(zi1, zi0));
      const __m256d wi = _mm256_fmsub_pd(zi1, zr0, _mm256_mul_pd(zr1, zi0));
      const __m256d d = atan2v(wi, wr);
      total = _mm256_add_pd(total, d);
      mx = _mm256_max_pd(mx, _mm256_andnot_pd(sign, d));
      const __m256d mod = _mm256_fmadd_pd(zr0, zr0, _mm256_mul_pd(zi0, zi0));
      mn = _mm256_min_pd(mn, _mm256_div_pd(mod, set1(s.scale[j])));
      zr0 = zr1;
      zi0 = zi1;
    }
    _mm256_storeu_pd(out.total + k, total);
    _mm256_storeu_pd(out.max_step + k, mx);
    _mm256_storeu_pd(out.min_ratio + k, mn);
  }
  if (k < m) {
    SweepOut tail{out.total + k, out.max_step + k, out.min_ratio + k};
    winding_sweep_scalar(s, xi + k, m - k, period, tail);
  }
}

}  // namespace rollwave::kernels
