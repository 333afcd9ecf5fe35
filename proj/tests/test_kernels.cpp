#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "rollwave/kernels/winding.hpp"

using namespace rollwave::kernels;
using cplx = std::complex<double>;

namespace {

struct Soa {
  std::vector<double> d0re, d0im, d1re, d1im, scale;
  SplitView view() const { return {d0re.data(), d0im.data(), d1re.data(), d1im.data(), scale.data(), d0re.size()}; }
  void push(cplx a, cplx b) {
    d0re.push_back(a.real());
    d0im.push_back(a.imag());
    d1re.push_back(b.real());
    d1im.push_back(b.imag());
    const double s = std::abs(a) + std::abs(b);
    scale.push_back(s * s);
  }
};

struct Out {
  std::vector<double> total, mx, mn;
  explicit Out(std::size_t m) : total(m), mx(m), mn(m) {}
  SweepOut view() { return {total.data(), mx.data(), mn.data()}; }
};

// z^3 - 0.1 + 0.2 e^{i xi X} z on the unit circle: three roots inside.
Soa cubic_circle(int n) {
  Soa s;
  for (int j = 0; j < n; ++j) {
    const cplx z = std::polar(1.0, 2 * M_PI * j / n);
    s.push(z * z * z - 0.1, 0.2 * z);
  }
  return s;
}

}  // namespace

TEST_CASE("scalar kernel counts roots of a known polynomial") {
  const Soa s = cubic_circle(4096);
  std::vector<double> xi{0.0, 0.3, 1.0, 2.0, 3.0};
  Out o(xi.size());
  winding_sweep_scalar(s.view(), xi.data(), xi.size(), 1.0, o.view());
  for (std::size_t k = 0; k < xi.size(); ++k) {
    CHECK(o.total[k] / (2 * M_PI) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(o.mx[k] < 0.1);
    CHECK(o.mn[k] > 0);
  }
}

#if defined(ROLLWAVE_HAVE_AVX2_TU)
TEST_CASE("AVX2 kernel matches the scalar reference") {
  if (active_backend() != Backend::avx2) {
    MESSAGE("AVX2 not available on this CPU; equivalence not exercised");
    return;
  }
  std::mt19937 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 4; ++trial) {
    Soa s = trial == 0 ? cubic_circle(1000) : Soa{};
    if (trial > 0)
      for (int j = 0; j < 777; ++j) s.push(cplx(g(rng), g(rng)), cplx(g(rng), g(rng)) * 0.7);
    // 13 xi values: three full vectors and a scalar tail.
    std::vector<double> xi;
    for (int k = 0; k < 13; ++k) xi.push_back(-1.0 + 0.37 * k);
    Out a(xi.size()), b(xi.size());
    winding_sweep_scalar(s.view(), xi.data(), xi.size(), 2.3, a.view());
    winding_sweep_avx2(s.view(), xi.data(), xi.size(), 2.3, b.view());
    for (std::size_t k = 0; k < xi.size(); ++k) {
      CHECK(std::abs(a.total[k] - b.total[k]) < 1e-12 * s.d0re.size());
      CHECK(b.mx[k] == doctest::Approx(a.mx[k]).epsilon(1e-13));
      CHECK(b.mn[k] == doctest::Approx(a.mn[k]).epsilon(1e-13));
    }
  }
}

TEST_CASE("vector atan2 covers every quadrant and the axes") {
  // Two-point contours make each total a single increment arg(z1/z0) plus its negative;
  // use three points so the first increment is exposed through max_step.
  const double angles[] = {0.0, 0.5, 1.5707963267948966, 2.0, 3.141592653589793, -2.5, -1.5707963267948966, -0.3};
  for (double a : angles) {
    Soa s;
    s.push(1.0, 0.0);
    s.push(std::polar(1.0, a), 0.0);
    s.push(std::polar(1.0, 0.5 * a), 0.0);
    std::vector<double> xi(4, 0.0);
    Out x(4), y(4);
    winding_sweep_scalar(s.view(), xi.data(), 4, 1.0, x.view());
    winding_sweep_avx2(s.view(), xi.data(), 4, 1.0, y.view());
    CHECK(std::abs(x.total[0] - y.total[0]) < 1e-15);
    CHECK(y.mx[0] == doctest::Approx(x.mx[0]).epsilon(1e-15));
  }
}
#endif

TEST_CASE("dispatch reports a backend and the env override is honoured by name") {
  const auto b = active_backend();
  CHECK((to_string(b) == "avx2" || to_string(b) == "scalar"));
  const Soa s = cubic_circle(512);
  double xi = 0.25;
  Out o(1);
  winding_sweep(s.view(), &xi, 1, 1.0, o.view());
  CHECK(std::lround(o.total[0] / (2 * M_PI)) == 3);
}
