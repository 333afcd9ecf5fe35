#include <cmath>

#include "doctest.h"
#include "rollwave/modulation.hpp"

using namespace rollwave;

TEST_CASE("scaled average derivatives against differences") {
  for (double F : {3.0, 8.0}) {
    const double hm = F == 3.0 ? 0.8 : 0.3, d = 1e-5;
    const auto s = scaled_averages(F, hm);
    const auto a = scaled_averages(F, hm + d), b = scaled_averages(F, hm - d);
    CHECK(s.d_ell == doctest::Approx((a.ell - b.ell) / (2 * d)).epsilon(1e-6));
    CHECK(s.d_avg_h == doctest::Approx((a.avg_h - b.avg_h) / (2 * d)).epsilon(1e-6));
    CHECK(s.d_avg_gamma == doctest::Approx((a.avg_gamma - b.avg_gamma) / (2 * d)).epsilon(1e-6));
    CHECK(s.d_sonic_pos == doctest::Approx((a.sonic_pos - b.sonic_pos) / (2 * d)).epsilon(1e-6));
  }
}

TEST_CASE("physical derivatives in H_s by differences") {
  const WaveParameters p{3.0, 1.5, 1.2};
  const auto d = param_derivatives(p);
  const double e = 1e-6;
  auto X = [](double Hs, double Hm) { return quadratures({3.0, Hs, Hm}).period; };
  CHECK(d.d_period_dhs == doctest::Approx((X(1.5 + e, 1.2) - X(1.5 - e, 1.2)) / (2 * e)).epsilon(1e-6));
  CHECK(d.d_period_dhm == doctest::Approx((X(1.5, 1.2 + e) - X(1.5, 1.2 - e)) / (2 * e)).epsilon(1e-6));
}

TEST_CASE("Whitham characteristics are the generalized eigenvalues") {
  for (double F : {2.5, 3.0, 8.0}) {
    for (double hm : {0.8, 0.9}) {
      if (hm <= h_hom(F)) continue;
      const WaveParameters p{F, 1.0, hm};
      const auto ch = whitham_characteristics(p);
      const auto j = whitham_jacobians(p);
      const auto ev = generalized_eigenvalues(j);
      const double lo = std::min(ch.alpha1, ch.alpha2), hi = std::max(ch.alpha1, ch.alpha2);
      CHECK(ev[0] == doctest::Approx(lo).epsilon(1e-9));
      CHECK(ev[1] == doctest::Approx(hi).epsilon(1e-9));
      CHECK(ch.hyperbolic);
      CHECK(j.evolutionary);
      for (double a : ev) {
        const double xi = 0.3;
        double n0 = 0, n1 = 0;
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c) n0 += std::abs(j.a0[r][c]), n1 += std::abs(j.a1[r][c]);
        const double scale = std::pow(xi * (std::abs(a) * n0 + n1), 2);
        CHECK(std::abs(whitham_dispersion(j, std::complex<double>(0, -xi * a), xi)) < 1e-10 * scale);
      }
    }
  }
}

TEST_CASE("characteristic speeds scale like sqrt(H_s)") {
  const auto a = whitham_characteristics({3.0, 1.0, 0.8});
  for (double Hs : {2.0, 4.0}) {
    const auto b = whitham_characteristics({3.0, Hs, 0.8 * Hs});
    CHECK(b.alpha1 == doctest::Approx(std::sqrt(Hs) * a.alpha1).epsilon(1e-10));
    CHECK(b.alpha2 == doctest::Approx(std::sqrt(Hs) * a.alpha2).epsilon(1e-10));
  }
}

TEST_CASE("averaged model: discriminant sign matches real characteristics") {
  int agree = 0, total = 0;
  for (double F : {2.5, 3.0, 5.0, 8.0}) {
    for (int k = 1; k < 10; ++k) {
      const double hh = h_hom(F), hm = hh + (1 - hh) * k / 10.0;
      const WaveParameters p{F, 1.0, hm};
      const auto ev = generalized_eigenvalues(averaged_jacobians(p));
      const Mat2 m = averaged_reduced_matrix(p);
      const double tr = m[0][0] + m[1][1], dt = det(m);
      const bool real_reduced = tr * tr - 4 * dt >= 0;
      ++total;
      if (std::isfinite(ev[0]) == real_reduced && (averaged_discriminant(p) >= 0) == real_reduced) ++agree;
    }
  }
  CHECK(agree == total);
}
