#include <cmath>

#include "doctest.h"
#include "rollwave/profile.hpp"

using namespace rollwave;

namespace {
// Unfactored slope numerator over denominator.
double psi_expanded(double h, double F) { return (F * F * h * h - (1 + 2 * F) * h + 1) / (h * h + h + 1); }
}  // namespace

TEST_CASE("closed-form constants") {
  for (double F : {2.5, 3.0, 8.0}) {
    for (double Hs : {1.0, 2.0, 4.0}) {
      const WaveQuantities w = derived_constants({F, Hs, 0.8 * Hs});
      CHECK(w.speed == doctest::Approx(std::sqrt(Hs) * (1 + 1 / F)).epsilon(1e-15));
      CHECK(w.flux_const == doctest::Approx(std::pow(Hs, 1.5) / F).epsilon(1e-15));
    }
    CHECK(psi(1.0, F) == doctest::Approx(F * (F - 2) / 3).epsilon(1e-14));
  }
}

TEST_CASE("homoclinic root and factored slope") {
  for (double F : {2.1, 3.0, 8.0, 16.3}) {
    const double hh = h_hom(F);
    CHECK(std::abs(F * F * hh * hh - (1 + 2 * F) * hh + 1) < 1e-13);
    CHECK(hh * h_low(F) == doctest::Approx(1 / (F * F)).epsilon(1e-14));
    CHECK(hh < 1.0);
    for (double h : {0.3, 0.7, 0.95, 1.3})
      CHECK(psi(h, F) == doctest::Approx(psi_expanded(h, F)).epsilon(1e-12));
    CHECK(psi_full(2.0 * 0.9, F, 2.0) == doctest::Approx(psi(0.9, F)).epsilon(1e-14));
  }
}

TEST_CASE("shock relation") {
  for (double hm : {0.2, 0.5, 0.8, 0.99}) {
    const double hp = z_plus(hm);
    CHECK(hp > 1.0);
    for (double F : {3.0, 8.0}) CHECK(std::abs(rh_residual(F, 1.0, hm, hp)) <= 1e-12);
    const double d = 1e-6;
    CHECK(z_plus_derivative(hm) == doctest::Approx((z_plus(hm + d) - z_plus(hm - d)) / (2 * d)).epsilon(1e-7));
  }
  CHECK(rh_residual(3.0, 2.0, 1.6, 2.0 * z_plus(0.8)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("parameter validation") {
  CHECK(validate_params({2.0, 1.0, 0.8}).reason == Validity::froude_too_small);
  CHECK(validate_params({3.0, -1.0, 0.8}).reason == Validity::nonpositive_sonic);
  CHECK(validate_params({3.0, 1.0, 1.0}).reason == Validity::above_sonic);
  CHECK(validate_params({3.0, 1.0, 0.5}).reason == Validity::below_homoclinic);
  CHECK(validate_params({3.0, 1.0, h_hom(3.0) * (1 + 1e-10)}).reason == Validity::near_homoclinic);
  CHECK(validate_params({3.0, 1.0, h_hom(3.0) * (1 + 1e-10)}, 1e-12).valid);
  const auto r = validate_params({3.0, 2.0, 1.6});
  CHECK(r.valid);
  CHECK(r.margin_sonic == doctest::Approx(0.2));
  CHECK_THROWS_AS(derived_constants({1.5, 1.0, 0.8}), Error);
}

TEST_CASE("quadratures: scaled route matches physical integration") {
  for (double Hs : {1.0, 2.0, 4.0}) {
    const WaveParameters p{3.0, Hs, 0.8 * Hs};
    const WaveQuantities a = quadratures(p), b = quadratures_direct(p);
    CHECK(a.period == doctest::Approx(b.period).epsilon(1e-9));
    CHECK(a.avg_h == doctest::Approx(b.avg_h).epsilon(1e-9));
    CHECK(a.sonic_pos == doctest::Approx(b.sonic_pos).epsilon(1e-9));
    CHECK(a.period == doctest::Approx(Hs * quadratures({3.0, 1.0, 0.8}).period).epsilon(1e-12));
  }
  // Period diverges logarithmically at the homoclinic end.
  const double X1 = quadratures({3.0, 1.0, h_hom(3.0) + 1e-4}).period;
  const double X2 = quadratures({3.0, 1.0, h_hom(3.0) + 1e-6}).period;
  CHECK(X2 > X1 + 1.0);
}

TEST_CASE("profile field inverts x(H)") {
  const ProfileField f({3.0, 1.0, 0.8});
  const auto& q = f.quantities();
  for (double H : {0.81, 0.9, 1.0, 1.1, 1.3}) {
    if (H >= q.h_plus) continue;
    CHECK(f.height_of_x(f.x_of_height(H)) == doctest::Approx(H).epsilon(1e-10));
  }
  CHECK(f.x_of_height(1.0) == doctest::Approx(q.sonic_pos).epsilon(1e-10));
  const auto s = f.sample(64);
  REQUIRE(s.size() == 64);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i].H >= s[i - 1].H);
  CHECK(s.front().H == doctest::Approx(q.h_minus));
}
