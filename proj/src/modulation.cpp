#include "rollwave/modulation.hpp"

#include <cmath>
#include <limits>

namespace rollwave {

double det(const Mat2& a) { return a[0][0] * a[1][1] - a[0][1] * a[1][0]; }

Mat2 inverse(const Mat2& a) {
  const double d = det(a);
  return {{{a[1][1] / d, -a[0][1] / d}, {-a[1][0] / d, a[0][0] / d}}};
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return r;
}

ScaledAverages scaled_averages(double F, double hm, const QuadratureOptions& opt) {
  require_valid({F, 1.0, hm});
  ScaledAverages s;
  s.h_minus = hm;
  s.h_plus = z_plus(hm);
  s.speed = 1.0 + 1.0 / F;
  s.flux = 1.0 / F;
  const double hp = s.h_plus;
  auto g = [F](double h) { return (1.0 / h + 0.5 * h * h) / (F * F); };
  s.ell = integrate([F](double h) { return 1.0 / psi(h, F); }, hm, hp, opt);
  s.sonic_pos = integrate([F](double h) { return 1.0 / psi(h, F); }, hm, 1.0, opt);
  const double lh = integrate([F](double h) { return h / psi(h, F); }, hm, hp, opt);
  const double lg = integrate([&](double h) { return g(h) / psi(h, F); }, hm, hp, opt);
  s.avg_h = lh / s.ell;
  s.avg_gamma = lg / s.ell;

  s.d_zplus = z_plus_derivative(hm);
  const double pp = psi(hp, F), pm = psi(hm, F);
  s.d_ell = s.d_zplus / pp - 1.0 / pm;
  const double d_lh = hp * s.d_zplus / pp - hm / pm;
  s.d_avg_h = (d_lh - s.avg_h * s.d_ell) / s.ell;
  // g(H_+) = g(H_-) by the jump condition, so d(ell*gamma) = g(H_-) ell'.
  s.d_avg_gamma = s.d_ell * (g(hm) - s.avg_gamma) / s.ell;
  s.d_sonic_pos = -1.0 / pm;
  return s;
}

ParamDerivatives param_derivatives(const WaveParameters& p, const QuadratureOptions& opt) {
  ParamDerivatives d;
  const double Hs = p.h_sonic, hm = p.h_minus / Hs;
  d.scaled = scaled_averages(p.froude, hm, opt);
  const auto& s = d.scaled;
  d.d_ell_dhm = s.d_ell / Hs;
  d.d_ell_dhs = -hm * s.d_ell / Hs;
  d.d_period_dhm = s.d_ell;
  d.d_period_dhs = s.ell - hm * s.d_ell;
  d.d_avgh_dhm = s.d_avg_h;
  d.d_avgh_dhs = s.avg_h - hm * s.d_avg_h;
  d.d_avggamma_dhm = Hs * s.d_avg_gamma;
  d.d_avggamma_dhs = 2.0 * Hs * s.avg_gamma - hm * Hs * s.d_avg_gamma;
  // x_- = -H_s * sonic_pos(H_-/H_s)
  d.d_xminus_dhm = -s.d_sonic_pos;
  d.d_xminus_dhs = -s.sonic_pos + hm * s.d_sonic_pos;
  return d;
}

ModulationJacobians whitham_jacobians(const WaveParameters& p, const QuadratureOptions& opt) {
  const double Hs = p.h_sonic, r = std::sqrt(Hs);
  const auto s = scaled_averages(p.froude, p.h_minus / Hs, opt);
  ModulationJacobians j;
  j.system_tag = SystemTag::whitham;
  const double l = s.ell, dl = s.d_ell, H = s.avg_h, dH = s.d_avg_h, c = s.speed, q = s.flux;
  j.a0 = {{{H, Hs * dH}, {-1.0 / (Hs * Hs * l), -dl / (Hs * l * l)}}};
  j.a1 = {{{1.5 * r * (c * H - q), Hs * r * c * dH},
           {-0.5 * c / (Hs * r * l), -c * dl / (r * l * l)}}};
  j.det_a0 = det(j.a0);
  j.evolutionary = std::abs(j.det_a0) > 1e-14 * (std::abs(j.a0[0][0] * j.a0[1][1]) +
                                                  std::abs(j.a0[0][1] * j.a0[1][0]));
  return j;
}

ModulationJacobians averaged_jacobians(const WaveParameters& p, const QuadratureOptions& opt) {
  const double Hs = p.h_sonic, r = std::sqrt(Hs);
  const auto s = scaled_averages(p.froude, p.h_minus / Hs, opt);
  ModulationJacobians j;
  j.system_tag = SystemTag::averaged;
  const double H = s.avg_h, dH = s.d_avg_h, c = s.speed, q = s.flux, g = s.avg_gamma,
               dg = s.d_avg_gamma;
  j.a0 = {{{H, Hs * dH}, {1.5 * r * (c * H - q), Hs * r * c * dH}}};
  j.a1 = {{{1.5 * r * (c * H - q), Hs * r * c * dH},
           {2.0 * Hs * (c * c * H - 2.0 * c * q + g), Hs * Hs * (c * c * dH + dg)}}};
  j.det_a0 = det(j.a0);
  j.evolutionary = std::abs(j.det_a0) > 1e-14 * (std::abs(j.a0[0][0] * j.a0[1][1]) +
                                                  std::abs(j.a0[0][1] * j.a0[1][0]));
  return j;
}

std::complex<double> whitham_dispersion(const ModulationJacobians& j, std::complex<double> lambda,
                                        std::complex<double> xi) {
  const std::complex<double> I(0.0, 1.0);
  std::complex<double> m[2][2];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) m[a][b] = lambda * j.a0[a][b] + I * xi * j.a1[a][b];
  return m[0][0] * m[1][1] - m[0][1] * m[1][0];
}

std::array<double, 2> generalized_eigenvalues(const ModulationJacobians& j) {
  const auto& a = j.a0;
  const auto& b = j.a1;
  const double qa = det(a);
  const double qb = -(b[0][0] * a[1][1] + a[0][0] * b[1][1] - b[0][1] * a[1][0] - a[0][1] * b[1][0]);
  const double qc = det(b);
  const double disc = qb * qb - 4 * qa * qc;
  if (disc < 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan};
  }
  const double sq = std::sqrt(disc);
  const double t = -0.5 * (qb + std::copysign(sq, qb));
  double m1 = t / qa, m2 = qc / t;
  if (m1 > m2) std::swap(m1, m2);
  return {m1, m2};
}

Characteristics whitham_characteristics(const WaveParameters& p, const QuadratureOptions& opt) {
  const double Hs = p.h_sonic, r = std::sqrt(Hs);
  const auto s = scaled_averages(p.froude, p.h_minus / Hs, opt);
  const double l = s.ell, dl = s.d_ell, H = s.avg_h, dH = s.d_avg_h, c = s.speed, q = s.flux;
  const double den = l * dH - H * dl;
  const double scale = std::abs(l * dH) + std::abs(H * dl);
  if (!(std::abs(den) > 1e-13 * scale))
    throw Error(ErrorCode::degenerate_system, "det A0 vanishes");
  Characteristics ch;
  ch.alpha1 = r * c;
  const double d_lh = l * dH + H * dl;
  ch.alpha2 = r * c + r * (1.5 * dl * q - 0.5 * c * d_lh) / den;
  ch.jordan_quantity = l * (c * H - 1.5 * q) / den;
  const bool coincide =
      std::abs(ch.alpha2 - ch.alpha1) < 1e-9 * (std::abs(ch.alpha1) + std::abs(ch.alpha2));
  ch.hyperbolic = true;
  ch.jordan_defect = coincide && std::abs(ch.jordan_quantity) > 1e-12;
  return ch;
}

Mat2 averaged_reduced_matrix(const WaveParameters& p, const QuadratureOptions& opt) {
  const double Hs = p.h_sonic, r = std::sqrt(Hs);
  const auto s = scaled_averages(p.froude, p.h_minus / Hs, opt);
  const double H = s.avg_h, dH = s.d_avg_h, c = s.speed, q = s.flux, g = s.avg_gamma,
               dg = s.d_avg_gamma;
  const double k = 1.0 / ((1.5 * q - 0.5 * c * H) * dH);
  return {{{k * r * dH * (c * q - 2 * g), -k * Hs * r * dg * dH},
           {k * (2 * g * H - 0.25 * c * c * H * H + 0.5 * c * q * H - 2.25 * q * q) / r,
            k * r * H * dg}}};
}

double averaged_discriminant(const WaveParameters& p, const QuadratureOptions& opt) {
  const double F = p.froude;
  const auto s = scaled_averages(F, p.h_minus / p.h_sonic, opt);
  const double H = s.avg_h, dH = s.d_avg_h, g = s.avg_gamma, dg = s.d_avg_gamma;
  const double a = dH * (F + 1 - 2 * F * F * g) + H * F * F * dg;
  const double b = (F + 1) * H - 3;
  return a * a + F * F * dg * dH * b * b;
}

}  // namespace rollwave
