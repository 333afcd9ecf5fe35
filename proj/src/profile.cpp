#include "rollwave/profile.hpp"

#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

namespace rollwave {

std::string_view to_string(Validity v) {
  switch (v) {
    case Validity::ok: return "ok";
    case Validity::froude_too_small: return "froude_too_small";
    case Validity::nonpositive_sonic: return "nonpositive_sonic";
    case Validity::below_homoclinic: return "below_homoclinic";
    case Validity::near_homoclinic: return "near_homoclinic";
    case Validity::above_sonic: return "above_sonic";
  }
  return "unknown";
}

double h_hom(double F) { return (1.0 + 2.0 * F + std::sqrt(1.0 + 4.0 * F)) / (2.0 * F * F); }

double z_plus(double hm) { return -0.5 * hm + std::sqrt(0.25 * hm * hm + 2.0 / hm); }

double z_plus_derivative(double hm) {
  const double hp = z_plus(hm);
  if (std::abs(hp - hm) < 1e-12) return -1.0;
  return (hp * hp * (hm * hm * hm - 1.0)) / (hm * hm * (hp * hp * hp - 1.0));
}

double h_low(double F) { return 1.0 / (F * F * h_hom(F)); }

// Factored numerator: no cancellation close to the homoclinic root.
double psi(double h, double F) {
  return F * F * (h - h_hom(F)) * (h - h_low(F)) / (h * h + h + 1.0);
}

double psi_full(double H, double F, double Hs) {
  return F * F * (H - Hs * h_hom(F)) * (H - Hs * h_low(F)) / (H * H + Hs * H + Hs * Hs);
}

double rh_residual(double F, double Hs, double Hm, double Hp) {
  const double q0 = Hs * std::sqrt(Hs) / F;
  const double lhs = q0 * q0 / Hm + Hm * Hm / (2 * F * F);
  const double rhs = q0 * q0 / Hp + Hp * Hp / (2 * F * F);
  return (lhs - rhs) / lhs;
}

ValidityReport validate_params(const WaveParameters& p, double near_homoclinic) {
  ValidityReport r;
  if (!(p.froude > 2.0)) {
    r.reason = Validity::froude_too_small;
    return r;
  }
  r.h_hom = h_hom(p.froude);
  if (!(p.h_sonic > 0.0)) {
    r.reason = Validity::nonpositive_sonic;
    return r;
  }
  const double hm = p.h_minus / p.h_sonic;
  r.margin_homoclinic = hm - r.h_hom;
  r.margin_sonic = 1.0 - hm;
  if (!(hm < 1.0)) {
    r.reason = Validity::above_sonic;
  } else if (!(hm > r.h_hom)) {
    r.reason = Validity::below_homoclinic;
  } else if (r.margin_homoclinic < near_homoclinic * r.h_hom) {
    r.reason = Validity::near_homoclinic;
  } else {
    r.valid = true;
  }
  return r;
}

void require_valid(const WaveParameters& p, double near_homoclinic) {
  const auto r = validate_params(p, near_homoclinic);
  if (!r.valid)
    throw Error(ErrorCode::invalid_parameters, std::string(to_string(r.reason)));
}

WaveQuantities derived_constants(const WaveParameters& p, double near_homoclinic) {
  require_valid(p, near_homoclinic);
  WaveQuantities w;
  const double F = p.froude, Hs = p.h_sonic;
  w.froude = F;
  w.h_sonic = Hs;
  w.h_minus = p.h_minus;
  w.speed = std::sqrt(Hs) * (1.0 + 1.0 / F);
  w.flux_const = Hs * std::sqrt(Hs) / F;
  w.h_plus = Hs * z_plus(p.h_minus / Hs);
  w.h_hom = h_hom(F);
  return w;
}

WaveQuantities unscale(const WaveQuantities& s, double Hs) {
  const double r = std::sqrt(Hs);
  WaveQuantities w = s;
  w.h_sonic = Hs;
  w.h_minus = s.h_minus * Hs;
  w.h_plus = s.h_plus * Hs;
  w.speed = s.speed * r;
  w.flux_const = s.flux_const * Hs * r;
  w.period = s.period * Hs;
  w.sonic_pos = s.sonic_pos * Hs;
  w.avg_h = s.avg_h * Hs;
  w.avg_q = s.avg_q * Hs * r;
  w.avg_gamma = s.avg_gamma * Hs * Hs;
  w.wavenumber = s.wavenumber / Hs;
  w.temporal_wavenumber = s.temporal_wavenumber / r;
  return w;
}

WaveQuantities quadratures(const WaveParameters& p, const QuadratureOptions& opt,
                           double near_homoclinic) {
  require_valid(p, near_homoclinic);
  const double F = p.froude;
  WaveQuantities s = derived_constants({F, 1.0, p.h_minus / p.h_sonic}, near_homoclinic);
  const double a = s.h_minus, b = s.h_plus;
  s.period = integrate([F](double h) { return 1.0 / psi(h, F); }, a, b, opt);
  s.sonic_pos = integrate([F](double h) { return 1.0 / psi(h, F); }, a, 1.0, opt);
  s.avg_h = integrate([F](double h) { return h / psi(h, F); }, a, b, opt) / s.period;
  s.avg_gamma = integrate([F](double h) { return (1.0 / h + 0.5 * h * h) / (F * F * psi(h, F)); }, a,
                          b, opt) /
                s.period;
  s.avg_q = s.speed * s.avg_h - s.flux_const;
  s.wavenumber = 1.0 / s.period;
  s.temporal_wavenumber = -s.speed * s.wavenumber;
  return unscale(s, p.h_sonic);
}

WaveQuantities quadratures_direct(const WaveParameters& p, const QuadratureOptions& opt) {
  WaveQuantities w = derived_constants(p);
  const double F = p.froude, Hs = p.h_sonic, q0 = w.flux_const;
  auto inv = [F, Hs](double H) { return 1.0 / psi_full(H, F, Hs); };
  const double a = w.h_minus, b = w.h_plus;
  w.period = integrate(inv, a, b, opt);
  w.sonic_pos = integrate(inv, a, Hs, opt);
  w.avg_h = integrate([&](double H) { return H * inv(H); }, a, b, opt) / w.period;
  w.avg_gamma =
      integrate([&](double H) { return (q0 * q0 / H + H * H / (2 * F * F)) * inv(H); }, a, b, opt) /
      w.period;
  w.avg_q = w.speed * w.avg_h - q0;
  w.wavenumber = 1.0 / w.period;
  w.temporal_wavenumber = -w.speed * w.wavenumber;
  return w;
}

ProfileField::ProfileField(const WaveParameters& p, const QuadratureOptions& opt)
    : p_(p), w_(quadratures(p, opt)), opt_(opt) {}

double ProfileField::slope_of_height(double H) const { return psi_full(H, p_.froude, p_.h_sonic); }

double ProfileField::x_of_height(double H) const {
  const double F = p_.froude, Hs = p_.h_sonic;
  return integrate([F, Hs](double h) { return 1.0 / psi_full(h, F, Hs); }, w_.h_minus, H, opt_);
}

double ProfileField::height_of_x(double x) const {
  if (x <= 0.0) return w_.h_minus;
  if (x >= w_.period) return w_.h_plus;
  auto f = [&](double H) { return x_of_height(H) - x; };
  boost::uintmax_t iters = 200;
  auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-14 * std::abs(a); };
  auto [lo, hi] = boost::math::tools::toms748_solve(f, w_.h_minus, w_.h_plus, -x,
                                                    w_.period - x, tol, iters);
  return 0.5 * (lo + hi);
}

std::vector<ProfileField::Sample> ProfileField::sample(int n) const {
  std::vector<Sample> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double x = w_.period * i / (n - 1);
    const double H = height_of_x(x);
    out.push_back({x, H, w_.speed * H - w_.flux_const});
  }
  return out;
}

}  // namespace rollwave
