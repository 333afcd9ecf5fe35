#include "rollwave/lowfreq.hpp"

#include <cmath>

#include "rollwave/parallel.hpp"

namespace rollwave {

double alpha1_cubic(double F, double hm) {
  const double hp = z_plus(hm);
  const double a = hm, b = hp, ab = a * b;
  return F * F * F * ab * ab - 2 * F * F * ab * (a + b) +
         F * (3 * ab * ab - 4 * ab * (a + b) + 7 * ab + a * a + b * b) + ab * ab -
         2 * ab * (a + b) + a * a + b * b + 7 * ab - 3 * (a + b);
}

double alpha1_closed(const WaveParameters& p) {
  require_valid(p, 0.0);
  const double F = p.froude, Hs = p.h_sonic, hm = p.h_minus / Hs, hp = z_plus(hm);
  const double X = quadratures(p, {}, 0.0).period;
  const double pre = Hs * Hs * (hp - hm) / (F * F * (F + 1) * hm * hm * hp * hp);
  return X * pre * alpha1_cubic(F, hm);
}

double alpha1_closed_bracket(const WaveParameters& p) {
  require_valid(p, 0.0);
  const auto q = quadratures(p, {}, 0.0);
  const double Hm = q.h_minus, Hp = q.h_plus, c = q.speed, q0 = q.flux_const, F = p.froude;
  const double Hs = p.h_sonic;
  auto R = [&](double H) {
    const double Q = c * H - q0;
    return H - Q * Q / (H * H);
  };
  const double cp = (F + 1) / (2 * F * std::sqrt(Hs)), qp = 1.5 * std::sqrt(Hs) / F;
  return q.period * ((R(Hp) - R(Hm)) * (Hm - qp / cp) - (Hp - Hm) * R(Hm));
}

EvansSplitJet split_jet_at_zero(const Wave& w, const SolveOptions& opt) {
  ChainTrace t = integrate_second_variation(w, opt);
  // At lambda = 0 the second chain level enters the determinant only through
  // w1, which equals the first-level integral.
  for (ChainFace* f : {&t.minus, &t.plus}) {
    f->w1.push_back(f->integral[1]);
    f->w2.push_back(0.0);
    f->integral.push_back(0.0);
  }
  t.levels = 3;
  return assemble_split_jet(w, t, 2);
}

namespace {

Alpha0Result from_jet(const Wave& w, const EvansSplitJet& j, LowFreqCoefficients* full) {
  const double X = w.period();
  const cplx a0 = j.d0[1] + j.d1[1];
  const cplx a1 = X * j.d1[0];
  Alpha0Result r;
  r.alpha0 = a0.real();
  r.alpha1_over_i = a1.real();
  r.alpha = r.alpha1_over_i / r.alpha0;
  const double scale = std::abs(j.d0[1]) + std::abs(j.d1[1]) + X * std::abs(j.d1[0]) / X;
  r.alpha0_small = std::abs(r.alpha0) < 1e-10 * scale;
  if (full) {
    full->alpha0 = r.alpha0;
    full->alpha1_over_i = r.alpha1_over_i;
    full->alpha = r.alpha;
    full->alpha0_small = r.alpha0_small;
    full->alpha1_real_part = a1.imag();
    const cplx lamlam = 2.0 * (j.d0[2] + j.d1[2]);
    const cplx g = -X / 2 - 0.5 * r.alpha * lamlam / a0 + X * j.d1[1] / a0;
    full->gamma = g.real();
    full->gamma_imag = g.imag();
    full->beta = r.alpha * full->gamma;
  }
  return r;
}

}  // namespace

Alpha0Result alpha0_and_alpha(const Wave& w, const SolveOptions& opt) {
  return from_jet(w, split_jet_at_zero(w, opt), nullptr);
}

LowFreqCoefficients low_frequency(const Wave& w, const SolveOptions& opt) {
  LowFreqCoefficients out;
  from_jet(w, split_jet_at_zero(w, opt), &out);
  if (std::abs(out.gamma_imag) > 1e-6 * (1.0 + std::abs(out.gamma)))
    throw Error(ErrorCode::numerical_inconsistency,
                "imaginary part of gamma " + std::to_string(out.gamma_imag));
  return out;
}

LowFreqCoefficients gamma_coefficient(const Wave& w, const SolveOptions& opt) {
  auto out = low_frequency(w, opt);
  if (out.alpha0_small) throw Error(ErrorCode::degenerate_system, "alpha0 vanishes");
  return out;
}

ParityIndices parity_indices(const Wave& w, const SolveOptions& opt) {
  const auto a = alpha0_and_alpha(w, opt);
  ParityIndices p;
  p.alpha0 = a.alpha0;
  p.alpha1_over_i = a.alpha1_over_i;
  p.alpha = a.alpha;
  // Both hat Delta(., 0) and hat Delta(., pi/X) are positive for large real
  // lambda.  Near 0 they behave like alpha0 lambda and -2 alpha1 / (i X).
  p.coperiodic_odd = a.alpha0 < 0;
  p.subharmonic_odd = a.alpha1_over_i > 0;
  p.unstable = p.coperiodic_odd || p.subharmonic_odd;
  p.unstable_if_alpha_negative = a.alpha < 0;
  return p;
}

double serre_gamma0(const Wave& w) {
  const double X = w.period();
  // d x_- / d H_- = 1 / H'(x_-).
  const double dxm = 1.0 / w.psi(w.Hm());
  return X * X * X * w.source(w.Hp()) / (w.dc_dhs() * dxm);
}

SerreResidual serre_consistency(const Wave& w, cplx lambda, double xi, const SolveOptions& opt) {
  const auto j = whitham_jacobians(w.params());
  const double X = w.period();
  const cplx I(0.0, 1.0);
  const cplx k = (std::polar(1.0, xi * X) - 1.0) / (I * X);
  SerreResidual r;
  r.gamma0 = serre_gamma0(w);
  // The jacobians use the scaled left height; the change to H_- divides by H_s.
  r.model = r.gamma0 * whitham_dispersion(j, lambda - I * w.c() * k, k) / w.Hs();
  r.delta = lambda == 0.0 ? cplx(0.0) : evans(w, lambda, xi, opt);
  r.residual = std::abs(r.delta - r.model);
  return r;
}

std::optional<double> boundary_I(double F, const BoundaryOptions& opt) {
  const double lo = h_hom(F) * (1 + 1e-9), hi = 1.0 - 1e-9;
  const int n = opt.scan_points;
  auto f = [F](double h) { return alpha1_cubic(F, h); };
  double b = hi, fb = f(b);
  for (int i = n - 1; i >= 0; --i) {
    const double a = lo + (hi - lo) * i / n, fa = f(a);
    if ((fa < 0) != (fb < 0)) {
      double x0 = a, x1 = b, f0 = fa;
      while (x1 - x0 > opt.tol_I) {
        const double m = 0.5 * (x0 + x1), fm = f(m);
        if ((fm < 0) == (f0 < 0)) {
          x0 = m;
          f0 = fm;
        } else {
          x1 = m;
        }
      }
      return 0.5 * (x0 + x1);
    }
    b = a;
    fb = fa;
  }
  return std::nullopt;
}

std::optional<double> boundary_II(double F, const BoundaryOptions& opt) {
  const double hh = h_hom(F);
  // t = log10 of the relative distance to H_hom.
  auto gam = [&](double t) -> std::optional<double> {
    try {
      Wave w({F, 1.0, hh * (1 + std::pow(10.0, t))}, {}, opt.near_homoclinic);
      return low_frequency(w, opt.solve).gamma;
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  const double tmin = std::log10(std::max(opt.near_homoclinic, 1e-15)) + 0.01;
  const double tmax = std::log10((1.0 - 1e-3) / hh - 1.0);
  const int n = 60;
  std::optional<double> prev;
  double tprev = 0;
  for (int i = 0; i <= n; ++i) {
    const double t = tmin + (tmax - tmin) * i / n;
    const auto g = gam(t);
    if (!g) continue;
    if (prev && ((*g < 0) != (*prev < 0))) {
      double t0 = tprev, t1 = t, g0 = *prev;
      // Stop when the bracket in H_- is below tolerance relative to H_hom.
      while (std::pow(10.0, t1) - std::pow(10.0, t0) > opt.tol_II) {
        const double tm = 0.5 * (t0 + t1);
        const auto gm = gam(tm);
        if (!gm) break;
        if ((*gm < 0) == (g0 < 0)) {
          t0 = tm;
          g0 = *gm;
        } else {
          t1 = tm;
        }
      }
      return hh * (1 + std::pow(10.0, 0.5 * (t0 + t1)));
    }
    prev = g;
    tprev = t;
  }
  return std::nullopt;
}

std::vector<BoundaryPoint> boundary_curves(const std::vector<double>& froude,
                                           const BoundaryOptions& opt, int workers) {
  std::vector<BoundaryPoint> out(froude.size());
  parallel_for(froude.size(), workers, [&](std::size_t i) {
    BoundaryPoint& b = out[i];
    b.F = froude[i];
    if (!(froude[i] > 2.0 && froude[i] <= 20.0)) {
      b.note_I = b.note_II = "invalid_parameters";
      return;
    }
    b.hm_I = boundary_I(froude[i], opt);
    if (!b.hm_I) b.note_I = "no_sign_change";
    b.hm_II = boundary_II(froude[i], opt);
    if (!b.hm_II) b.note_II = "no_sign_change";
  });
  return out;
}

}  // namespace rollwave
