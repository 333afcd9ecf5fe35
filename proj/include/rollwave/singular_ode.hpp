#pragma once

#include <array>
#include <complex>
#include <vector>

#include "rollwave/dop853.hpp"
#include "rollwave/profile.hpp"
#include "rollwave/taylor.hpp"

namespace rollwave {

using cplx = std::complex<double>;
using CVec2 = std::array<cplx, 2>;

// Taylor data of the eigen-system coefficients about H = H_s, in z = H - H_s.
// With w = (c h - q, h) the system reads z w' = (AR + lambda AL) w + AL u, where
// u is the forcing vector and AR, AL have the entries below.
struct SonicExpansion {
  int order = 0;
  Taylor<double> al12;  // z / Psi
  Taylor<double> ar21;  // m S at lambda = 0, m = H^2 / N
  Taylor<double> ar22;  // m P at lambda = 0
  Taylor<double> al21;  // m
  Taylor<double> al22;  // -2 m q0 / H
  Taylor<double> inv_psi;
  Taylor<double> psi;
  Taylor<double> x;  // signed distance from the sonic point, int dz / Psi
};

// A valid wave with its closed-form constants and quadratures, shared by the solvers.
class Wave {
 public:
  explicit Wave(const WaveParameters& p, const QuadratureOptions& opt = {},
                double near_homoclinic = kNearHomoclinic);

  const WaveParameters& params() const { return p_; }
  const WaveQuantities& quantities() const { return w_; }
  double F() const { return p_.froude; }
  double Hs() const { return p_.h_sonic; }
  double Hm() const { return w_.h_minus; }
  double Hp() const { return w_.h_plus; }
  double c() const { return w_.speed; }
  double q0() const { return w_.flux_const; }
  double period() const { return w_.period; }
  double solvability_threshold() const;

  double psi(double H) const;
  double flux_slope(double H) const { return H / (F() * F()) - q0() * q0() / (H * H); }
  double source(double H) const;  // H - Q^2/H^2
  double dc_dhs() const;
  double dq0_dhs() const;

  SonicExpansion expansion(int order) const;
  const SonicExpansion& expansion() const { return exp_; }

 private:
  WaveParameters p_;
  WaveQuantities w_;
  SonicExpansion exp_;
};

struct SonicData {
  cplx lambda;
  cplx h_at_sonic;
  cplx q_at_sonic;
  double constraint_residual(const Wave& w) const;
};
SonicData sonic_data(const Wave& w, cplx lambda);
// Sonic value of (h - H')/lambda; independent of lambda.
CVec2 sonic_tilde(const Wave& w);

struct SeriesSolution {
  double center = 0;
  std::vector<CVec2> coeffs;  // (h, q) Taylor coefficients in H - H_s
  double radius = 0;
  CVec2 eval(double H) const;
};
SeriesSolution frobenius_series(const Wave& w, cplx lambda, int order = 24);

struct SolveOptions {
  int series_order = 24;
  double delta_factor = 1.0;  // multiplies the automatically chosen handoff radius
  Dopri5Options rk{};
};

// Values at one shock face for levels k = 0..n-1 of the lambda-Taylor chain of
// (h~, q~); the integral is measured from the sonic point.  True values are the
// stored ones times exp(log_scale).
struct ChainFace {
  double log_scale = 0;
  std::vector<cplx> w1, w2, integral;
  long steps = 0;
};

struct ChainTrace {
  cplx lambda;
  int levels = 0;
  double delta = 0;
  ChainFace minus, plus;
};
ChainTrace integrate_chain(const Wave& w, cplx lambda, int levels, const SolveOptions& opt = {});

struct EigenTrace {
  cplx lambda;
  CVec2 hq_at_hminus, hq_at_hplus;
  CVec2 tilde_hq_at_hminus, tilde_hq_at_hplus;
  cplx integral_tilde_h;
  // Face values carry exp(log_scale_*); the integral carries exp(max of both).
  double log_scale_minus = 0, log_scale_plus = 0;
  double delta = 0;
  long steps = 0;
};
EigenTrace integrate_eigen(const Wave& w, cplx lambda, const SolveOptions& opt = {});

// (c h~ - q~, h~)(.;0) in closed form, given H and the signed distance x to the sonic point.
CVec2 tilde_zero(const Wave& w, double H, double x_from_sonic);

// d/dlambda (h~, q~)(.;0) from the inhomogeneous singular problem with the
// closed-form source.  Level 0 holds the closed-form values, level 1 the solve.
ChainTrace integrate_second_variation(const Wave& w, const SolveOptions& opt = {});

}  // namespace rollwave
