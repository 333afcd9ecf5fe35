#include "rollwave/singular_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rollwave {

namespace {

using TR = Taylor<double>;
using TC = Taylor<cplx>;

TC complexify(const TR& a) {
  TC r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  return r;
}

struct LevelSeries {
  TC w1, w2, integral;
};

// Frobenius recursion, level by level: level k is forced by level k-1 and
// level 0 by `base`.  Level 0 starts from y0, the others from zero.
std::vector<LevelSeries> chain_series(const SonicExpansion& e, cplx lambda, const TC& base1,
                                      const TC& base2, CVec2 y0, int levels,
                                      double* residual0 = nullptr) {
  const int n = e.order;
  std::vector<LevelSeries> out;
  out.reserve(levels);
  const TC inv_psi = complexify(e.inv_psi);
  std::vector<cplx> a12(n), a21(n), a22(n);
  for (int j = 0; j < n; ++j) {
    a12[j] = lambda * e.al12[j];
    a21[j] = e.ar21[j] + lambda * e.al21[j];
    a22[j] = e.ar22[j] + lambda * e.al22[j];
  }
  const TC* u1 = &base1;
  const TC* u2 = &base2;
  double res0 = 0;
  for (int k = 0; k < levels; ++k) {
    const TC g1 = complexify(e.al12) * (*u2);
    const TC g2 = complexify(e.al21) * (*u1) + complexify(e.al22) * (*u2);
    LevelSeries L{TC(n), TC(n), TC(n)};
    if (k == 0) {
      L.w1[0] = y0[0];
      L.w2[0] = y0[1];
    }
    const cplx r = a21[0] * L.w1[0] + a22[0] * L.w2[0] + g2[0];
    res0 = std::max(res0, std::abs(r) / (std::abs(a21[0] * L.w1[0]) + std::abs(a22[0] * L.w2[0]) +
                                         std::abs(g2[0]) + 1e-300));
    for (int m = 1; m < n; ++m) {
      cplx r1 = g1[m], r2 = g2[m];
      for (int j = 1; j <= m; ++j) {
        r1 += a12[j] * L.w2[m - j];
        r2 += a21[j] * L.w1[m - j] + a22[j] * L.w2[m - j];
      }
      const cplx den = double(m) - a22[0];
      if (std::abs(den) < 1e-12)
        throw Error(ErrorCode::resonance_error, "Frobenius denominator vanishes at order " +
                                                    std::to_string(m));
      L.w1[m] = r1 / double(m);
      L.w2[m] = (r2 + a21[0] * L.w1[m]) / den;
    }
    L.integral = (L.w2 * inv_psi).integral();
    out.push_back(std::move(L));
    u1 = &out.back().w1;
    u2 = &out.back().w2;
  }
  if (residual0) *residual0 = res0;
  return out;
}

// Largest radius not exceeding the geometric cap for which the last term is
// below 1e-12 of the partial sum on both sides.
double choose_delta(const Wave& w, const std::vector<LevelSeries>& s) {
  const double cap = std::min({(w.Hp() - w.Hm()) / 8.0, 0.5 * (w.Hs() - w.Hm()),
                               0.5 * (w.Hp() - w.Hs())});
  const int n = static_cast<int>(s.front().w1.size());
  double d = cap;
  for (int it = 0; it < 200; ++it) {
    bool ok = true;
    for (double z : {d, -d}) {
      double last = 0, sum = 0;
      const double zl = std::pow(std::abs(z), n - 1);
      for (const auto& L : s) {
        for (const TC* t : {&L.w1, &L.w2}) {
          last = std::max(last, std::abs((*t)[n - 1]) * zl);
          sum = std::max(sum, std::abs(t->eval(z)));
        }
      }
      if (!(last <= 1e-12 * sum)) ok = false;
    }
    if (ok) return d;
    d *= 0.8;
  }
  throw Error(ErrorCode::resonance_error, "no admissible handoff radius");
}

struct Coeffs {
  double psi, inv_psi, rr, pr, sr, two_q0_over_h;
};

}  // namespace

Wave::Wave(const WaveParameters& p, const QuadratureOptions& opt, double near_homoclinic)
    : p_(p), w_(quadratures(p, opt, near_homoclinic)) {
  exp_ = expansion(24);
}

double Wave::solvability_threshold() const { return -(F() - 2.0) / (2.0 * std::sqrt(Hs())); }

double Wave::psi(double H) const { return psi_full(H, F(), Hs()); }

double Wave::source(double H) const {
  const double Q = c() * H - q0();
  return H - Q * Q / (H * H);
}

double Wave::dc_dhs() const { return (F() + 1.0) / (2.0 * F() * std::sqrt(Hs())); }
double Wave::dq0_dhs() const { return 1.5 * std::sqrt(Hs()) / F(); }

SonicExpansion Wave::expansion(int order) const {
  const std::size_t n = order;
  const double Hs = this->Hs(), F = this->F(), c = this->c(), q0 = this->q0();
  SonicExpansion e;
  e.order = order;
  const TR H = TR::variable(n, Hs);
  const TR N = H * H + (Hs - c * c) * H + TR(n, q0 * q0 / Hs);
  const TR M = H * H + Hs * H + TR(n, Hs * Hs);
  e.psi = (F * F) * (N / M);
  e.inv_psi = M / ((F * F) * N);
  e.al12 = e.inv_psi.shift();
  const TR invH = TR(n, 1.0) / H;
  const TR invH2 = invH * invH;
  const TR invH3 = invH2 * invH;
  const TR m = (H * H) / N;
  const TR Q = c * H + TR(n, -q0);
  const TR S = (2 * q0) * (e.psi * invH2) + 2.0 * (Q * invH2);
  const TR P = -((TR(n, 1.0 / (F * F)) + (2 * q0 * q0) * invH3) * e.psi) + TR(n, 1.0) +
               2.0 * (Q * Q * invH3) + (-2.0 * c) * (Q * invH2);
  e.ar21 = m * S;
  e.ar22 = m * P;
  e.al21 = m;
  e.al22 = (-2.0 * q0) * (m * invH);
  e.x = e.inv_psi.integral();
  return e;
}

double SonicData::constraint_residual(const Wave& w) const {
  const double F = w.F(), r = std::sqrt(w.Hs());
  const cplx a = (lambda * r * (F - 1) + 2.0 / 3.0 * (F + 1) * (F + 1)) * h_at_sonic;
  const cplx b = (lambda + 2.0 / 3.0 * (F + 1) / r) * F * q_at_sonic;
  return std::abs(a - b) / std::max(std::abs(a) + std::abs(b), 1e-300);
}

SonicData sonic_data(const Wave& w, cplx lambda) {
  if (!(lambda.real() > w.solvability_threshold()))
    throw Error(ErrorCode::solvability_violation,
                "Re(lambda) = " + std::to_string(lambda.real()) + " at or below threshold");
  const double F = w.F(), r = std::sqrt(w.Hs());
  const double K = (F - 2) * r / (2 * (F + 1));
  return {lambda, K * (lambda + 2.0 / 3.0 * (F + 1) / r) * F,
          K * (lambda * r * (F - 1) + 2.0 / 3.0 * (F + 1) * (F + 1))};
}

CVec2 sonic_tilde(const Wave& w) {
  const double F = w.F(), r = std::sqrt(w.Hs());
  const double K = (F - 2) * r / (2 * (F + 1));
  const double h = K * F, q = K * r * (F - 1);
  return {w.c() * h - q, h};
}

CVec2 SeriesSolution::eval(double H) const {
  const double z = H - center;
  CVec2 s{0.0, 0.0};
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    s[0] = s[0] * z + coeffs[i][0];
    s[1] = s[1] * z + coeffs[i][1];
  }
  return s;
}

SeriesSolution frobenius_series(const Wave& w, cplx lambda, int order) {
  if (order < 4) throw Error(ErrorCode::invalid_parameters, "series order below 4");
  const auto sd = sonic_data(w, lambda);
  const SonicExpansion e = order == w.expansion().order ? w.expansion() : w.expansion(order);
  const TC zero(order);
  const CVec2 y0{w.c() * sd.h_at_sonic - sd.q_at_sonic, sd.h_at_sonic};
  const auto s = chain_series(e, lambda, zero, zero, y0, 1);
  SeriesSolution out;
  out.center = w.Hs();
  out.radius = choose_delta(w, s);
  for (int i = 0; i < order; ++i) {
    const cplx h = s[0].w2[i];
    out.coeffs.push_back({h, w.c() * h - s[0].w1[i]});
  }
  return out;
}

namespace {

Coeffs coeffs_at(const Wave& w, double H) {
  const double F = w.F(), Hs = w.Hs(), c = w.c(), q0 = w.q0();
  const double N = (H - Hs * h_hom(F)) * (H - Hs * h_low(F));
  const double M = H * H + Hs * H + Hs * Hs;
  Coeffs k;
  k.psi = F * F * N / M;
  k.inv_psi = M / (F * F * N);
  const double ih = 1.0 / H, ih2 = ih * ih, ih3 = ih2 * ih;
  k.rr = (H - Hs) * N * ih2;
  const double Q = c * H - q0;
  k.sr = 2 * q0 * k.psi * ih2 + 2 * Q * ih2;
  k.pr = -(1.0 / (F * F) + 2 * q0 * q0 * ih3) * k.psi + 1.0 + 2 * Q * Q * ih3 - 2 * c * Q * ih2;
  k.two_q0_over_h = 2 * q0 * ih;
  return k;
}

template <int L>
ChainTrace integrate_chain_impl(const Wave& w, cplx lambda, const SolveOptions& opt) {
  constexpr std::size_t NS = 1 + 3 * L;
  using State = std::array<cplx, NS>;
  sonic_data(w, lambda);
  const SonicExpansion e =
      opt.series_order == w.expansion().order ? w.expansion() : w.expansion(opt.series_order);
  const TC zero(e.order);
  const TC base2 = complexify(e.psi);
  const auto series = chain_series(e, lambda, zero, base2, sonic_tilde(w), L);
  const double delta = choose_delta(w, series) * opt.delta_factor;

  auto rhs = [&](double H, const State& y, State& dy) {
    const Coeffs k = coeffs_at(w, H);
    const cplx S = k.sr + lambda;
    const cplx P = k.pr - lambda * k.two_q0_over_h;
    const double irr = 1.0 / k.rr;
    cplx u1 = 0.0, u2 = y[0] * k.psi;
    dy[0] = 0.0;
    for (int j = 0; j < L; ++j) {
      const cplx w1 = y[1 + 3 * j], w2 = y[2 + 3 * j];
      dy[1 + 3 * j] = (lambda * w2 + u2) * k.inv_psi;
      dy[2 + 3 * j] = (S * w1 + P * w2 + u1 - k.two_q0_over_h * u2) * irr;
      dy[3 + 3 * j] = w2 * k.inv_psi;
      u1 = w1;
      u2 = w2;
    }
  };

  ChainTrace tr;
  tr.lambda = lambda;
  tr.levels = L;
  tr.delta = delta;
  for (int side : {-1, 1}) {
    const double z = side * delta;
    State y;
    y[0] = 1.0;
    for (int j = 0; j < L; ++j) {
      y[1 + 3 * j] = series[j].w1.eval(z);
      y[2 + 3 * j] = series[j].w2.eval(z);
      y[3 + 3 * j] = series[j].integral.eval(z);
    }
    double log_scale = 0;
    Dopri5Stats st;
    rk_integrate<NS>(rhs, w.Hs() + z, side < 0 ? w.Hm() : w.Hp(), y, log_scale, opt.rk, &st);
    ChainFace& f = side < 0 ? tr.minus : tr.plus;
    // True values correspond to s = 1.
    const double s = std::abs(y[0]);
    f.log_scale = -std::log(s);
    f.steps = st.accepted + st.rejected;
    for (int j = 0; j < L; ++j) {
      f.w1.push_back(y[1 + 3 * j]);
      f.w2.push_back(y[2 + 3 * j]);
      f.integral.push_back(y[3 + 3 * j]);
    }
  }
  return tr;
}

}  // namespace

ChainTrace integrate_chain(const Wave& w, cplx lambda, int levels, const SolveOptions& opt) {
  switch (levels) {
    case 1: return integrate_chain_impl<1>(w, lambda, opt);
    case 2: return integrate_chain_impl<2>(w, lambda, opt);
    case 3: return integrate_chain_impl<3>(w, lambda, opt);
    default: throw Error(ErrorCode::invalid_parameters, "chain depth must be 1, 2 or 3");
  }
}

EigenTrace integrate_eigen(const Wave& w, cplx lambda, const SolveOptions& opt) {
  const ChainTrace ch = integrate_chain(w, lambda, 1, opt);
  EigenTrace t;
  t.lambda = lambda;
  t.delta = ch.delta;
  t.steps = ch.minus.steps + ch.plus.steps;
  t.log_scale_minus = ch.minus.log_scale;
  t.log_scale_plus = ch.plus.log_scale;
  const double c = w.c();
  auto fill = [&](const ChainFace& f, double H, CVec2& tilde, CVec2& hq) {
    const cplx ht = f.w2[0], qt = c * f.w2[0] - f.w1[0];
    tilde = {ht, qt};
    const double e = std::exp(-f.log_scale);
    const double d = w.psi(H);
    hq = {d * e + lambda * ht, c * d * e + lambda * qt};
  };
  fill(ch.minus, w.Hm(), t.tilde_hq_at_hminus, t.hq_at_hminus);
  fill(ch.plus, w.Hp(), t.tilde_hq_at_hplus, t.hq_at_hplus);
  const double lm = std::max(ch.minus.log_scale, ch.plus.log_scale);
  t.integral_tilde_h = ch.plus.integral[0] * std::exp(ch.plus.log_scale - lm) -
                       ch.minus.integral[0] * std::exp(ch.minus.log_scale - lm);
  return t;
}

CVec2 tilde_zero(const Wave& w, double H, double x) {
  const double Hs = w.Hs(), F = w.F(), c = w.c();
  const double cp = w.dc_dhs(), qp = w.dq0_dhs();
  const double K2 = 3.0 * (F + 2) * std::sqrt(Hs) / (2.0 * (F + 1) * (F - 2));
  const double d = w.psi(H);
  const double dH = (H - x * d) / Hs;
  const double dQ = cp * H + c * dH - qp;
  const double ht = -dH / cp + K2 * d;
  const double qt = -dQ / cp + K2 * c * d;
  return {c * ht - qt, ht};
}

ChainTrace integrate_second_variation(const Wave& w, const SolveOptions& opt) {
  const SonicExpansion e =
      opt.series_order == w.expansion().order ? w.expansion() : w.expansion(opt.series_order);
  const std::size_t n = e.order;
  const double Hs = w.Hs(), F = w.F(), c = w.c();
  const double cp = w.dc_dhs(), qp = w.dq0_dhs();
  const double K2 = 3.0 * (F + 2) * std::sqrt(Hs) / (2.0 * (F + 1) * (F - 2));
  // Closed-form level-0 series.
  const TR H = TR::variable(n, Hs);
  const TR dH = (1.0 / Hs) * (H - e.x * e.psi);
  const TR dQ = cp * H + c * dH + TR(n, -qp);
  const TR ht = (-1.0 / cp) * dH + K2 * e.psi;
  const TR qt = (-1.0 / cp) * dQ + (K2 * c) * e.psi;
  const TC b1 = complexify(c * ht - qt), b2 = complexify(ht);
  const auto series = chain_series(e, 0.0, b1, b2, {0.0, 0.0}, 1);
  const TC i0 = (b2 * complexify(e.inv_psi)).integral();
  const double delta = choose_delta(w, series) * opt.delta_factor;

  using State = std::array<cplx, 5>;  // x, I0, w1_1, w2_1, I1
  auto rhs = [&](double Hv, const State& y, State& dy) {
    const Coeffs k = coeffs_at(w, Hv);
    const CVec2 u = tilde_zero(w, Hv, y[0].real());
    dy[0] = k.inv_psi;
    dy[1] = u[1] * k.inv_psi;
    dy[2] = u[1] * k.inv_psi;
    dy[3] = (k.sr * y[2] + k.pr * y[3] + u[0] - k.two_q0_over_h * u[1]) / k.rr;
    dy[4] = y[3] * k.inv_psi;
  };

  ChainTrace tr;
  tr.lambda = 0.0;
  tr.levels = 2;
  tr.delta = delta;
  Dopri5Options rk = opt.rk;
  rk.rescale_above = std::numeric_limits<double>::infinity();
  for (int side : {-1, 1}) {
    const double z = side * delta;
    State y{e.x.eval(z), i0.eval(z), series[0].w1.eval(z), series[0].w2.eval(z),
            series[0].integral.eval(z)};
    double log_scale = 0;
    Dopri5Stats st;
    const double Hend = side < 0 ? w.Hm() : w.Hp();
    rk_integrate<5>(rhs, Hs + z, Hend, y, log_scale, rk, &st);
    ChainFace& f = side < 0 ? tr.minus : tr.plus;
    f.steps = st.accepted + st.rejected;
    const CVec2 u = tilde_zero(w, Hend, y[0].real());
    f.w1 = {u[0], y[2]};
    f.w2 = {u[1], y[3]};
    f.integral = {y[1], y[4]};
  }
  return tr;
}

}  // namespace rollwave
