#include "rollwave/evans.hpp"

#include <algorithm>
#include <cmath>

namespace rollwave {

namespace {

// Truncated power series in lambda.
struct Jet {
  std::vector<cplx> c;
  explicit Jet(std::size_t n, cplx v = 0.0) : c(n, 0.0) { c[0] = v; }
  std::size_t size() const { return c.size(); }
};
Jet operator+(Jet a, const Jet& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a.c[i] += b.c[i];
  return a;
}
Jet operator-(Jet a, const Jet& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a.c[i] -= b.c[i];
  return a;
}
Jet operator*(Jet a, cplx s) {
  for (auto& v : a.c) v *= s;
  return a;
}
Jet operator*(cplx s, Jet a) { return a * s; }
Jet operator+(Jet a, cplx s) {
  a.c[0] += s;
  return a;
}
Jet operator*(const Jet& a, const Jet& b) {
  Jet r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; i + j < a.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

// Split determinant in terms of the reduced face data.
template <class T>
void split_formula(const Wave& w, const T& lam, const T& w1m, const T& w2m, const T& im, const T& w1p,
                   const T& w2p, const T& ip, double sm, double sp, double s0, T& d0, T& d1) {
  const double c = w.c(), q0 = w.q0();
  const double Hm = w.Hm(), Hp = w.Hp();
  const double jH = Hp - Hm;
  const double Rm = w.source(Hm), Rp = w.source(Hp);
  const double jR = Rp - Rm;
  const T gp = w.flux_slope(Hp) * w2p - (c - 2 * q0 / Hp) * w1p;
  const T gm = w.flux_slope(Hm) * w2m - (c - 2 * q0 / Hm) * w1m;
  const T row = (c * jH) * lam + cplx(-jR);
  d0 = cplx(sp) * (cplx(jH) * (lam * gp) + row * (lam * ip)) +
       cplx(s0 * jH) * ((c * jH) * lam + cplx(Rm)) + cplx(sm) * (row * (w1m - lam * im));
  d1 = cplx(sm) * (cplx(-jH) * (lam * gm) - row * w1m) + cplx(-s0 * jH * Rm);
}

}  // namespace

EvansSplit assemble_split(const Wave& w, const ChainTrace& t) {
  const double L = std::max({0.0, t.minus.log_scale, t.plus.log_scale});
  const double sm = std::exp(t.minus.log_scale - L), sp = std::exp(t.plus.log_scale - L),
               s0 = std::exp(-L);
  EvansSplit s;
  s.lambda = t.lambda;
  s.period = w.period();
  s.log_scale = L;
  s.steps = t.minus.steps + t.plus.steps;
  split_formula<cplx>(w, t.lambda, t.minus.w1[0], t.minus.w2[0], t.minus.integral[0], t.plus.w1[0],
                      t.plus.w2[0], t.plus.integral[0], sm, sp, s0, s.d0, s.d1);
  return s;
}

EvansSplitJet assemble_split_jet(const Wave& w, const ChainTrace& t, int order) {
  if (order + 1 > t.levels) throw Error(ErrorCode::invalid_parameters, "chain too short for jet");
  const std::size_t n = order + 1;
  const double L = std::max({0.0, t.minus.log_scale, t.plus.log_scale});
  const double sm = std::exp(t.minus.log_scale - L), sp = std::exp(t.plus.log_scale - L),
               s0 = std::exp(-L);
  auto jet = [n](const std::vector<cplx>& v) {
    Jet j(n);
    for (std::size_t k = 0; k < n; ++k) j.c[k] = v[k];
    return j;
  };
  Jet lam(n, t.lambda);
  if (n > 1) lam.c[1] = 1.0;
  Jet d0(n), d1(n);
  split_formula<Jet>(w, lam, jet(t.minus.w1), jet(t.minus.w2), jet(t.minus.integral),
                     jet(t.plus.w1), jet(t.plus.w2), jet(t.plus.integral), sm, sp, s0, d0, d1);
  EvansSplitJet out;
  out.lambda = t.lambda;
  out.d0 = d0.c;
  out.d1 = d1.c;
  out.period = w.period();
  out.log_scale = L;
  return out;
}

EvansSplit evans_split(const Wave& w, cplx lambda, const SolveOptions& opt) {
  return assemble_split(w, integrate_chain(w, lambda, 1, opt));
}

EvansSplitJet evans_split_jet(const Wave& w, cplx lambda, int order, const SolveOptions& opt) {
  return assemble_split_jet(w, integrate_chain(w, lambda, order + 1, opt), order);
}

cplx evans_hat(const Wave& w, cplx lambda, double xi, const SolveOptions& opt) {
  return evans_split(w, lambda, opt).hat(xi);
}

cplx evans(const Wave& w, cplx lambda, double xi, const SolveOptions& opt) {
  return evans_split(w, lambda, opt).full(xi);
}

cplx evans_direct(const Wave& w, const EigenTrace& t, double xi) {
  const double L = std::max(t.log_scale_minus, t.log_scale_plus);
  const double sm = std::exp(t.log_scale_minus - L), sp = std::exp(t.log_scale_plus - L);
  const double c = w.c(), F = w.F();
  const cplx lam = t.lambda;
  const cplx E = std::polar(1.0, xi * w.period());
  auto faces = [&](double H, const CVec2& hq, double s, cplx& G, cplx& V) {
    const double Q = c * H - w.q0();
    const double a = H / (F * F) - Q * Q / (H * H);
    const double b = 2 * Q / H - c;
    G = s * (a * hq[0] + b * hq[1]);
    V = s * (-c * hq[0] + hq[1]);
  };
  cplx Gp, Vp, Gm, Vm;
  faces(w.Hp(), t.hq_at_hplus, sp, Gp, Vp);
  faces(w.Hm(), t.hq_at_hminus, sm, Gm, Vm);
  const double Hm = w.Hm(), Hp = w.Hp();
  const double jH = Hp - Hm;
  const cplx jLQR = lam * (c * jH) - (w.source(Hp) - w.source(Hm));
  return std::exp(L) * (lam * jH * (Gp - E * Gm) - jLQR * (Vp - E * Vm));
}

cplx evans_direct(const Wave& w, cplx lambda, double xi, const SolveOptions& opt) {
  return evans_direct(w, integrate_eigen(w, lambda, opt), xi);
}

}  // namespace rollwave
