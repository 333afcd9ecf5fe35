#include "rollwave/highfreq.hpp"

#include <cmath>

#include "rollwave/modulation.hpp"

namespace rollwave {

double mu_tilde_plus(const Wave& w, double H) {
  return 1.0 / (std::sqrt(H) / w.F() + w.q0() / H);
}

double gamma_tilde_plus(const Wave& w, double H) {
  const double F = w.F(), c = w.c(), q0 = w.q0();
  const double d = w.psi(H);  // H'
  const double s = std::sqrt(H) / F, m = q0 / H;
  const double Q = c * H - q0;
  const double rh = 1.0 + 2.0 * Q * Q / (H * H * H);
  const double rq = -2.0 * Q / (H * H);
  const double dD = (1.0 / (F * F) + 2.0 * q0 * q0 / (H * H * H)) * d;
  const double b21 = -rq + 2.0 * q0 * d / (H * H);
  const double b22 = -dD + rh + c * rq;
  const double ds = d / (2.0 * F * std::sqrt(H)), dm = -q0 * d / (H * H);
  return (b21 + b22 / (s + m) - (ds + dm)) / (2.0 * s);
}

double gamma_tilde_plus_chain(const Wave& w, double H, double dh) {
  const double F = w.F(), c = w.c(), q0 = w.q0();
  auto P0 = [&](double h) -> Mat2 {
    const double s = std::sqrt(h) / F, m = q0 / h;
    return {{{m + s, m - s}, {1.0, 1.0}}};
  };
  auto Dfun = [&](double h) { return h / (F * F) - q0 * q0 / (h * h); };
  auto rh = [&](double h) {
    const double Q = c * h - q0;
    return 1.0 + 2.0 * Q * Q / (h * h * h);
  };
  auto rq = [&](double h) { return -2.0 * (c * h - q0) / (h * h); };
  auto ddx = [&](auto f) { return w.psi(H) * (f(H + dh) - f(H - dh)) / (2 * dh); };
  Mat2 B1{};
  B1[1][0] = -rq(H) - ddx([&](double h) { return 2 * q0 / h; });
  B1[1][1] = -ddx(Dfun) + rh(H) + c * rq(H);
  const Mat2 P = P0(H), Pi = inverse(P);
  const Mat2 Pp0 = P0(H + dh), Pm0 = P0(H - dh);
  Mat2 dP{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) dP[i][j] = w.psi(H) * (Pp0[i][j] - Pm0[i][j]) / (2 * dh);
  const Mat2 A = Pi * B1 * P;
  const Mat2 B = Pi * dP;
  const double D = Dfun(H);
  return (A[0][0] - D * B[0][0]) / D;
}

double hf_prefactor(const Wave& w) {
  const double F = w.F(), Hp = w.Hp();
  const double v = std::sqrt(Hp) / F + w.q0() / Hp;
  return std::sqrt(w.Hs()) * F * (F - 2) / (2 * (F + 1)) * (Hp - w.Hm()) * v * v;
}

namespace {

// Integral over x of f(H) from H = a to H = b, split at the sonic point.
template <class Fn>
double x_integral(const Wave& w, Fn f, double a, double b, const QuadratureOptions& opt) {
  auto g = [&](double H) { return f(H) / w.psi(H); };
  if (a < w.Hs() && w.Hs() < b)
    return integrate(g, a, w.Hs(), opt) + integrate(g, w.Hs(), b, opt);
  return integrate(g, a, b, opt);
}

}  // namespace

HighFreqData hf_index(const Wave& w, const QuadratureOptions& opt) {
  HighFreqData d;
  const double F = w.F(), Hm = w.Hm(), Hp = w.Hp(), q0 = w.q0();
  d.mu_tilde_plus_integral =
      x_integral(w, [&](double H) { return mu_tilde_plus(w, H); }, Hm, Hp, opt);
  d.gamma_tilde_plus_integral =
      x_integral(w, [&](double H) { return gamma_tilde_plus(w, H); }, Hm, Hp, opt);
  const double r = (std::sqrt(Hm) / F + q0 / Hm) / (std::sqrt(Hp) / F + q0 / Hp);
  d.index = r * r * std::exp(-d.gamma_tilde_plus_integral);
  d.prefactor = hf_prefactor(w);
  d.asymptote = std::log(d.index) / d.mu_tilde_plus_integral;
  d.threshold = std::exp(-(F - 2) / (2 * std::sqrt(w.Hs())) * d.mu_tilde_plus_integral);
  d.verdict = d.index < d.threshold ? "hf_clear" : "hf_curve";
  return d;
}

std::vector<AsymptoticSample> hf_asymptotic_check(const Wave& w, const std::vector<double>& lambdas,
                                                  const SolveOptions& opt) {
  const double mu = x_integral(w, [&](double H) { return mu_tilde_plus(w, H); }, w.Hs(), w.Hp(), {});
  const double ga =
      x_integral(w, [&](double H) { return gamma_tilde_plus(w, H); }, w.Hs(), w.Hp(), {});
  const double g0 = hf_prefactor(w);
  std::vector<AsymptoticSample> out;
  for (double lam : lambdas) {
    const EvansSplit s = evans_split(w, lam, opt);
    // log Delta = log lambda + log_scale + log(d0 + d1)
    const cplx logd = std::log(cplx(lam)) + s.log_scale + std::log(s.hat_mantissa(0.0));
    const cplx logm = std::log(g0 * lam * lam) + lam * mu + ga;
    out.push_back({lam, std::exp(logd - logm)});
  }
  return out;
}

double hf_empirical_radius(const Wave& w, double tol, int kmax, const SolveOptions& opt) {
  for (int k = 0; k < kmax; ++k) {
    const double lam = 10.0 * std::ldexp(1.0, k);
    const auto s = hf_asymptotic_check(w, {lam}, opt);
    if (std::abs(s[0].ratio - 1.0) < tol) return lam;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace rollwave
