#pragma once

#include "rollwave/dop853_tableau.hpp"
#include "rollwave/dopri5.hpp"

namespace rollwave {

// Dormand-Prince 8(5,3) with the combined 5th/3rd order error estimate; same
// contract as dopri5.
template <std::size_t N, class Rhs>
void dop853(Rhs&& f, double t0, double t1, std::array<std::complex<double>, N>& y, double& log_scale,
            const Dopri5Options& opt = {}, Dopri5Stats* stats = nullptr) {
  namespace T = dop853_tableau;
  using State = std::array<std::complex<double>, N>;
  const double span = t1 - t0;
  if (span == 0.0) return;
  const double dir = span > 0 ? 1.0 : -1.0;
  double t = t0;
  std::array<State, 13> K;
  State yt, ynew;
  f(t, y, K[0]);

  double d0 = 0, d1 = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sk = opt.abs_tol + opt.rel_tol * std::abs(y[i]);
    d0 = std::max(d0, std::abs(y[i]) / sk);
    d1 = std::max(d1, std::abs(K[0][i]) / sk);
  }
  double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * std::abs(span) : 0.01 * d0 / d1;
  h = std::min(h, std::abs(span)) * dir;

  long steps = 0;
  bool last_rejected = false;
  while ((t1 - t) * dir > 0) {
    if (++steps > opt.max_steps) throw Error(ErrorCode::step_failure, "step budget exhausted");
    if ((t + h - t1) * dir > 0) h = t1 - t;

    for (int s = 1; s < 12; ++s) {
      for (std::size_t i = 0; i < N; ++i) {
        std::complex<double> acc = 0.0;
        for (int j = 0; j < s; ++j)
          if (T::A[s][j] != 0.0) acc += T::A[s][j] * K[j][i];
        yt[i] = y[i] + h * acc;
      }
      f(t + T::C[s] * h, yt, K[s]);
    }
    for (std::size_t i = 0; i < N; ++i) {
      std::complex<double> acc = 0.0;
      for (int j = 0; j < 12; ++j)
        if (T::B[j] != 0.0) acc += T::B[j] * K[j][i];
      ynew[i] = y[i] + h * acc;
    }
    f(t + h, ynew, K[12]);

    double e5 = 0, e3 = 0;
    for (std::size_t i = 0; i < N; ++i) {
      std::complex<double> a5 = 0.0, a3 = 0.0;
      for (int j = 0; j < 13; ++j) {
        a5 += T::E5[j] * K[j][i];
        a3 += T::E3[j] * K[j][i];
      }
      const double sk = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      e5 += std::norm(a5) / (sk * sk);
      e3 += std::norm(a3) / (sk * sk);
    }
    double err = 0;
    if (e5 > 0 || e3 > 0) err = std::abs(h) * e5 / std::sqrt((e5 + 0.01 * e3) * N);
    if (!std::isfinite(err)) err = 1e10;

    if (err <= 1.0) {
      t += h;
      y = ynew;
      K[0] = K[12];
      if (stats) ++stats->accepted;
      double fac = err == 0 ? 10.0 : 0.9 * std::pow(err, -1.0 / 8);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 10.0);
      h *= fac;
      last_rejected = false;

      double m = 0;
      for (const auto& v : y) m = std::max(m, std::abs(v));
      if (m > opt.rescale_above) {
        for (auto& v : y) v /= m;
        for (auto& v : K[0]) v /= m;
        log_scale += std::log(m);
      }
    } else {
      if (stats) ++stats->rejected;
      h *= std::max(0.2, 0.9 * std::pow(err, -1.0 / 8));
      last_rejected = true;
    }
    if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(t)))
      throw Error(ErrorCode::step_failure, "step size underflow");
  }
}

template <std::size_t N, class Rhs>
void rk_integrate(Rhs&& f, double t0, double t1, std::array<std::complex<double>, N>& y,
                  double& log_scale, const Dopri5Options& opt = {}, Dopri5Stats* stats = nullptr) {
  if (opt.method == RkMethod::dop853)
    dop853<N>(f, t0, t1, y, log_scale, opt, stats);
  else
    dopri5<N>(f, t0, t1, y, log_scale, opt, stats);
}

}  // namespace rollwave
