#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "rollwave/error.hpp"

namespace rollwave {

enum class RkMethod { dopri5, dop853 };

struct Dopri5Options {
  RkMethod method = RkMethod::dop853;
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  long max_steps = 1000000;
  // State is divided by its max modulus once this is exceeded; the log is accumulated.
  double rescale_above = 1e100;
};

struct Dopri5Stats {
  long accepted = 0;
  long rejected = 0;
};

// Embedded 5(4) Dormand-Prince pair on a complex state.  The system must be
// linear-homogeneous in the state for rescaling to be valid.
template <std::size_t N, class Rhs>
void dopri5(Rhs&& f, double t0, double t1, std::array<std::complex<double>, N>& y, double& log_scale,
            const Dopri5Options& opt = {}, Dopri5Stats* stats = nullptr) {
  using State = std::array<std::complex<double>, N>;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                   a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double span = t1 - t0;
  if (span == 0.0) return;
  const double dir = span > 0 ? 1.0 : -1.0;
  double t = t0;
  State k1, k2, k3, k4, k5, k6, k7, yt, ynew;
  f(t, y, k1);

  // Initial step from the first-derivative scale.
  double d0 = 0, d1 = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sk = opt.abs_tol + opt.rel_tol * std::abs(y[i]);
    d0 = std::max(d0, std::abs(y[i]) / sk);
    d1 = std::max(d1, std::abs(k1[i]) / sk);
  }
  double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * std::abs(span) : 0.01 * d0 / d1;
  h = std::min(h, std::abs(span));
  h *= dir;

  long steps = 0;
  double err_old = 1e-4;
  bool last_rejected = false;
  while ((t1 - t) * dir > 0) {
    if (++steps > opt.max_steps)
      throw Error(ErrorCode::step_failure, "step budget exhausted");
    if ((t + h - t1) * dir > 0) h = t1 - t;

    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * a21 * k1[i];
    f(t + c2 * h, yt, k2);
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * h, yt, k3);
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * h, yt, k4);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * h, yt, k5);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(t + h, yt, k6);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    f(t + h, ynew, k7);

    double err = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const std::complex<double> e =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sk = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double r = std::abs(e) / sk;
      err += r * r;
    }
    err = std::sqrt(err / N);
    if (!std::isfinite(err)) err = 1e10;

    if (err <= 1.0) {
      t += h;
      y = ynew;
      k1 = k7;
      if (stats) ++stats->accepted;
      double fac = 0.9 * std::pow(err, -0.7 / 5) * std::pow(err_old, 0.4 / 5);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 10.0);
      err_old = std::max(err, 1e-4);
      h *= fac;
      last_rejected = false;

      double m = 0;
      for (const auto& v : y) m = std::max(m, std::abs(v));
      if (m > opt.rescale_above) {
        for (auto& v : y) v /= m;
        for (auto& v : k1) v /= m;
        log_scale += std::log(m);
      }
    } else {
      if (stats) ++stats->rejected;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      last_rejected = true;
    }
    if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(t)))
      throw Error(ErrorCode::step_failure, "step size underflow");
  }
}

}  // namespace rollwave
