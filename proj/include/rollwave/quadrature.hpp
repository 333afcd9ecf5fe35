#pragma once

#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rollwave/error.hpp"

namespace rollwave {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  int max_panels = 20000;
};

// Globally adaptive Gauss-Kronrod 7/15: the panel with the largest error
// estimate is bisected until the total estimate meets the tolerance.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  if (a == b) return 0.0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  using G = boost::math::quadrature::gauss<double, 7>;
  struct Panel {
    double a, b, v, e;
    bool operator<(const Panel& o) const { return e < o.e; }
  };
  // Abscissae are listed from the centre outwards; Gauss nodes are the even ones.
  auto eval = [&](double lo, double hi) {
    const double m = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    const auto& x = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G::weights();
    const double f0 = f(m);
    double k = wk[0] * f0, g = wg[0] * f0;
    for (std::size_t i = 1; i < x.size(); ++i) {
      const double s = f(m - h * x[i]) + f(m + h * x[i]);
      k += wk[i] * s;
      if (i % 2 == 0) g += wg[i / 2] * s;
    }
    return Panel{lo, hi, h * k, std::abs(h * (k - g))};
  };
  std::priority_queue<Panel> heap;
  Panel p0 = eval(a, b);
  double total = p0.v, err = p0.e;
  heap.push(p0);
  int panels = 1;
  while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    if (!std::isfinite(total) || panels >= opt.max_panels)
      throw Error(ErrorCode::quadrature_nonconvergence,
                  "estimated error " + std::to_string(err) + " on [" + std::to_string(a) + ", " +
                      std::to_string(b) + "]");
    Panel p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    Panel l = eval(p.a, m), r = eval(m, p.b);
    total += l.v + r.v - p.v;
    err += l.e + r.e - p.e;
    heap.push(l);
    heap.push(r);
    ++panels;
    // Re-sum periodically to shed accumulated cancellation error.
    if (panels % 64 == 0) {
      auto copy = heap;
      total = 0;
      err = 0;
      while (!copy.empty()) {
        total += copy.top().v;
        err += copy.top().e;
        copy.pop();
      }
    }
  }
  return total;
}

}  // namespace rollwave
