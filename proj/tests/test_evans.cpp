#include <cmath>
#include <random>

#include "doctest.h"
#include "rollwave/evans.hpp"
#include "rollwave/lowfreq.hpp"

using namespace rollwave;

TEST_CASE("conjugate symmetry") {
  const Wave w({3.0, 1.0, 0.8});
  for (cplx lam : {cplx(0.4, 1.1), cplx(2.0, -7.0), cplx(0.01, 0.3)}) {
    for (double xi : {0.0, 0.7, -2.1}) {
      const cplx a = evans(w, lam, xi), b = evans(w, std::conj(lam), -xi);
      CHECK(std::abs(a - std::conj(b)) < 1e-9 * std::abs(a));
    }
  }
}

TEST_CASE("Delta vanishes at the origin for every xi") {
  const Wave w({3.0, 1.0, 0.8});
  const EvansSplit s0 = evans_split(w, 0.0);
  const EvansSplit s1 = evans_split(w, 1.0);
  const double scale = std::abs(s1.full(0.0));
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-M_PI / w.period(), M_PI / w.period());
  for (int k = 0; k < 16; ++k) CHECK(std::abs(s0.full(u(rng))) <= 1e-12 * scale);
}

TEST_CASE("hat Delta is real on the real axis") {
  const Wave w({8.0, 1.0, 0.22});
  for (double l : {0.05, 1.0, 30.0}) {
    const cplx h = evans_hat(w, l, 0.0);
    CHECK(std::abs(h.imag()) <= 1e-10 * std::abs(h));
  }
}

TEST_CASE("hat Delta at zero equals the closed-form first coefficient") {
  const WaveParameters p{3.0, 1.0, 0.8};
  const Wave w(p);
  const double a1 = alpha1_closed(p), X = w.period();
  const EvansSplit s = evans_split(w, 0.0);
  for (double xi : {0.1, 0.9, 2.5}) {
    const cplx expect = (std::polar(1.0, xi * X) - 1.0) / cplx(0, X) * cplx(0, a1);
    CHECK(std::abs(s.hat(xi) - expect) < 1e-8 * std::abs(expect));
  }
}

TEST_CASE("direct and split assemblies agree") {
  for (const WaveParameters p : {WaveParameters{3.0, 1.0, 0.8}, WaveParameters{8.0, 1.0, 0.22}}) {
    const Wave w(p);
    for (cplx lam : {cplx(0.5, 0.5), cplx(3.0, -2.0), cplx(0.0, 20.0)}) {
      for (double xi : {0.0, 0.4}) {
        const cplx a = evans(w, lam, xi), b = evans_direct(w, lam, xi);
        CHECK(std::abs(a - b) <= 1e-9 * std::abs(a));
      }
    }
  }
}

TEST_CASE("scale invariance in H_s") {
  // lambda scales like H_s^(-1/2), xi like 1/H_s; the ratio must not depend on (lambda, xi).
  const Wave w1({3.0, 1.0, 0.8});
  for (double Hs : {2.0, 4.0}) {
    const Wave w2({3.0, Hs, 0.8 * Hs});
    cplx ratio0 = 0;
    for (auto [lam, xi] : {std::pair{cplx(0.7, 0.2), 0.3}, std::pair{cplx(2.0, -5.0), 1.1},
                           std::pair{cplx(0.1, 9.0), -0.6}}) {
      const cplx r = evans(w2, lam / std::sqrt(Hs), xi / Hs) / evans(w1, lam, xi);
      if (ratio0 == 0.0)
        ratio0 = r;
      else
        CHECK(std::abs(r - ratio0) <= 1e-8 * std::abs(ratio0));
    }
  }
}
