#include <cmath>

#include "doctest.h"
#include "rollwave/highfreq.hpp"

using namespace rollwave;

TEST_CASE("closed-form gamma~+ matches the matrix chain") {
  const Wave w({3.0, 1.0, 0.8});
  for (double H : {0.82, 0.9, 0.97, 1.05, 1.2, 1.35}) {
    if (H >= w.Hp()) continue;
    CHECK(gamma_tilde_plus(w, H) == doctest::Approx(gamma_tilde_plus_chain(w, H)).epsilon(1e-6));
  }
  CHECK(std::isfinite(gamma_tilde_plus(w, w.Hs())));
}

TEST_CASE("index below one on both scans") {
  for (int k = 0; k < 10; ++k) {
    const double hh = h_hom(3.0), hm = hh + (1 - hh) * (k + 0.5) / 10;
    const double I = hf_index(Wave({3.0, 1.0, hm})).index;
    CHECK(I > 0);
    CHECK(I < 1);
  }
  for (double F : {2.4, 5.0, 20.0}) CHECK(hf_index(Wave({F, 1.0, 0.8})).index < 1);
}

TEST_CASE("index increases towards the small-amplitude end") {
  double prev = 0;
  for (double hm : {0.7, 0.8, 0.9, 0.99}) {
    const double I = hf_index(Wave({3.0, 1.0, hm})).index;
    CHECK(I > prev);
    prev = I;
  }
}

TEST_CASE("threshold and prefactor") {
  const Wave w({3.0, 1.0, 0.8});
  const HighFreqData d = hf_index(w);
  CHECK(d.threshold > 0);
  CHECK(d.threshold < 1);
  CHECK(d.prefactor == doctest::Approx(hf_prefactor(w)));
  CHECK(d.verdict == (d.index < d.threshold ? "hf_clear" : "hf_curve"));
}

TEST_CASE("asymptotic ratio approaches one") {
  const Wave w({3.0, 1.0, 0.8});
  const auto s = hf_asymptotic_check(w, {50, 100, 200});
  double prev = 1e300;
  for (const auto& a : s) {
    const double e = std::abs(a.ratio - 1.0);
    CHECK(e < prev);
    prev = e;
  }
  CHECK(std::abs(s.back().ratio - 1.0) < 0.05);
}
