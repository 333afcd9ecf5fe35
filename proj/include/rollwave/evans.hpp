#pragma once

#include <complex>

#include "rollwave/singular_ode.hpp"

namespace rollwave {

// hat Delta(lambda, xi) = exp(log_scale) * (d0 + exp(i xi X) d1).
struct EvansSplit {
  cplx lambda;
  cplx d0, d1;
  double period = 0;
  double log_scale = 0;
  long steps = 0;

  cplx phase(double xi) const { return std::polar(1.0, xi * period); }
  // Mantissa of hat Delta; same argument as the true value.
  cplx hat_mantissa(double xi) const { return d0 + phase(xi) * d1; }
  cplx hat(double xi) const { return std::exp(log_scale) * hat_mantissa(xi); }
  cplx full(double xi) const { return lambda * hat(xi); }
};

// Split with lambda-derivatives: d0[k], d1[k] are the k-th Taylor coefficients in lambda.
struct EvansSplitJet {
  cplx lambda;
  std::vector<cplx> d0, d1;
  double period = 0;
  double log_scale = 0;
};

EvansSplit evans_split(const Wave& w, cplx lambda, const SolveOptions& opt = {});
EvansSplit assemble_split(const Wave& w, const ChainTrace& t);
// Uses levels 0..order of the chain; order + 1 <= t.levels.
EvansSplitJet assemble_split_jet(const Wave& w, const ChainTrace& t, int order);
EvansSplitJet evans_split_jet(const Wave& w, cplx lambda, int order, const SolveOptions& opt = {});

cplx evans_hat(const Wave& w, cplx lambda, double xi, const SolveOptions& opt = {});
cplx evans(const Wave& w, cplx lambda, double xi, const SolveOptions& opt = {});
// Face-value assembly of the full determinant, without the integral.
cplx evans_direct(const Wave& w, const EigenTrace& t, double xi);
cplx evans_direct(const Wave& w, cplx lambda, double xi, const SolveOptions& opt = {});

}  // namespace rollwave
