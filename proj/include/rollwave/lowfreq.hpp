#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rollwave/evans.hpp"
#include "rollwave/modulation.hpp"

namespace rollwave {

struct LowFreqCoefficients {
  double alpha0 = 0;         // d_lambda hat Delta(0,0)
  double alpha1_over_i = 0;  // d_xi hat Delta(0,0) / i
  double alpha = 0;
  double gamma = 0;
  double beta = 0;
  double alpha1_real_part = 0;  // should vanish
  double gamma_imag = 0;        // should vanish
  bool alpha0_small = false;
};

// alpha1 / i from the polynomial form in the scaled heights.
double alpha1_closed(const WaveParameters& p);
// Same quantity from the jump/bracket form.
double alpha1_closed_bracket(const WaveParameters& p);
// The cubic in F inside the polynomial form; its sign is that of alpha1 / i.
double alpha1_cubic(double F, double hm);

// Lambda-jet of the split determinant at lambda = 0 up to second order, from
// the closed-form level 0 and the second-variation solve.
EvansSplitJet split_jet_at_zero(const Wave& w, const SolveOptions& opt = {});

struct Alpha0Result {
  double alpha0 = 0, alpha1_over_i = 0, alpha = 0;
  bool alpha0_small = false;
};
Alpha0Result alpha0_and_alpha(const Wave& w, const SolveOptions& opt = {});
// Full set including gamma and beta; throws numerical_inconsistency on a
// spurious imaginary residue.
LowFreqCoefficients low_frequency(const Wave& w, const SolveOptions& opt = {});
LowFreqCoefficients gamma_coefficient(const Wave& w, const SolveOptions& opt = {});

struct ParityIndices {
  double alpha0 = 0, alpha1_over_i = 0, alpha = 0;
  bool coperiodic_odd = false;   // odd number of positive real roots of Delta(., 0)
  bool subharmonic_odd = false;  // same for Delta(., pi/X)
  bool unstable = false;         // either parity is odd
  bool unstable_if_alpha_negative = false;  // the literal sign rule, kept for reporting
};
ParityIndices parity_indices(const Wave& w, const SolveOptions& opt = {});

// Leading-order modulation prediction for Delta near the origin.
struct SerreResidual {
  cplx delta, model;
  double gamma0 = 0;
  double residual = 0;
};
double serre_gamma0(const Wave& w);
SerreResidual serre_consistency(const Wave& w, cplx lambda, double xi, const SolveOptions& opt = {});

struct BoundaryPoint {
  double F = 0;
  std::optional<double> hm_I, hm_II;  // scaled H_-
  std::string note_I, note_II;
  double hp(double hm) const { return z_plus(hm); }
};

struct BoundaryOptions {
  int scan_points = 200;
  double tol_I = 1e-12;
  double tol_II = 1e-12;  // relative distance to H_hom, log variable
  double near_homoclinic = 1e-11;
  SolveOptions solve{};
};

// Scaled H_- where alpha1 changes sign (largest root below 1).
std::optional<double> boundary_I(double F, const BoundaryOptions& opt = {});
// Scaled H_- where gamma changes sign; searched on a logarithmic grid of
// distances to H_hom.
std::optional<double> boundary_II(double F, const BoundaryOptions& opt = {});
std::vector<BoundaryPoint> boundary_curves(const std::vector<double>& froude,
                                           const BoundaryOptions& opt = {}, int workers = 1);

}  // namespace rollwave
