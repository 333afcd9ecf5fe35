#pragma once

#include <string_view>
#include <vector>

#include "rollwave/quadrature.hpp"

namespace rollwave {

struct WaveParameters {
  double froude = 3.0;
  double h_sonic = 1.0;
  double h_minus = 0.8;
};

enum class Validity { ok, froude_too_small, nonpositive_sonic, below_homoclinic, near_homoclinic, above_sonic };
std::string_view to_string(Validity v);

struct ValidityReport {
  bool valid = false;
  Validity reason = Validity::ok;
  double h_hom = 0.0;              // scaled lower existence bound
  double margin_homoclinic = 0.0;  // H_-/H_s - h_hom
  double margin_sonic = 0.0;       // 1 - H_-/H_s
};

// Relative distance to the homoclinic bound below which inputs are rejected.
inline constexpr double kNearHomoclinic = 1e-8;

struct WaveQuantities {
  double froude = 0, h_sonic = 0, h_minus = 0;
  double h_plus = 0;
  double speed = 0;
  double flux_const = 0;
  double period = 0;
  double sonic_pos = 0;
  double h_hom = 0;
  double avg_h = 0;
  double avg_q = 0;
  double avg_gamma = 0;
  double wavenumber = 0;
  double temporal_wavenumber = 0;
};

double h_hom(double F);
// Second root of the slope numerator.
double h_low(double F);
// Right state of the shock in the scaled frame.
double z_plus(double hm);
double z_plus_derivative(double hm);
// Scaled slope field.
double psi(double h, double F);
// Physical slope dH/dx.
double psi_full(double H, double F, double Hs);
double rh_residual(double F, double Hs, double Hm, double Hp);

ValidityReport validate_params(const WaveParameters& p, double near_homoclinic = kNearHomoclinic);
// Throws invalid_parameters when the report is negative.
void require_valid(const WaveParameters& p, double near_homoclinic = kNearHomoclinic);

WaveQuantities derived_constants(const WaveParameters& p, double near_homoclinic = kNearHomoclinic);
// Production path: scaled quadratures followed by unscale.
WaveQuantities quadratures(const WaveParameters& p, const QuadratureOptions& opt = {},
                           double near_homoclinic = kNearHomoclinic);
// Integrates in physical variables; used to check the scaling route.
WaveQuantities quadratures_direct(const WaveParameters& p, const QuadratureOptions& opt = {});
WaveQuantities unscale(const WaveQuantities& scaled, double Hs);

class ProfileField {
 public:
  explicit ProfileField(const WaveParameters& p, const QuadratureOptions& opt = {});
  const WaveQuantities& quantities() const { return w_; }
  double slope_of_height(double H) const;
  double x_of_height(double H) const;
  double height_of_x(double x) const;

  struct Sample {
    double x, H, Q;
  };
  std::vector<Sample> sample(int n = 1024) const;

 private:
  WaveParameters p_;
  WaveQuantities w_;
  QuadratureOptions opt_;
};

}  // namespace rollwave
