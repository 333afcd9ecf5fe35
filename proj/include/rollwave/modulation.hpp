#pragma once

#include <array>
#include <complex>

#include "rollwave/profile.hpp"

namespace rollwave {

using Mat2 = std::array<std::array<double, 2>, 2>;

double det(const Mat2& a);
Mat2 inverse(const Mat2& a);
Mat2 operator*(const Mat2& a, const Mat2& b);

// Scaled averages and their derivatives in the scaled left height (F fixed).
struct ScaledAverages {
  double h_minus = 0, h_plus = 0, speed = 0, flux = 0;
  double ell = 0, d_ell = 0;
  double avg_h = 0, d_avg_h = 0;
  double avg_gamma = 0, d_avg_gamma = 0;
  double sonic_pos = 0, d_sonic_pos = 0;
  double d_zplus = 0;
};
ScaledAverages scaled_averages(double F, double hm, const QuadratureOptions& opt = {});

// Physical partial derivatives in (H_s, H_-).
struct ParamDerivatives {
  ScaledAverages scaled;
  double d_ell_dhm = 0, d_ell_dhs = 0;
  double d_avgh_dhm = 0, d_avgh_dhs = 0;
  double d_avggamma_dhm = 0, d_avggamma_dhs = 0;
  double d_xminus_dhm = 0, d_xminus_dhs = 0;
  double d_period_dhm = 0, d_period_dhs = 0;
};
ParamDerivatives param_derivatives(const WaveParameters& p, const QuadratureOptions& opt = {});

enum class SystemTag { whitham, averaged };

struct ModulationJacobians {
  Mat2 a0{};
  Mat2 a1{};
  SystemTag system_tag = SystemTag::whitham;
  double det_a0 = 0;
  bool evolutionary = false;
};
// Coordinates (H_s, H_-/H_s).
ModulationJacobians whitham_jacobians(const WaveParameters& p, const QuadratureOptions& opt = {});
ModulationJacobians averaged_jacobians(const WaveParameters& p, const QuadratureOptions& opt = {});

// det(lambda A0 + i xi A1) in (H_s, H_-/H_s) coordinates.
std::complex<double> whitham_dispersion(const ModulationJacobians& j, std::complex<double> lambda,
                                        std::complex<double> xi);

struct Characteristics {
  double alpha1 = 0;
  double alpha2 = 0;
  bool hyperbolic = true;
  bool jordan_defect = false;
  double jordan_quantity = 0;
};
Characteristics whitham_characteristics(const WaveParameters& p, const QuadratureOptions& opt = {});
// Generalized eigenvalues of (A0, A1); nan pair when complex.
std::array<double, 2> generalized_eigenvalues(const ModulationJacobians& j);

double averaged_discriminant(const WaveParameters& p, const QuadratureOptions& opt = {});
// The reduced averaged matrix minus c Id in its displayed closed form.
Mat2 averaged_reduced_matrix(const WaveParameters& p, const QuadratureOptions& opt = {});

}  // namespace rollwave
