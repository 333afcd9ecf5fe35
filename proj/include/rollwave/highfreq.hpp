#pragma once

#include <string>
#include <vector>

#include "rollwave/evans.hpp"

namespace rollwave {

struct HighFreqData {
  double mu_tilde_plus_integral = 0;     // over one period in x
  double gamma_tilde_plus_integral = 0;  // over one period in x
  double index = 0;
  double prefactor = 0;  // gamma_0
  double asymptote = 0;  // ln(index) / int mu~+
  double threshold = 0;
  std::string verdict;   // hf_clear or hf_curve
};

double mu_tilde_plus(const Wave& w, double H);
// Closed form of the (1,1) entry of C0 divided by p'(H) - q0^2/H^2.
double gamma_tilde_plus(const Wave& w, double H);
// Direct evaluation of the same entry from the 2x2 matrix chain, with the
// x-derivatives of P0 and B1 taken by central differences in H.
double gamma_tilde_plus_chain(const Wave& w, double H, double dh = 1e-5);

double hf_prefactor(const Wave& w);
HighFreqData hf_index(const Wave& w, const QuadratureOptions& opt = {});

struct AsymptoticSample {
  double lambda = 0;
  cplx ratio;
};
// Delta(lambda, 0) / (gamma_0 lambda^2 exp(int_{x_s}^{X} (lambda mu~+ + gamma~+)))
std::vector<AsymptoticSample> hf_asymptotic_check(const Wave& w, const std::vector<double>& lambdas,
                                                  const SolveOptions& opt = {});
// Smallest lambda = 10 * 2^k (k < kmax) at which the ratio is within tol of 1.
double hf_empirical_radius(const Wave& w, double tol = 0.1, int kmax = 8,
                           const SolveOptions& opt = {});

}  // namespace rollwave
