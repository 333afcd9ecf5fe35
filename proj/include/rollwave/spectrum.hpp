#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "rollwave/evans.hpp"
#include "rollwave/highfreq.hpp"
#include "rollwave/lowfreq.hpp"

namespace rollwave {

// Boundary of {Re lambda > 0, r < |lambda| < R}, positively oriented: large arc
// from -iR to iR, segment down to ir, small arc clockwise to -ir, segment down
// to -iR.  Points are indexed by a real parameter u in [0, total()).
struct ContourSpec {
  double r_inner = 0.01;
  double r_outer = 400.0;
  int n_small_arc = 1000;
  int n_segment = 2000;
  int n_large_arc = 2000;
  int max_refine_depth = 30;
  double guard = 1e-12;

  int total() const { return n_small_arc + 2 * n_segment + n_large_arc; }
  cplx point(double u) const;
  ContourSpec doubled() const;
};

struct WindingResult {
  double xi = 0;
  int winding = 0;
  double total_phase = 0;
  int refined_edges = 0;
};

// Split determinant sampled on a contour.  Refinement points are computed on
// demand and cached; the object is safe to share between threads.
class SplitTable {
 public:
  SplitTable(const Wave& w, const ContourSpec& c, const SolveOptions& opt = {}, int workers = 1);

  const ContourSpec& contour() const { return c_; }
  const Wave& wave() const { return *w_; }
  std::size_t size() const { return base_.size(); }
  const EvansSplit& base(std::size_t j) const { return base_[j]; }
  EvansSplit at(double u) const;

  // Windings for a batch of xi values, kernel pass first and refinement of
  // flagged edges afterwards.
  std::vector<WindingResult> windings(const std::vector<double>& xi) const;
  WindingResult winding(double xi) const { return windings({xi}).front(); }

 private:
  double refine(double ua, const EvansSplit& a, double ub, const EvansSplit& b, double xi,
                int depth, int& count) const;

  const Wave* w_;
  ContourSpec c_;
  SolveOptions opt_;
  std::vector<EvansSplit> base_;
  std::vector<double> d0re_, d0im_, d1re_, d1im_, scale_;
  mutable std::mutex m_;
  mutable std::map<double, EvansSplit> cache_;
};

int winding_number(const Wave& w, double xi, const ContourSpec& c = {}, const SolveOptions& opt = {});

// Nonnegative half of the symmetric uniform mesh of n points on [-pi/X, pi/X].
std::vector<double> xi_half_mesh(double period, int n);

enum class Verdict { stable, unstable_lowfreq, unstable_midfreq, hf_flagged };
std::string_view to_string(Verdict v);

struct StabilityVerdict {
  WaveParameters wave;
  Verdict verdict = Verdict::stable;
  int max_winding = 0;
  double worst_xi = 0;
  double alpha0 = 0, alpha = 0, gamma = 0, beta = 0;
  double index = 0, threshold = 0;
  bool parity_unstable = false;
  bool winding_computed = false;
  cplx axis_seed = 0.0;  // imaginary-axis point of least |hat Delta| at worst_xi
  std::vector<WindingResult> winding_profile;
};

struct ClassifyOptions {
  int xi_mesh = 1000;
  ContourSpec contour{};
  bool prefilter = false;  // skip the winding sweep when low frequencies already fail
  int workers = 1;
  double near_homoclinic = kNearHomoclinic;
  SolveOptions solve{};
};

StabilityVerdict classify_stability(const WaveParameters& p, const ClassifyOptions& opt = {});
// Winding-only predicate: max over the xi mesh of the winding number.
StabilityVerdict winding_sweep(const Wave& w, const ClassifyOptions& opt = {});

struct CurvePoint {
  double xi = 0;
  cplx lambda;
  double residual = 0;  // |hat Delta| / (|d0| + |d1|)
};
struct SpectralCurve {
  std::vector<CurvePoint> points;
  bool complete = true;
  std::string diagnostic;
};

// Newton root of hat Delta(., xi) from a starting guess.
CurvePoint newton_root(const Wave& w, cplx guess, double xi, double tol = 1e-12, int max_iter = 40,
                       const SolveOptions& opt = {});
SpectralCurve track_critical_root(const Wave& w, cplx seed, double xi0, double xi1, int steps,
                                  const SolveOptions& opt = {});

// alpha and beta fitted from tracked small roots at xi = +-h, +-2h.
struct LowFreqFit {
  double alpha = 0, beta = 0;
  std::vector<CurvePoint> roots;
};
LowFreqFit fit_low_frequency(const Wave& w, const LowFreqCoefficients& lf, double h_over_X = 1e-3,
                             const SolveOptions& opt = {});

// Points i*omega, omega > 0, where the relative gap (|d0| - |d1|) / (|d0| + |d1|)
// has a local minimum below max_gap.  A zero gap means i*omega is spectrum for
// some xi; a small minimum marks a curve touching the axis.
struct AxisPoint {
  double omega = 0;
  double gap = 0;
};
std::vector<AxisPoint> imaginary_axis_points(const Wave& w, double omega_min, double omega_max, double step,
                                             double max_gap = 1e-3, const SolveOptions& opt = {});

struct MidFreqBoundary {
  double F = 0;
  double hm = 0;        // midpoint of the final bracket
  double lo = 0, hi = 0;
  bool lo_unstable = true;
  cplx touching;        // unstable root closest to the imaginary axis at the unstable end
  double touching_xi = 0;
  int evaluations = 0;
  std::vector<AxisPoint> axis_points;  // at the bracket midpoint
};
struct MidFreqOptions {
  double tol = 1e-6;
  bool log_distance = false;  // bisect in log(H_minus - H_hom)
  double axis_omega_max = 50;
  double axis_step = 0.01;
  double axis_gap = 1e-3;
  ClassifyOptions classify{};
};
MidFreqBoundary refine_midfreq_boundary(double F, double lo, double hi, const MidFreqOptions& opt = {});

// Unstable root nearest the imaginary axis for the worst xi of a sweep.
cplx locate_unstable_root(const Wave& w, const StabilityVerdict& v, const ClassifyOptions& opt,
                          double* xi_out = nullptr);

}  // namespace rollwave
