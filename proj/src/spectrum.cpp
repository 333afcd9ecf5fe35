#include "rollwave/spectrum.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "rollwave/kernels/winding.hpp"
#include "rollwave/parallel.hpp"

namespace rollwave {

namespace {
constexpr double kPi = std::numbers::pi;
}

cplx ContourSpec::point(double u) const {
  const double nl = n_large_arc, ns = n_segment, na = n_small_arc;
  const cplx I(0.0, 1.0);
  if (u < nl) return std::polar(r_outer, -0.5 * kPi + kPi * u / nl);
  u -= nl;
  if (u < ns) return I * (r_outer + (r_inner - r_outer) * u / ns);
  u -= ns;
  if (u < na) return std::polar(r_inner, 0.5 * kPi - kPi * u / na);
  u -= na;
  return I * (-r_inner + (r_inner - r_outer) * u / ns);
}

ContourSpec ContourSpec::doubled() const {
  ContourSpec c = *this;
  c.n_small_arc *= 2;
  c.n_segment *= 2;
  c.n_large_arc *= 2;
  return c;
}

SplitTable::SplitTable(const Wave& w, const ContourSpec& c, const SolveOptions& opt, int workers)
    : w_(&w), c_(c), opt_(opt) {
  const std::size_t n = c.total();
  base_.resize(n);
  parallel_for(n, workers, [&](std::size_t j) { base_[j] = evans_split(w, c.point(double(j)), opt); });
  d0re_.resize(n);
  d0im_.resize(n);
  d1re_.resize(n);
  d1im_.resize(n);
  scale_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    d0re_[j] = base_[j].d0.real();
    d0im_[j] = base_[j].d0.imag();
    d1re_[j] = base_[j].d1.real();
    d1im_[j] = base_[j].d1.imag();
    const double s = std::abs(base_[j].d0) + std::abs(base_[j].d1);
    scale_[j] = s * s;
  }
}

EvansSplit SplitTable::at(double u) const {
  {
    std::lock_guard<std::mutex> g(m_);
    auto it = cache_.find(u);
    if (it != cache_.end()) return it->second;
  }
  EvansSplit s = evans_split(*w_, c_.point(u), opt_);
  std::lock_guard<std::mutex> g(m_);
  cache_.emplace(u, s);
  return s;
}

namespace {

double rel_modulus(const EvansSplit& s, double xi) {
  return std::abs(s.hat_mantissa(xi)) / (std::abs(s.d0) + std::abs(s.d1));
}

}  // namespace

double SplitTable::refine(double ua, const EvansSplit& a, double ub, const EvansSplit& b, double xi,
                          int depth, int& count) const {
  const double d = std::arg(b.hat_mantissa(xi) / a.hat_mantissa(xi));
  if (std::abs(d) <= 0.5 * kPi) return d;
  if (depth >= c_.max_refine_depth)
    throw Error(ErrorCode::nonconvergent_refinement,
                "phase jump unresolved near lambda = " + std::to_string(c_.point(ua).real()) + "+" +
                    std::to_string(c_.point(ua).imag()) + "i");
  ++count;
  const double um = 0.5 * (ua + ub);
  const EvansSplit m = at(um);
  if (rel_modulus(m, xi) < c_.guard)
    throw Error(ErrorCode::contour_near_zero, "hat Delta vanishes on the contour");
  return refine(ua, a, um, m, xi, depth + 1, count) + refine(um, m, ub, b, xi, depth + 1, count);
}

std::vector<WindingResult> SplitTable::windings(const std::vector<double>& xi) const {
  const std::size_t m = xi.size(), n = base_.size();
  std::vector<double> total(m), mx(m), mn(m);
  kernels::SplitView v{d0re_.data(), d0im_.data(), d1re_.data(), d1im_.data(), scale_.data(), n};
  kernels::winding_sweep(v, xi.data(), m, w_->period(), {total.data(), mx.data(), mn.data()});
  std::vector<WindingResult> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    WindingResult& r = out[k];
    r.xi = xi[k];
    if (!(mn[k] >= c_.guard * c_.guard))
      throw Error(ErrorCode::contour_near_zero,
                  "hat Delta vanishes on the contour at xi = " + std::to_string(xi[k]));
    double t = total[k];
    if (mx[k] > 0.5 * kPi) {
      t = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jn = j + 1 == n ? 0 : j + 1;
        const double ub = jn == 0 ? double(n) : double(jn);
        t += refine(double(j), base_[j], ub, base_[jn], xi[k], 0, r.refined_edges);
      }
    }
    r.total_phase = t;
    const double turns = t / (2 * kPi);
    r.winding = static_cast<int>(std::lround(turns));
    if (std::abs(turns - r.winding) > 1e-3)
      throw Error(ErrorCode::nonconvergent_refinement, "non-integer winding " + std::to_string(turns));
  }
  return out;
}

int winding_number(const Wave& w, double xi, const ContourSpec& c, const SolveOptions& opt) {
  return SplitTable(w, c, opt).winding(xi).winding;
}

std::vector<double> xi_half_mesh(double period, int n) {
  std::vector<double> out;
  const double a = kPi / period;
  for (int k = 0; k < n; ++k) {
    const double xi = -a + 2 * a * k / (n - 1);
    if (2 * k >= n - 1) out.push_back(std::max(0.0, xi));
  }
  return out;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::stable: return "stable";
    case Verdict::unstable_lowfreq: return "unstable_lowfreq";
    case Verdict::unstable_midfreq: return "unstable_midfreq";
    case Verdict::hf_flagged: return "hf_flagged";
  }
  return "unknown";
}

namespace {

// Base contour point on the imaginary axis with the smallest relative |hat Delta|.
cplx axis_minimum(const SplitTable& t, double xi) {
  const ContourSpec& c = t.contour();
  const cplx E = std::polar(1.0, xi * t.wave().period());
  const int nl = c.n_large_arc, ns = c.n_segment, na = c.n_small_arc;
  double best = 1e300;
  cplx seed = 0.0;
  for (int j = 0; j < c.total(); ++j) {
    const bool on_axis = (j >= nl && j < nl + ns) || j >= nl + ns + na;
    if (!on_axis) continue;
    const EvansSplit& s = t.base(j);
    const double r = std::abs(s.d0 + E * s.d1) / (std::abs(s.d0) + std::abs(s.d1));
    if (r < best) {
      best = r;
      seed = s.lambda;
    }
  }
  return seed;
}

}  // namespace

StabilityVerdict winding_sweep(const Wave& w, const ClassifyOptions& opt) {
  StabilityVerdict v;
  v.wave = w.params();
  const SplitTable t(w, opt.contour, opt.solve, opt.workers);
  v.winding_profile = t.windings(xi_half_mesh(w.period(), opt.xi_mesh));
  v.winding_computed = true;
  for (const auto& r : v.winding_profile) {
    if (r.winding > v.max_winding) {
      v.max_winding = r.winding;
      v.worst_xi = r.xi;
    }
  }
  if (v.max_winding > 0) v.axis_seed = axis_minimum(t, v.worst_xi);
  return v;
}

StabilityVerdict classify_stability(const WaveParameters& p, const ClassifyOptions& opt) {
  const Wave w(p, {}, opt.near_homoclinic);
  const LowFreqCoefficients lf = low_frequency(w, opt.solve);
  const HighFreqData hf = hf_index(w);
  const bool parity = lf.alpha0 < 0 || lf.alpha1_over_i > 0;
  const bool low_fail = parity || !(lf.beta > 0);
  StabilityVerdict v;
  if (!(opt.prefilter && low_fail)) v = winding_sweep(w, opt);
  v.wave = p;
  v.alpha0 = lf.alpha0;
  v.alpha = lf.alpha;
  v.gamma = lf.gamma;
  v.beta = lf.beta;
  v.index = hf.index;
  v.threshold = hf.threshold;
  v.parity_unstable = parity;
  if (low_fail)
    v.verdict = Verdict::unstable_lowfreq;
  else if (v.max_winding > 0)
    v.verdict = Verdict::unstable_midfreq;
  else if (!(hf.index < hf.threshold))
    v.verdict = Verdict::hf_flagged;
  else
    v.verdict = Verdict::stable;
  return v;
}

CurvePoint newton_root(const Wave& w, cplx guess, double xi, double tol, int max_iter,
                       const SolveOptions& opt) {
  cplx lam = guess;
  const cplx E = std::polar(1.0, xi * w.period());
  for (int it = 0; it < max_iter; ++it) {
    const EvansSplitJet j = evans_split_jet(w, lam, 1, opt);
    const cplx f = j.d0[0] + E * j.d1[0];
    const cplx fp = j.d0[1] + E * j.d1[1];
    cplx step = f / fp;
    const double cap = 0.25 * std::abs(lam) + 0.05;
    if (std::abs(step) > cap) step *= cap / std::abs(step);
    lam -= step;
    if (std::abs(step) < tol * (1.0 + std::abs(lam))) {
      const EvansSplit s = evans_split(w, lam, opt);
      return {xi, lam, rel_modulus(s, xi)};
    }
  }
  throw Error(ErrorCode::continuation_stall, "Newton did not converge at xi = " + std::to_string(xi));
}

SpectralCurve track_critical_root(const Wave& w, cplx seed, double xi0, double xi1, int steps,
                                  const SolveOptions& opt) {
  SpectralCurve c;
  CurvePoint p;
  try {
    p = newton_root(w, seed, xi0, 1e-12, 40, opt);
  } catch (const Error& e) {
    c.complete = false;
    c.diagnostic = e.what();
    return c;
  }
  c.points.push_back(p);
  const double h0 = (xi1 - xi0) / steps;
  double xi = xi0, h = h0;
  cplx prev_slope = 0.0;
  while ((h0 > 0 && xi < xi1 - 1e-15 * std::abs(xi1)) || (h0 < 0 && xi > xi1 + 1e-15 * std::abs(xi1))) {
    if (h0 > 0 ? xi + h > xi1 : xi + h < xi1) h = xi1 - xi;
    const cplx guess = c.points.back().lambda + prev_slope * h;
    try {
      const CurvePoint q = newton_root(w, guess, xi + h, 1e-12, 25, opt);
      // Reject jumps to a different branch.
      if (std::abs(q.lambda - guess) > 0.2 * (std::abs(c.points.back().lambda) + 1e-3) + 4 * std::abs(prev_slope * h))
        throw Error(ErrorCode::continuation_stall, "branch jump");
      prev_slope = (q.lambda - c.points.back().lambda) / h;
      xi += h;
      c.points.push_back(q);
      h = std::abs(h * 1.5) < std::abs(h0) ? h * 1.5 : h0;
    } catch (const Error& e) {
      h *= 0.5;
      if (std::abs(h) < 1e-6 * std::abs(h0)) {
        c.complete = false;
        c.diagnostic = std::string("continuation_stall at xi = ") + std::to_string(xi) + ": " + e.what();
        return c;
      }
    }
  }
  return c;
}

LowFreqFit fit_low_frequency(const Wave& w, const LowFreqCoefficients& lf, double h_over_X,
                             const SolveOptions& opt) {
  const double X = w.period();
  const cplx I(0.0, 1.0);
  LowFreqFit fit;
  auto root = [&](double xi) {
    const cplx guess = -I * lf.alpha * xi - lf.beta * xi * xi;
    return newton_root(w, guess, xi, 1e-14, 40, opt);
  };
  const double h = h_over_X / X;
  for (double xi : {h, -h, 2 * h, -2 * h}) fit.roots.push_back(root(xi));
  const cplx a1 = (fit.roots[0].lambda - fit.roots[1].lambda) / (2 * h);
  const cplx a2 = (fit.roots[2].lambda - fit.roots[3].lambda) / (4 * h);
  const cplx b1 = (fit.roots[0].lambda + fit.roots[1].lambda) / (2 * h * h);
  const cplx b2 = (fit.roots[2].lambda + fit.roots[3].lambda) / (8 * h * h);
  // Richardson: odd part has an h^2 error, even part an h^2 error.
  fit.alpha = ((4.0 * a1 - a2) / 3.0 * I).real();
  fit.beta = -((4.0 * b1 - b2) / 3.0).real();
  return fit;
}

cplx locate_unstable_root(const Wave& w, const StabilityVerdict& v, const ClassifyOptions& opt,
                          double* xi_out) {
  const double xi = v.worst_xi;
  if (xi_out) *xi_out = xi;
  cplx seed = v.axis_seed;
  if (seed == 0.0) seed = axis_minimum(SplitTable(w, opt.contour, opt.solve, opt.workers), xi);
  return newton_root(w, seed + 0.01, xi, 1e-12, 60, opt.solve).lambda;
}

std::vector<AxisPoint> imaginary_axis_points(const Wave& w, double omega_min, double omega_max, double step,
                                             double max_gap, const SolveOptions& opt) {
  auto gap = [&](double om) {
    const EvansSplit s = evans_split(w, cplx(0, om), opt);
    const double a = std::abs(s.d0), b = std::abs(s.d1);
    return std::abs(a - b) / (a + b);
  };
  const int n = std::max(3, int(std::ceil((omega_max - omega_min) / step)) + 1);
  std::vector<double> om(n), g(n);
  for (int k = 0; k < n; ++k) {
    om[k] = omega_min + (omega_max - omega_min) * k / (n - 1);
    g[k] = gap(om[k]);
  }
  std::vector<AxisPoint> out;
  for (int k = 1; k + 1 < n; ++k) {
    if (!(g[k] <= g[k - 1] && g[k] < g[k + 1])) continue;
    const auto [x, v] = boost::math::tools::brent_find_minima(gap, om[k - 1], om[k + 1], 40);
    if (v < max_gap) out.push_back({x, v});
  }
  return out;
}

MidFreqBoundary refine_midfreq_boundary(double F, double lo, double hi, const MidFreqOptions& opt) {
  MidFreqBoundary b;
  b.F = F;
  const double hh = h_hom(F);
  if (opt.log_distance && (lo <= hh || hi <= hh))
    throw Error(ErrorCode::bracket_invalid, "log-distance bisection needs both ends above H_hom");
  // Bisection variable and its inverse.
  auto to_s = [&](double hm) { return opt.log_distance ? std::log(hm - hh) : hm; };
  auto to_h = [&](double s) { return opt.log_distance ? hh + std::exp(s) : s; };
  StabilityVerdict vu;
  double hu = 0;
  auto unstable = [&](double hm) {
    const Wave w({F, 1.0, hm}, {}, opt.classify.near_homoclinic);
    StabilityVerdict v = winding_sweep(w, opt.classify);
    ++b.evaluations;
    const bool u = v.max_winding > 0;
    if (u) {
      vu = std::move(v);
      hu = hm;
    }
    return u;
  };
  const bool ulo = unstable(lo), uhi = unstable(hi);
  if (ulo == uhi)
    throw Error(ErrorCode::bracket_invalid, "both bracket ends classify as " +
                                                std::string(ulo ? "unstable" : "stable"));
  b.lo_unstable = ulo;
  double slo = to_s(lo), shi = to_s(hi);
  while (std::abs(to_h(shi) - to_h(slo)) > opt.tol) {
    const double m = 0.5 * (slo + shi);
    if (unstable(to_h(m)) == ulo)
      slo = m;
    else
      shi = m;
  }
  b.lo = to_h(slo);
  b.hi = to_h(shi);
  b.hm = 0.5 * (b.lo + b.hi);
  const Wave w({F, 1.0, hu}, {}, opt.classify.near_homoclinic);
  try {
    b.touching = locate_unstable_root(w, vu, opt.classify, &b.touching_xi);
  } catch (const Error&) {
    b.touching = cplx(std::nan(""), std::nan(""));
  }
  const Wave wm({F, 1.0, b.hm}, {}, opt.classify.near_homoclinic);
  b.axis_points = imaginary_axis_points(wm, opt.classify.contour.r_inner, opt.axis_omega_max, opt.axis_step,
                                        opt.axis_gap, opt.classify.solve);
  return b;
}

}  // namespace rollwave
