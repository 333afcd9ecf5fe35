#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rollwave/highfreq.hpp"
#include "rollwave/kernels/winding.hpp"
#include "rollwave/lowfreq.hpp"
#include "rollwave/modulation.hpp"
#include "rollwave/parallel.hpp"
#include "rollwave/spectrum.hpp"
#include "rollwave/sweep.hpp"

using namespace rollwave;
using json = nlohmann::ordered_json;

namespace {

struct Globals {
  std::string froude = "3";
  std::string hminus = "0.8";
  double hsonic = 1.0;
  double tol = 1e-10;
  int workers = 0;
  std::string out;
  std::string format = "csv";
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double froude_value(const Globals& g) {
  const auto f = parse_grid(g.froude);
  if (f.size() != 1) throw Error(ErrorCode::invalid_parameters, "--froude must be a single value here");
  return f.front();
}

// Physical H_-; "hom+d" means H_s (H_hom(F) + d).
double hminus_value(const Globals& g, double F) {
  if (g.hminus.rfind("hom", 0) == 0) {
    const std::string rest = g.hminus.substr(3);
    const double d = rest.empty() ? 0.0 : std::stod(rest);
    return g.hsonic * (h_hom(F) + d);
  }
  return std::stod(g.hminus);
}

WaveParameters wave_params(const Globals& g) {
  const double F = froude_value(g);
  return {F, g.hsonic, hminus_value(g, F)};
}

SolveOptions solve_options(const Globals& g) {
  SolveOptions s;
  s.rk.rel_tol = g.tol;
  s.rk.abs_tol = 1e-2 * g.tol;
  return s;
}

int workers_of(const Globals& g) { return g.workers > 0 ? g.workers : default_workers(); }

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw Error(ErrorCode::invalid_parameters, "cannot write " + g.out);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct ContourFlags {
  ContourSpec c;
  void add(CLI::App* app) {
    app->add_option("--r-inner", c.r_inner, "inner radius");
    app->add_option("--r-outer", c.r_outer, "outer radius");
    app->add_option("--n-small-arc", c.n_small_arc);
    app->add_option("--n-segment", c.n_segment);
    app->add_option("--n-large-arc", c.n_large_arc);
  }
};

int cmd_profile(const Globals& g, int samples) {
  const WaveParameters p = wave_params(g);
  const WaveQuantities q = quadratures(p);
  if (g.format == "json") {
    json j;
    j["F"] = p.froude;
    j["Hs"] = p.h_sonic;
    j["Hminus"] = q.h_minus;
    j["Hplus"] = q.h_plus;
    j["c"] = q.speed;
    j["q0"] = q.flux_const;
    j["X"] = q.period;
    j["x_sonic"] = q.sonic_pos;
    j["H_hom_scaled"] = q.h_hom;
    j["avg_H"] = q.avg_h;
    j["avg_Q"] = q.avg_q;
    emit(g, dump(j));
    return 0;
  }
  std::string s;
  if (samples > 0) {
    s = "x,H,Q\n";
    for (const auto& r : ProfileField(p).sample(samples))
      s += num(r.x) + "," + num(r.H) + "," + num(r.Q) + "\n";
  } else {
    s = "F,Hs,Hminus,Hplus,c,q0,X,x_sonic,H_hom_scaled,avg_H,avg_Q\n";
    s += num(p.froude) + "," + num(p.h_sonic) + "," + num(q.h_minus) + "," + num(q.h_plus) + "," +
         num(q.speed) + "," + num(q.flux_const) + "," + num(q.period) + "," + num(q.sonic_pos) + "," +
         num(q.h_hom) + "," + num(q.avg_h) + "," + num(q.avg_q) + "\n";
  }
  emit(g, s);
  return 0;
}

int cmd_modulation(const Globals& g, bool scan, int scan_points) {
  if (scan) {
    // Sign changes of the averaged-model discriminant, in overlay schema.
    std::string s = "F,Hminus_over_Hs,label\n";
    for (double F : parse_grid(g.froude)) {
      const double hh = h_hom(F);
      double prev_h = 0, prev_d = 0;
      for (int k = 0; k < scan_points; ++k) {
        const double hm = hh + (1 - hh) * (k + 1) / (scan_points + 1);
        const double d = averaged_discriminant({F, 1.0, hm});
        if (k > 0 && (d > 0) != (prev_d > 0)) {
          double a = prev_h, b = hm, da = prev_d;
          for (int it = 0; it < 60; ++it) {
            const double m = 0.5 * (a + b), dm = averaged_discriminant({F, 1.0, m});
            if ((dm > 0) == (da > 0))
              a = m, da = dm;
            else
              b = m;
          }
          s += num(F) + "," + num(0.5 * (a + b)) + ",averaged_hyperbolicity\n";
        }
        prev_h = hm;
        prev_d = d;
      }
    }
    emit(g, s);
    return 0;
  }
  const WaveParameters p = wave_params(g);
  const Characteristics ch = whitham_characteristics(p);
  const ModulationJacobians j = whitham_jacobians(p);
  const double disc = averaged_discriminant(p);
  if (g.format == "json") {
    json o;
    o["alpha1"] = jnum(ch.alpha1);
    o["alpha2"] = jnum(ch.alpha2);
    o["hyperbolic"] = ch.hyperbolic;
    o["jordan_defect"] = ch.jordan_defect;
    o["det_A0"] = jnum(j.det_a0);
    o["evolutionary"] = j.evolutionary;
    o["averaged_discriminant"] = jnum(disc);
    emit(g, dump(o));
    return 0;
  }
  emit(g, "alpha1,alpha2,hyperbolic,jordan_defect,det_A0,evolutionary,averaged_discriminant\n" +
              num(ch.alpha1) + "," + num(ch.alpha2) + "," + (ch.hyperbolic ? "1" : "0") + "," +
              (ch.jordan_defect ? "1" : "0") + "," + num(j.det_a0) + "," + (j.evolutionary ? "1" : "0") +
              "," + num(disc) + "\n");
  return 0;
}

int cmd_evans(const Globals& g, double lre, double lim, double xi) {
  const WaveParameters p = wave_params(g);
  const Wave w(p);
  const cplx lam(lre, lim);
  const EvansSplit s = evans_split(w, lam, solve_options(g));
  const cplx hat = s.hat(xi), full = s.full(xi);
  if (g.format == "json") {
    json o;
    o["Delta"] = {jnum(full.real()), jnum(full.imag())};
    o["Delta_hat"] = {jnum(hat.real()), jnum(hat.imag())};
    emit(g, dump(o));
    return 0;
  }
  emit(g, "quantity,re,im\nDelta," + num(full.real()) + "," + num(full.imag()) + "\nDelta_hat," +
              num(hat.real()) + "," + num(hat.imag()) + "\n");
  return 0;
}

int cmd_boundaries(const Globals& g) {
  const auto Fs = parse_grid(g.froude);
  const auto b = boundary_curves(Fs, {}, workers_of(g));
  if (g.format == "json") {
    json a = json::array();
    for (const auto& p : b) {
      json o;
      o["F"] = p.F;
      o["H_hom"] = h_hom(p.F);
      o["boundary_I"] = p.hm_I ? json(*p.hm_I) : json(nullptr);
      o["boundary_II"] = p.hm_II ? json(*p.hm_II) : json(nullptr);
      a.push_back(o);
    }
    emit(g, dump(a));
    return 0;
  }
  std::string s = "F,H_hom,boundary_I,boundary_II\n";
  for (const auto& p : b)
    s += num(p.F) + "," + num(h_hom(p.F)) + "," + (p.hm_I ? num(*p.hm_I) : "") + "," +
         (p.hm_II ? num(*p.hm_II) : "") + "\n";
  emit(g, s);
  return 0;
}

int cmd_high_index(const Globals& g, const std::vector<double>& lambdas) {
  if (!lambdas.empty()) {
    const Wave w(wave_params(g));
    std::string s = "lambda,re_ratio,im_ratio\n";
    for (const auto& a : hf_asymptotic_check(w, lambdas, solve_options(g)))
      s += num(a.lambda) + "," + num(a.ratio.real()) + "," + num(a.ratio.imag()) + "\n";
    emit(g, s);
    return 0;
  }
  // One row per Froude value; "hom+d" is resolved per F.
  const auto Fs = parse_grid(g.froude);
  std::vector<HighFreqData> hs(Fs.size());
  std::vector<double> hm(Fs.size());
  parallel_for(Fs.size(), workers_of(g), [&](std::size_t k) {
    hm[k] = hminus_value(g, Fs[k]);
    hs[k] = hf_index(Wave({Fs[k], g.hsonic, hm[k]}));
  });
  if (g.format == "json") {
    json a = json::array();
    for (std::size_t k = 0; k < Fs.size(); ++k) {
      const HighFreqData& h = hs[k];
      json o;
      o["F"] = Fs[k];
      o["Hminus_over_Hs"] = hm[k] / g.hsonic;
      o["index"] = jnum(h.index);
      o["threshold"] = jnum(h.threshold);
      o["asymptote"] = jnum(h.asymptote);
      o["gamma0"] = jnum(h.prefactor);
      o["int_mu_tilde_plus"] = jnum(h.mu_tilde_plus_integral);
      o["int_gamma_tilde_plus"] = jnum(h.gamma_tilde_plus_integral);
      o["verdict"] = h.verdict;
      a.push_back(o);
    }
    emit(g, dump(Fs.size() == 1 ? a[0] : a));
    return 0;
  }
  std::string s = "F,Hminus_over_Hs,index,threshold,asymptote,gamma0,int_mu_tilde_plus,int_gamma_tilde_plus,verdict\n";
  for (std::size_t k = 0; k < Fs.size(); ++k) {
    const HighFreqData& h = hs[k];
    s += num(Fs[k]) + "," + num(hm[k] / g.hsonic) + "," + num(h.index) + "," + num(h.threshold) + "," +
         num(h.asymptote) + "," + num(h.prefactor) + "," + num(h.mu_tilde_plus_integral) + "," +
         num(h.gamma_tilde_plus_integral) + "," + h.verdict + "\n";
  }
  emit(g, s);
  return 0;
}

int cmd_winding(const Globals& g, const ContourSpec& c, const std::vector<double>& xis, int mesh) {
  const Wave w(wave_params(g));
  const SplitTable t(w, c, solve_options(g), workers_of(g));
  const auto xi = xis.empty() ? xi_half_mesh(w.period(), mesh) : xis;
  const auto r = t.windings(xi);
  if (g.format == "json") {
    json a = json::array();
    for (const auto& x : r) a.push_back({{"xi", x.xi}, {"winding", x.winding}});
    json o;
    o["backend"] = std::string(kernels::to_string(kernels::active_backend()));
    o["windings"] = a;
    emit(g, dump(o));
    return 0;
  }
  std::string s = "xi,winding\n";
  for (const auto& x : r) s += num(x.xi) + "," + std::to_string(x.winding) + "\n";
  emit(g, s);
  return 0;
}

int cmd_spectrum(const Globals& g, const ContourSpec& c, int mesh, bool track, double sre, double sim,
                 double xi0, double xi1, int steps, const std::vector<double>& bracket, bool log_dist,
                 double bisect_tol) {
  ClassifyOptions o;
  o.contour = c;
  o.xi_mesh = mesh;
  o.workers = workers_of(g);
  o.solve = solve_options(g);
  if (bracket.size() == 2) {
    MidFreqOptions mo;
    mo.classify = o;
    mo.log_distance = log_dist;
    mo.tol = bisect_tol;
    mo.classify.near_homoclinic = 1e-13;
    const MidFreqBoundary b = refine_midfreq_boundary(froude_value(g), bracket[0], bracket[1], mo);
    // Axis points go in one field, separated by ';'.
    std::string axis;
    for (const AxisPoint& a : b.axis_points) axis += (axis.empty() ? "" : ";") + num(a.omega);
    emit(g, "F,Hminus_over_Hs,lo,hi,touching_re,touching_im,touching_xi,evaluations,axis_omegas\n" +
                num(b.F) + "," + num(b.hm) + "," + num(b.lo) + "," + num(b.hi) + "," + num(b.touching.real()) +
                "," + num(b.touching.imag()) + "," + num(b.touching_xi) + "," + std::to_string(b.evaluations) +
                "," + axis + "\n");
    return 0;
  }
  const WaveParameters p = wave_params(g);
  if (track) {
    const Wave w(p);
    const SpectralCurve cv = track_critical_root(w, cplx(sre, sim), xi0, xi1, steps, o.solve);
    std::string s = "xi,re_lambda,im_lambda\n";
    for (const auto& q : cv.points)
      s += num(q.xi) + "," + num(q.lambda.real()) + "," + num(q.lambda.imag()) + "\n";
    emit(g, s);
    if (!cv.complete) std::cerr << "continuation_stall: " << cv.diagnostic << "\n";
    return cv.complete ? 0 : 2;
  }
  const DiagramRow r = classify_row(p, o);
  emit(g, g.format == "json" ? row_json(r) + "\n" : diagram_csv({r}, true));
  return 0;
}

int cmd_diagram(const Globals& g, const std::string& config, const std::vector<std::string>& sets,
                const CLI::App& app) {
  SweepConfig c = config.empty() ? SweepConfig{} : load_config(config);
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::config_parse_error, "--set expects key=value");
    apply_setting(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (app.count("--froude")) apply_setting(c, "froude", g.froude);
  if (app.count("--workers")) c.workers = g.workers;
  if (app.count("--out")) c.output_dir = g.out;
  if (app.count("--format")) apply_setting(c, "formats", g.format);
  if (app.count("--tol")) c.rk_tol = g.tol;
  if (c.froude_grid.empty()) throw Error(ErrorCode::config_parse_error, "no froude grid given");
  const DiagramResult r = run_diagram(c);
  std::cerr << r.rows.size() << " waves classified, " << r.skipped.size() << " skipped\n";
  for (const auto& f : r.files) std::cerr << "wrote " << f << "\n";
  return r.exit_code();
}

int cmd_overlay(const Globals& g, const std::string& path, const std::string& diagram_dir, int n) {
  const auto ext = path.empty() ? std::vector<OverlayCurve>{} : overlay_external(path);
  std::vector<GridTransition> mid;
  if (!diagram_dir.empty()) {
    std::ifstream f(diagram_dir + "/boundary_midfreq.csv");
    std::string line;
    std::getline(f, line);
    while (std::getline(f, line)) {
      std::istringstream is(line);
      std::string a, b, c;
      std::getline(is, a, ',');
      std::getline(is, b, ',');
      std::getline(is, c, ',');
      mid.push_back({std::stod(a), std::stod(b), std::stod(c)});
    }
  }
  const auto Fs = parse_grid(g.froude);
  double f0 = Fs.front(), f1 = Fs.back();
  for (const auto& cv : ext)
    for (const auto& [F, v] : cv.points) f0 = std::min(f0, F), f1 = std::max(f1, F);
  const std::string coord = ext.empty() ? "Hminus_over_Hs" : ext.front().coordinate;
  auto all = inviscid_curves(coord, f0, f1, n, mid, workers_of(g));
  all.insert(all.end(), ext.begin(), ext.end());
  if (g.format == "svg") {
    static const char* palette[] = {"#9467bd", "#8c564b", "#000000", "#17becf",
                                    "#2ca02c", "#d62728", "#ff7f0e", "#1f77b4"};
    std::vector<SvgSeries> series;
    for (std::size_t i = 0; i < all.size(); ++i) series.push_back({all[i].label, palette[i % 8], true, all[i].points});
    emit(g, svg_plot("overlay", "F", coord, series));
  } else {
    emit(g, overlay_csv(all));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral stability of inviscid roll waves"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--froude", g.froude, "Froude number, or a grid a,b,c / start:stop:count");
  app.add_option("--hminus", g.hminus, "left shock height H_-, or hom+d for H_s (H_hom + d)");
  app.add_option("--hsonic", g.hsonic, "sonic height H_s")->capture_default_str();
  app.add_option("--tol", g.tol, "relative tolerance of the eigen-ODE integrator")->capture_default_str();
  app.add_option("--workers", g.workers, "worker threads, 0 for all cores");
  app.add_option("--out", g.out, "output file (directory for diagram)");
  app.add_option("--format", g.format, "csv, json or svg; diagram accepts a comma list")
      ->check(CLI::Validator(
          [](std::string& v) {
            std::stringstream s(v);
            std::string f;
            while (std::getline(s, f, ','))
              if (f != "csv" && f != "json" && f != "svg") return "unknown format " + f;
            return std::string();
          },
          "FORMAT[,FORMAT...]"));

  auto* profile = app.add_subcommand("profile", "profile constants or samples");
  int samples = 0;
  profile->add_option("--samples", samples, "emit x,H,Q samples instead of constants");

  auto* modulation = app.add_subcommand("modulation", "Whitham characteristics");
  bool scan = false;
  int scan_points = 200;
  modulation->add_flag("--scan-boundary", scan, "emit averaged-model boundary in overlay schema");
  modulation->add_option("--scan-points", scan_points);

  auto* evans = app.add_subcommand("evans", "Delta and hat Delta at one point");
  double lre = 1, lim = 0, xi = 0;
  evans->add_option("--lambda-re", lre);
  evans->add_option("--lambda-im", lim);
  evans->add_option("--xi", xi);

  app.add_subcommand("boundaries", "low-frequency boundaries I and II");

  auto* hi = app.add_subcommand("high-index", "high-frequency index");
  std::vector<double> lambdas;
  hi->add_option("--asymptotic", lambdas, "real lambdas for the asymptotic ratio")->delimiter(',');

  auto* winding = app.add_subcommand("winding", "winding numbers over xi");
  ContourFlags wc;
  wc.add(winding);
  std::vector<double> xis;
  int mesh = 1000;
  winding->add_option("--xi", xis, "xi values (default: half mesh)")->delimiter(',');
  winding->add_option("--xi-mesh", mesh);

  auto* spectrum = app.add_subcommand("spectrum", "classification, root tracking, mid-frequency bisection");
  ContourFlags sc;
  sc.add(spectrum);
  bool track = false, log_dist = false;
  double bisect_tol = 1e-6;
  double sre = 0, sim = 0, xi0 = 0, xi1 = 0;
  int steps = 50;
  std::vector<double> bracket;
  spectrum->add_option("--xi-mesh", mesh);
  spectrum->add_flag("--track", track, "track a root of hat Delta in xi");
  spectrum->add_option("--seed-re", sre);
  spectrum->add_option("--seed-im", sim);
  spectrum->add_option("--xi0", xi0);
  spectrum->add_option("--xi1", xi1);
  spectrum->add_option("--steps", steps);
  spectrum->add_option("--bracket", bracket, "lo,hi in H_-/H_s for mid-frequency bisection")
      ->delimiter(',')
      ->expected(2);
  spectrum->add_flag("--log-distance", log_dist, "bisect in log(H_-/H_s - H_hom)");
  spectrum->add_option("--bisect-tol", bisect_tol, "final bracket width in H_-/H_s")->capture_default_str();

  auto* diagram = app.add_subcommand("diagram", "full stability diagram sweep");
  std::string config;
  std::vector<std::string> sets;
  diagram->add_option("--config", config, "key = value configuration file");
  diagram->add_option("--set", sets, "key=value override");

  auto* overlay = app.add_subcommand("overlay", "merge external boundary curves");
  std::string overlay_path, diagram_dir;
  int overlay_n = 40;
  overlay->add_option("--overlay", overlay_path, "external CSV F,<coordinate>,label");
  overlay->add_option("--diagram", diagram_dir, "diagram output directory for the mid-frequency curve");
  overlay->add_option("--points", overlay_n, "F samples of the inviscid curves");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*profile) return cmd_profile(g, samples);
    if (*modulation) return cmd_modulation(g, scan, scan_points);
    if (*evans) return cmd_evans(g, lre, lim, xi);
    if (app.got_subcommand("boundaries")) return cmd_boundaries(g);
    if (*hi) return cmd_high_index(g, lambdas);
    if (*winding) return cmd_winding(g, wc.c, xis, mesh);
    if (*spectrum)
      return cmd_spectrum(g, sc.c, mesh, track, sre, sim, xi0, xi1, steps, bracket, log_dist, bisect_tol);
    if (*diagram) return cmd_diagram(g, config, sets, app);
    if (*overlay) return cmd_overlay(g, overlay_path, diagram_dir, overlay_n);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
