#include "rollwave/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "rollwave/parallel.hpp"

namespace rollwave {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& v) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const char* b = t.data();
  const char* e = b + t.size();
  if (*b == '+') ++b;
  auto r = std::from_chars(b, e, v);
  return r.ec == std::errc() && r.ptr == e && std::isfinite(v);
}

double to_double(const std::string& key, const std::string& s) {
  double v;
  if (!parse_double(s, v)) throw Error(ErrorCode::config_parse_error, key + ": not a number: " + s);
  return v;
}

int to_count(const std::string& key, const std::string& s, int min = 1) {
  const double v = to_double(key, s);
  if (v != std::floor(v) || v < min || v > 1e9)
    throw Error(ErrorCode::config_parse_error, key + ": expected an integer >= " + std::to_string(min));
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "off" || s == "no") return false;
  throw Error(ErrorCode::config_parse_error, key + ": expected a boolean: " + s);
}

std::string num(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

nlohmann::json jnum(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

void write_file(const std::filesystem::path& p, const std::string& s, std::vector<std::string>& files) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorCode::invalid_parameters, "cannot write " + p.string());
  f << s;
  files.push_back(p.string());
}

const std::set<std::string> kCoordinates{"Hminus_over_Hs", "Hplus_over_Hs", "X_over_Hs",
                                         "Hbar_over_Hs"};

double coordinate_value(const std::string& coordinate, double F, double hm) {
  if (coordinate == "Hminus_over_Hs") return hm;
  if (coordinate == "Hplus_over_Hs") return z_plus(hm);
  const WaveQuantities q = quadratures({F, 1.0, hm}, {}, 1e-13);
  return coordinate == "X_over_Hs" ? q.period : q.avg_h;
}

const char* verdict_color(Verdict v) {
  switch (v) {
    case Verdict::stable: return "#2ca02c";
    case Verdict::unstable_lowfreq: return "#d62728";
    case Verdict::unstable_midfreq: return "#1f77b4";
    case Verdict::hf_flagged: return "#ff7f0e";
  }
  return "#000000";
}

}  // namespace

int SweepConfig::points_per_froude() const {
  if (hminus_points > 0) return hminus_points;
  return std::max<int>(1, total_points / std::max<std::size_t>(1, froude_grid.size()));
}

std::vector<double> SweepConfig::hminus_grid(double F) const {
  std::vector<double> g;
  if (!(F > 2)) return g;
  const double hh = h_hom(F);
  const int n = points_per_froude();
  for (int k = 0; k < n; ++k) g.push_back(hh + (1.0 - hh) * (k + 1) / (n + 1));
  return g;
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    const auto p = split(s, ':');
    if (p.size() != 3) throw Error(ErrorCode::config_parse_error, "grid: expected start:stop:count");
    const double a = to_double("grid", p[0]), b = to_double("grid", p[1]);
    const int n = to_count("grid", p[2]);
    for (int k = 0; k < n; ++k) out.push_back(n == 1 ? a : a + (b - a) * k / (n - 1));
    return out;
  }
  for (const auto& t : split(s, ',')) out.push_back(to_double("grid", t));
  return out;
}

void apply_setting(SweepConfig& c, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "froude") {
    c.froude_grid = parse_grid(v);
  } else if (key == "hminus_points") {
    c.hminus_points = to_count(key, v);
  } else if (key == "total_points") {
    c.total_points = to_count(key, v);
  } else if (key == "r_inner") {
    c.contour.r_inner = to_double(key, v);
  } else if (key == "r_outer") {
    c.contour.r_outer = to_double(key, v);
  } else if (key == "n_small_arc") {
    c.contour.n_small_arc = to_count(key, v);
  } else if (key == "n_segment") {
    c.contour.n_segment = to_count(key, v);
  } else if (key == "n_large_arc") {
    c.contour.n_large_arc = to_count(key, v);
  } else if (key == "xi_mesh") {
    c.xi_mesh = to_count(key, v, 2);
  } else if (key == "workers") {
    c.workers = to_count(key, v, 0);
  } else if (key == "output_dir" || key == "out") {
    c.output_dir = v;
  } else if (key == "formats" || key == "format") {
    c.formats.clear();
    for (const auto& f : split(v, ',')) {
      if (f != "csv" && f != "json" && f != "svg")
        throw Error(ErrorCode::config_parse_error, key + ": unknown format " + f);
      c.formats.insert(f);
    }
  } else if (key == "prefilter") {
    c.prefilter = to_bool(key, v);
  } else if (key == "timing") {
    c.timing_column = to_bool(key, v);
  } else if (key == "refine_midfreq") {
    c.refine_midfreq = to_bool(key, v);
  } else if (key == "tol") {
    c.rk_tol = to_double(key, v);
  } else if (key == "overlay") {
    c.overlay = v;
  } else {
    throw Error(ErrorCode::config_parse_error, "unknown key " + key);
  }
  if (!(c.contour.r_inner > 0 && c.contour.r_outer > c.contour.r_inner))
    throw Error(ErrorCode::config_parse_error, key + ": need 0 < r_inner < r_outer");
  if (!(c.rk_tol > 0)) throw Error(ErrorCode::config_parse_error, key + ": tol must be positive");
}

SweepConfig parse_config(std::istream& in, const std::string& name) {
  SweepConfig c;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::config_parse_error, name + ":" + std::to_string(n) + ": expected key = value");
    try {
      apply_setting(c, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const Error& e) {
      std::string msg = e.what();
      msg = msg.substr(msg.find(": ") + 2);
      throw Error(ErrorCode::config_parse_error, name + ":" + std::to_string(n) + ": " + msg);
    }
  }
  return c;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::config_parse_error, "cannot open " + path);
  return parse_config(f, path);
}

DiagramRow classify_row(const WaveParameters& p, const ClassifyOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const StabilityVerdict v = classify_stability(p, opt);
  const WaveQuantities q = quadratures(p, {}, opt.near_homoclinic);
  DiagramRow r;
  r.F = p.froude;
  r.hminus_over_hs = p.h_minus / p.h_sonic;
  r.hplus_over_hs = q.h_plus / p.h_sonic;
  r.x_over_hs = q.period / p.h_sonic;
  r.verdict = v.verdict;
  r.alpha = v.alpha;
  r.beta = v.beta;
  r.index = v.index;
  r.max_winding = v.max_winding;
  r.winding_computed = v.winding_computed;
  r.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<GridTransition> midfreq_transitions(const std::vector<DiagramRow>& rows) {
  std::vector<GridTransition> out;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const DiagramRow &a = rows[i], &b = rows[i + 1];
    if (a.F != b.F || a.verdict != Verdict::unstable_midfreq || b.verdict == Verdict::unstable_midfreq)
      continue;
    if (!out.empty() && out.back().F == a.F) continue;  // lowest transition only
    out.push_back({a.F, a.hminus_over_hs, b.hminus_over_hs});
  }
  return out;
}

std::string diagram_csv(const std::vector<DiagramRow>& rows, bool timing) {
  std::string s = "F,Hminus_over_Hs,Hplus_over_Hs,X_over_Hs,verdict,alpha,beta,index,max_winding";
  s += timing ? ",wall_time_ms\n" : "\n";
  for (const auto& r : rows) {
    s += num(r.F) + "," + num(r.hminus_over_hs) + "," + num(r.hplus_over_hs) + "," +
         num(r.x_over_hs) + "," + std::string(to_string(r.verdict)) + "," + num(r.alpha) + "," +
         num(r.beta) + "," + num(r.index) + "," + std::to_string(r.max_winding);
    s += timing ? "," + num(r.wall_time_ms) + "\n" : "\n";
  }
  return s;
}

namespace {
nlohmann::ordered_json row_object(const DiagramRow& r) {
  nlohmann::ordered_json j;
  j["F"] = jnum(r.F);
  j["Hminus_over_Hs"] = jnum(r.hminus_over_hs);
  j["Hplus_over_Hs"] = jnum(r.hplus_over_hs);
  j["X_over_Hs"] = jnum(r.x_over_hs);
  j["verdict"] = std::string(to_string(r.verdict));
  j["alpha"] = jnum(r.alpha);
  j["beta"] = jnum(r.beta);
  j["index"] = jnum(r.index);
  j["max_winding"] = r.max_winding;
  j["wall_time_ms"] = jnum(r.wall_time_ms);
  return j;
}
}  // namespace

std::string row_json(const DiagramRow& r) { return row_object(r).dump(); }

std::string diagram_json(const std::vector<DiagramRow>& rows) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (const auto& r : rows) a.push_back(row_object(r));
  return a.dump(1) + "\n";
}

std::vector<OverlayCurve> read_overlay(std::istream& in) {
  std::vector<OverlayCurve> out;
  std::map<std::string, std::size_t> index;
  std::string line, coordinate;
  int n = 0;
  bool header = false;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::schema_mismatch, "line " + std::to_string(n) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++n;
    line = trim(line);
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (!header) {
      if (f.size() != 3 || f[0] != "F" || f[2] != "label" || !kCoordinates.count(f[1]))
        fail("expected header F,<coordinate>,label with coordinate one of Hminus_over_Hs, "
             "Hplus_over_Hs, X_over_Hs, Hbar_over_Hs");
      coordinate = f[1];
      header = true;
      continue;
    }
    if (f.size() != 3) fail("expected 3 fields, got " + std::to_string(f.size()));
    double F, v;
    if (!parse_double(f[0], F)) fail("bad F value " + f[0]);
    if (!parse_double(f[1], v)) fail("bad " + coordinate + " value " + f[1]);
    if (f[2].empty()) fail("empty label");
    auto it = index.find(f[2]);
    if (it == index.end()) {
      it = index.emplace(f[2], out.size()).first;
      out.push_back({f[2], coordinate, {}});
    }
    out[it->second].points.emplace_back(F, v);
  }
  return out;
}

std::vector<OverlayCurve> overlay_external(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::schema_mismatch, "cannot open " + path);
  return read_overlay(f);
}

std::vector<OverlayCurve> inviscid_curves(const std::string& coordinate, double f0, double f1, int n,
                                          const std::vector<GridTransition>& midfreq, int workers) {
  if (!kCoordinates.count(coordinate))
    throw Error(ErrorCode::schema_mismatch, "unknown coordinate " + coordinate);
  f0 = std::max(f0, 2.0 + 1e-3);
  std::vector<double> Fs;
  for (int k = 0; k < n; ++k) Fs.push_back(n == 1 ? f0 : f0 + (f1 - f0) * k / (n - 1));
  const auto b = boundary_curves(Fs, {}, workers);
  OverlayCurve I{"boundary_I", coordinate, {}}, II{"boundary_II", coordinate, {}};
  OverlayCurve ex{"existence", coordinate, {}}, mid{"midfreq", coordinate, {}};
  for (const auto& p : b) {
    if (p.hm_I) I.points.emplace_back(p.F, coordinate_value(coordinate, p.F, *p.hm_I));
    if (p.hm_II) II.points.emplace_back(p.F, coordinate_value(coordinate, p.F, *p.hm_II));
    if (coordinate == "Hminus_over_Hs" || coordinate == "Hplus_over_Hs")
      ex.points.emplace_back(p.F, coordinate_value(coordinate, p.F, h_hom(p.F)));
  }
  for (const auto& t : midfreq)
    mid.points.emplace_back(t.F, coordinate_value(coordinate, t.F, 0.5 * (t.lo + t.hi)));
  std::vector<OverlayCurve> out{I, II};
  if (!ex.points.empty()) out.push_back(ex);
  if (!mid.points.empty()) out.push_back(mid);
  return out;
}

std::string overlay_csv(const std::vector<OverlayCurve>& curves) {
  std::string s = "source,label,coordinate,F,value\n";
  for (const auto& c : curves) {
    const bool internal = c.label == "boundary_I" || c.label == "boundary_II" ||
                          c.label == "existence" || c.label == "midfreq";
    for (const auto& [F, v] : c.points)
      s += std::string(internal ? "inviscid" : "external") + "," + c.label + "," + c.coordinate + "," +
           num(F) + "," + num(v) + "\n";
  }
  return s;
}

std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<SvgSeries>& series, bool log_y) {
  const double W = 720, H = 520, ml = 80, mr = 170, mt = 40, mb = 60;
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  auto ty = [&](double y) { return log_y ? std::log10(y) : y; };
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y) || (log_y && y <= 0)) continue;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, ty(y));
      y1 = std::max(y1, ty(y));
    }
  if (x0 > x1) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const double px = (x1 - x0) * 0.03, py = (y1 - y0) * 0.05;
  x0 -= px, x1 += px, y0 -= py, y1 += py;
  auto sx = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
  auto sy = [&](double y) { return H - mb - (ty(y) - y0) / (y1 - y0) * (H - mt - mb); };
  char buf[256];
  std::string s;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
                "font-family=\"sans-serif\" font-size=\"12\">\n",
                W, H);
  s += buf;
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n",
                ml, mt, W - ml - mr, H - mt - mb);
  s += buf;
  for (int k = 0; k <= 5; ++k) {
    const double xv = x0 + (x1 - x0) * k / 5, yv = y0 + (y1 - y0) * k / 5;
    const double X = ml + (W - ml - mr) * k / 5, Y = H - mb - (H - mt - mb) * k / 5;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%g\" x2=\"%.2f\" y2=\"%g\" stroke=\"black\"/>"
                  "<text x=\"%.2f\" y=\"%g\" text-anchor=\"middle\">%.4g</text>\n",
                  X, H - mb, X, H - mb + 5, X, H - mb + 20, xv);
    s += buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%g\" y1=\"%.2f\" x2=\"%g\" y2=\"%.2f\" stroke=\"black\"/>"
                  "<text x=\"%g\" y=\"%.2f\" text-anchor=\"end\">%.4g</text>\n",
                  ml - 5, Y, ml, Y, ml - 8, Y + 4, log_y ? std::pow(10.0, yv) : yv);
    s += buf;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">", W / 2);
  s += buf + title + "</text>\n";
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">", (ml + W - mr) / 2, H - 15);
  s += buf + xlabel + "</text>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"18\" y=\"%g\" text-anchor=\"middle\" transform=\"rotate(-90 18 %g)\">",
                (mt + H - mb) / 2, (mt + H - mb) / 2);
  s += buf + ylabel + "</text>\n";
  int legend = 0;
  for (const auto& ser : series) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [x, y] : ser.points)
      if (std::isfinite(x) && std::isfinite(y) && !(log_y && y <= 0)) pts.emplace_back(sx(x), sy(y));
    if (ser.line) {
      s += "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" + ser.color + "\" points=\"";
      for (const auto& [x, y] : pts) {
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", x, y);
        s += buf;
      }
      s += "\"/>\n";
    } else {
      s += "<g fill=\"" + ser.color + "\">";
      for (const auto& [x, y] : pts) {
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"1.6\"/>", x, y);
        s += buf;
      }
      s += "</g>\n";
    }
    const double ly = mt + 10 + 18 * legend++;
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%g\" y=\"%g\" width=\"12\" height=\"4\" fill=\"%s\"/>"
                  "<text x=\"%g\" y=\"%g\">",
                  W - mr + 12, ly - 4, ser.color.c_str(), W - mr + 30, ly + 1);
    s += buf + ser.label + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

DiagramResult run_diagram(const SweepConfig& c) {
  namespace fs = std::filesystem;
  DiagramResult res;
  const int workers = c.workers > 0 ? c.workers : default_workers();
  ClassifyOptions opt;
  opt.contour = c.contour;
  opt.xi_mesh = c.xi_mesh;
  opt.prefilter = c.prefilter;
  opt.workers = 1;
  opt.solve.rk.rel_tol = c.rk_tol;
  opt.solve.rk.abs_tol = 1e-2 * c.rk_tol;

  std::vector<double> Fs = c.froude_grid;
  std::sort(Fs.begin(), Fs.end());
  std::vector<WaveParameters> tasks;
  for (double F : Fs) {
    if (!(F > 2)) {
      res.skipped.push_back({F, std::nan(""), std::string(to_string(Validity::froude_too_small))});
      continue;
    }
    for (double hm : c.hminus_grid(F)) {
      const WaveParameters p{F, 1.0, hm};
      const ValidityReport v = validate_params(p, opt.near_homoclinic);
      if (!v.valid)
        res.skipped.push_back({F, hm, std::string(to_string(v.reason))});
      else
        tasks.push_back(p);
    }
  }
  std::vector<std::optional<DiagramRow>> rows(tasks.size());
  std::vector<std::string> errors(tasks.size());
  parallel_for(tasks.size(), workers, [&](std::size_t i) {
    try {
      rows[i] = classify_row(tasks[i], opt);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (rows[i])
      res.rows.push_back(*rows[i]);
    else
      res.skipped.push_back({tasks[i].froude, tasks[i].h_minus, errors[i]});
  }
  std::sort(res.rows.begin(), res.rows.end(), [](const DiagramRow& a, const DiagramRow& b) {
    return std::tie(a.F, a.hminus_over_hs) < std::tie(b.F, b.hminus_over_hs);
  });
  std::sort(res.skipped.begin(), res.skipped.end(), [](const SkippedPoint& a, const SkippedPoint& b) {
    return std::make_pair(a.F, a.hminus) < std::make_pair(b.F, b.hminus);
  });

  std::vector<double> valid_F;
  for (double F : Fs)
    if (F > 2) valid_F.push_back(F);
  res.boundaries = boundary_curves(valid_F, {}, workers);
  const auto trans = midfreq_transitions(res.rows);
  if (c.refine_midfreq) {
    res.midfreq.resize(trans.size());
    MidFreqOptions mo;
    mo.tol = 1e-6;
    mo.classify = opt;
    parallel_for(trans.size(), workers, [&](std::size_t i) {
      res.midfreq[i] = refine_midfreq_boundary(trans[i].F, trans[i].lo, trans[i].hi, mo);
    });
  }

  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  if (c.formats.count("csv")) {
    write_file(dir / "diagram.csv", diagram_csv(res.rows, c.timing_column), res.files);
    std::string b1 = "F,Hminus_over_Hs,Hplus_over_Hs\n", b2 = b1, ex = b1;
    for (const auto& p : res.boundaries) {
      if (p.hm_I) b1 += num(p.F) + "," + num(*p.hm_I) + "," + num(z_plus(*p.hm_I)) + "\n";
      if (p.hm_II) b2 += num(p.F) + "," + num(*p.hm_II) + "," + num(z_plus(*p.hm_II)) + "\n";
      const double hh = h_hom(p.F);
      ex += num(p.F) + "," + num(hh) + "," + num(z_plus(hh)) + "\n";
    }
    write_file(dir / "boundary_I.csv", b1, res.files);
    write_file(dir / "boundary_II.csv", b2, res.files);
    write_file(dir / "existence.csv", ex, res.files);
    std::string mf = "F,lo,hi,Hminus_over_Hs,source\n";
    if (c.refine_midfreq)
      for (const auto& m : res.midfreq)
        mf += num(m.F) + "," + num(m.lo) + "," + num(m.hi) + "," + num(m.hm) + ",bisection\n";
    else
      for (const auto& t : trans)
        mf += num(t.F) + "," + num(t.lo) + "," + num(t.hi) + "," + num(0.5 * (t.lo + t.hi)) + ",grid\n";
    write_file(dir / "boundary_midfreq.csv", mf, res.files);
  }
  if (!res.skipped.empty()) {
    std::string sk = "F,Hminus_over_Hs,reason\n";
    for (const auto& p : res.skipped) {
      std::string reason = p.reason;
      std::replace(reason.begin(), reason.end(), ',', ';');
      std::replace(reason.begin(), reason.end(), '\n', ' ');
      sk += num(p.F) + "," + num(p.hminus) + "," + reason + "\n";
    }
    write_file(dir / "skipped.csv", sk, res.files);
  }
  if (c.formats.count("json")) write_file(dir / "diagram.json", diagram_json(res.rows), res.files);

  std::vector<GridTransition> mid = trans;
  if (c.refine_midfreq) {
    mid.clear();
    for (const auto& m : res.midfreq) mid.push_back({m.F, m.lo, m.hi});
  }
  if (c.formats.count("svg")) {
    struct Panel {
      const char* file;
      const char* title;
      const char* ylabel;
      int field;
      bool log_y;
    };
    const Panel panels[] = {
        {"panel_a.svg", "(a) H-/Hs vs F", "H-/Hs", 0, false},
        {"panel_b.svg", "(b) H+/Hs vs F", "H+/Hs", 1, false},
        {"panel_c.svg", "(c) X/Hs vs F", "X/Hs", 2, false},
        {"panel_d.svg", "(d) H-/Hs - H_hom vs F, F <= 3.2", "H-/Hs - H_hom", 3, true},
    };
    auto field = [](int k, double F, double hm, double hp, double X) {
      switch (k) {
        case 0: return hm;
        case 1: return hp;
        case 2: return X;
        default: return hm - h_hom(F);
      }
    };
    for (const auto& pn : panels) {
      std::map<Verdict, SvgSeries> scatter;
      for (const auto& r : res.rows) {
        if (pn.field == 3 && r.F > 3.2) continue;
        auto& s = scatter[r.verdict];
        s.label = std::string(to_string(r.verdict));
        s.color = verdict_color(r.verdict);
        s.line = false;
        s.points.emplace_back(r.F, field(pn.field, r.F, r.hminus_over_hs, r.hplus_over_hs, r.x_over_hs));
      }
      std::vector<SvgSeries> series;
      for (auto& [v, s] : scatter) series.push_back(std::move(s));
      auto curve = [&](const std::string& label, const std::string& color,
                       const std::vector<std::pair<double, double>>& fh) {
        SvgSeries s{label, color, true, {}};
        for (const auto& [F, hm] : fh) {
          if (pn.field == 3 && F > 3.2) continue;
          double v;
          if (pn.field == 2)
            v = coordinate_value("X_over_Hs", F, hm);
          else
            v = field(pn.field, F, hm, z_plus(hm), 0);
          s.points.emplace_back(F, v);
        }
        if (!s.points.empty()) series.push_back(std::move(s));
      };
      std::vector<std::pair<double, double>> bI, bII, ex, mf;
      for (const auto& p : res.boundaries) {
        if (p.hm_I) bI.emplace_back(p.F, *p.hm_I);
        if (p.hm_II) bII.emplace_back(p.F, *p.hm_II);
        if (pn.field <= 1) ex.emplace_back(p.F, h_hom(p.F));
      }
      for (const auto& t : mid) mf.emplace_back(t.F, 0.5 * (t.lo + t.hi));
      curve("boundary I", "#9467bd", bI);
      curve("boundary II", "#8c564b", bII);
      curve("existence", "#000000", ex);
      curve("mid-frequency", "#17becf", mf);
      write_file(dir / pn.file, svg_plot(pn.title, "F", pn.ylabel, series, pn.log_y), res.files);
    }
  }
  if (!c.overlay.empty()) {
    const auto ext = overlay_external(c.overlay);
    const std::string coord = ext.empty() ? "Hminus_over_Hs" : ext.front().coordinate;
    std::vector<OverlayCurve> all;
    if (!valid_F.empty())
      all = inviscid_curves(coord, valid_F.front(), valid_F.back(), static_cast<int>(valid_F.size()),
                            mid, workers);
    all.insert(all.end(), ext.begin(), ext.end());
    if (c.formats.count("csv")) write_file(dir / "overlay.csv", overlay_csv(all), res.files);
    if (c.formats.count("svg")) {
      static const char* palette[] = {"#9467bd", "#8c564b", "#000000", "#17becf",
                                      "#2ca02c", "#d62728", "#ff7f0e", "#1f77b4"};
      std::vector<SvgSeries> series;
      for (std::size_t i = 0; i < all.size(); ++i)
        series.push_back({all[i].label, palette[i % 8], true, all[i].points});
      write_file(dir / "overlay.svg", svg_plot("overlay", "F", coord, series), res.files);
    }
  }
  return res;
}

}  // namespace rollwave
