#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rollwave/spectrum.hpp"

namespace rollwave {

struct SweepConfig {
  std::vector<double> froude_grid;
  int hminus_points = 0;     // per F; 0 means total_points / |froude_grid|
  int total_points = 6000;
  ContourSpec contour{};
  int xi_mesh = 1000;
  int workers = 0;           // 0 means available parallelism
  std::string output_dir = ".";
  std::set<std::string> formats{"csv"};
  bool prefilter = true;     // skip winding sweeps for waves failing the low-frequency tests
  bool timing_column = false;
  bool refine_midfreq = false;
  double rk_tol = 1e-10;
  std::string overlay;       // optional external boundary CSV

  int points_per_froude() const;
  std::vector<double> hminus_grid(double F) const;
};

// key = value lines, '#' comments.  Unknown keys and bad values throw
// config_parse_error naming the line.
SweepConfig parse_config(std::istream& in, const std::string& name = "config");
SweepConfig load_config(const std::string& path);
void apply_setting(SweepConfig& c, const std::string& key, const std::string& value);
// "a,b,c" or "start:stop:count".
std::vector<double> parse_grid(const std::string& s);

struct DiagramRow {
  double F = 0;
  double hminus_over_hs = 0;
  double hplus_over_hs = 0;
  double x_over_hs = 0;
  Verdict verdict = Verdict::stable;
  double alpha = 0, beta = 0, index = 0;
  int max_winding = 0;
  double wall_time_ms = 0;
  bool winding_computed = false;
};

struct SkippedPoint {
  double F = 0, hminus = 0;
  std::string reason;
};

struct DiagramResult {
  std::vector<DiagramRow> rows;  // sorted by (F, H_-)
  std::vector<SkippedPoint> skipped;
  std::vector<BoundaryPoint> boundaries;
  std::vector<MidFreqBoundary> midfreq;
  std::vector<std::string> files;
  int exit_code() const { return skipped.empty() ? 0 : 2; }
};

DiagramRow classify_row(const WaveParameters& p, const ClassifyOptions& opt);
DiagramResult run_diagram(const SweepConfig& c);

// Transition between unstable_midfreq and the first non-midfreq point above it,
// one entry per F where it exists.
struct GridTransition {
  double F = 0, lo = 0, hi = 0;
};
std::vector<GridTransition> midfreq_transitions(const std::vector<DiagramRow>& rows);

std::string diagram_csv(const std::vector<DiagramRow>& rows, bool timing = false);
std::string diagram_json(const std::vector<DiagramRow>& rows);
std::string row_json(const DiagramRow& r);

struct OverlayCurve {
  std::string label;
  std::string coordinate;  // Hminus_over_Hs, Hplus_over_Hs, X_over_Hs or Hbar_over_Hs
  std::vector<std::pair<double, double>> points;  // (F, value)
};
// Header F,<coordinate>,label.  Rows are grouped into curves by label.
std::vector<OverlayCurve> read_overlay(std::istream& in);
std::vector<OverlayCurve> overlay_external(const std::string& path);

// Inviscid boundaries in a given coordinate for F in [f0, f1].
std::vector<OverlayCurve> inviscid_curves(const std::string& coordinate, double f0, double f1, int n,
                                          const std::vector<GridTransition>& midfreq = {},
                                          int workers = 1);
std::string overlay_csv(const std::vector<OverlayCurve>& curves);

struct SvgSeries {
  std::string label;
  std::string color;
  bool line = true;
  std::vector<std::pair<double, double>> points;
};
std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<SvgSeries>& series, bool log_y = false);

}  // namespace rollwave
