#include "hetnet/figures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

namespace hetnet {

namespace {

struct FigureInfo {
  FigureId id;
  std::string_view name;
  std::string_view stem;
  std::string_view title;
};

constexpr FigureInfo kFigures[] = {
    {FigureId::kConnectionPerLayer, "ConnectionPerLayer", "connection_per_layer",
     "Per-layer connection probability"},
    {FigureId::kCoveragePerLayer, "CoveragePerLayer", "coverage_per_layer",
     "Per-layer coverage probability"},
    {FigureId::kEnergyPerLayer, "EnergyPerLayer", "energy_per_layer", "Per-layer energy consumption"},
    {FigureId::kOverallConnection, "OverallConnection", "overall_connection",
     "Overall connection probability"},
    {FigureId::kOverallCoverage, "OverallCoverage", "overall_coverage", "Overall coverage probability"},
    {FigureId::kOverallEnergy, "OverallEnergy", "overall_energy", "Overall energy consumption"},
};

const FigureInfo& info(FigureId id) {
  for (const auto& f : kFigures) {
    if (f.id == id) return f;
  }
  throw std::logic_error("unknown figure");
}

SweepSpec base_spec(const FigureOptions& o, SweepVariable variable, std::vector<double> values,
                    MetricGroup group) {
  SweepSpec spec;
  spec.variable = variable;
  spec.values = std::move(values);
  spec.base = o.base;
  spec.trials = o.trials;
  spec.seed = o.seed;
  spec.engines = o.engines;
  spec.groups = {group};
  spec.analytic_samples = o.analytic_samples;
  return spec;
}

std::string format_number(double v) { return fmt::format("{:.4g}", v); }

}  // namespace

std::string_view to_string(FigureId id) { return info(id).name; }

std::optional<FigureId> parse_figure_id(std::string_view name) {
  for (const auto& f : kFigures) {
    if (f.name == name || f.stem == name) return f.id;
  }
  return std::nullopt;
}

const std::vector<FigureId>& all_figures() {
  static const std::vector<FigureId> ids = [] {
    std::vector<FigureId> out;
    for (const auto& f : kFigures) out.push_back(f.id);
    return out;
  }();
  return ids;
}

std::vector<double> default_density_ratios() {
  std::vector<double> out{1.0};
  for (int r = 5; r <= 100; r += 5) out.push_back(r);
  return out;
}

std::vector<double> default_thetas() { return {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0}; }

std::vector<double> default_biases() { return {2.0, 4.0, 8.0}; }

ResultTable figure_table(FigureId id, const FigureOptions& o) {
  switch (id) {
    case FigureId::kConnectionPerLayer: {
      ResultTable merged;
      std::string hashes;
      for (double beta : o.biases) {
        auto spec = base_spec(o, SweepVariable::kDensityRatio, o.density_ratios, MetricGroup::kConnection);
        spec.base = with_uniform_bias(spec.base, beta);
        auto table = run_sweep(spec);
        for (auto& row : table.rows) {
          if (row.metric != kFailedMetric) row.metric += fmt::format("@beta={}", beta);
          merged.rows.push_back(std::move(row));
        }
        hashes += (hashes.empty() ? "" : "+") + table.metadata.config_hash;
        merged.metadata.tool_version = table.metadata.tool_version;
        merged.metadata.timestamp = table.metadata.timestamp;
        merged.metadata.layer_count = table.metadata.layer_count;
        for (auto& f : table.metadata.failures) merged.metadata.failures.push_back(std::move(f));
      }
      merged.metadata.config_hash = hashes;
      merged.normalize();
      return merged;
    }
    case FigureId::kCoveragePerLayer: {
      auto spec = base_spec(o, SweepVariable::kTheta, o.thetas, MetricGroup::kCoverage);
      spec.base = with_density_ratio(spec.base, kCoveragePerLayerRatio);
      return run_sweep(spec);
    }
    case FigureId::kOverallCoverage: {
      auto spec = base_spec(o, SweepVariable::kTheta, o.thetas, MetricGroup::kCoverage);
      spec.base = with_density_ratio(spec.base, kOverallCoverageRatio);
      return run_sweep(spec);
    }
    case FigureId::kEnergyPerLayer:
    case FigureId::kOverallEnergy:
      return run_sweep(base_spec(o, SweepVariable::kDensityRatio, o.density_ratios, MetricGroup::kEnergy));
    case FigureId::kOverallConnection:
      return run_sweep(
          base_spec(o, SweepVariable::kDensityRatio, o.density_ratios, MetricGroup::kConnection));
  }
  throw std::logic_error("unknown figure");
}

namespace {

std::vector<PlotSeries> plot_series(FigureId id, const ResultTable& table, int layers) {
  std::vector<std::pair<std::string, std::string>> wanted;  // metric, engine
  auto both = [&](const std::string& m) {
    wanted.emplace_back(m, "mc");
    wanted.emplace_back(m, "analytic");
  };
  switch (id) {
    case FigureId::kConnectionPerLayer:
      for (const auto& r : table.rows) {
        if (r.engine == "mc" && r.metric.starts_with("win_layer_")) wanted.emplace_back(r.metric, "mc");
      }
      break;
    case FigureId::kCoveragePerLayer:
      for (int i = 1; i <= layers; ++i) wanted.emplace_back(fmt::format("coverage_layer_{}", i), "mc");
      break;
    case FigureId::kEnergyPerLayer:
      for (int i = 1; i <= layers; ++i) wanted.emplace_back(fmt::format("energy_layer_{}", i), "mc");
      break;
    case FigureId::kOverallConnection:
      both("p_mbs");
      both("p_sbs");
      break;
    case FigureId::kOverallCoverage:
      wanted.emplace_back("coverage_mbs", "mc");
      wanted.emplace_back("coverage_sbs", "mc");
      wanted.emplace_back("coverage_total", "mc");
      break;
    case FigureId::kOverallEnergy:
      both("energy_mbs");
      both("energy_sbs");
      break;
  }
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

  std::vector<PlotSeries> out;
  for (const auto& [metric, engine] : wanted) {
    PlotSeries s{fmt::format("{} ({})", metric, engine), {}, {}};
    for (const auto& r : table.series(metric, engine)) {
      s.x.push_back(r.sweep_value);
      s.y.push_back(r.estimate);
    }
    if (!s.x.empty()) out.push_back(std::move(s));
  }
  return out;
}

std::string_view y_label(FigureId id) {
  switch (id) {
    case FigureId::kConnectionPerLayer:
    case FigureId::kOverallConnection: return "connection probability";
    case FigureId::kCoveragePerLayer:
    case FigureId::kOverallCoverage: return "coverage probability";
    case FigureId::kEnergyPerLayer:
    case FigureId::kOverallEnergy: return "power (W)";
  }
  return "";
}

std::string_view x_label(FigureId id) {
  return id == FigureId::kCoveragePerLayer || id == FigureId::kOverallCoverage ? "SINR threshold"
                                                                                : "lambda_s / lambda_m";
}

}  // namespace

std::string render_svg(std::string_view title, std::string_view x_label, std::string_view y_label,
                       const std::vector<PlotSeries>& series) {
  constexpr double kWidth = 760, kHeight = 480;
  constexpr double kLeft = 70, kRight = 230, kTop = 40, kBottom = 60;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series) {
    for (double x : s.x) x_lo = std::min(x_lo, x), x_hi = std::max(x_hi, x);
    for (double y : s.y) y_lo = std::min(y_lo, y), y_hi = std::max(y_hi, y);
  }
  if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  if (x_hi == x_lo) x_hi = x_lo + 1;
  y_lo = std::min(y_lo, 0.0);
  if (y_hi == y_lo) y_hi = y_lo + 1;
  y_hi += 0.05 * (y_hi - y_lo);

  auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto sy = [&](double y) { return kTop + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h; };

  static constexpr const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">{3}</text>\n",
      kWidth, kHeight, kLeft + plot_w / 2, title);
  svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
                     kLeft, kTop, plot_w, plot_h);
  for (int t = 0; t <= 5; ++t) {
    const double xv = x_lo + (x_hi - x_lo) * t / 5.0;
    const double yv = y_lo + (y_hi - y_lo) * t / 5.0;
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", sx(xv),
                       kTop + plot_h + 16, format_number(xv));
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n", kLeft - 6,
                       sy(yv) + 4, format_number(yv));
    svg += fmt::format("<line x1=\"{0:.1f}\" x2=\"{1:.1f}\" y1=\"{2:.1f}\" y2=\"{2:.1f}\" stroke=\"#ddd\"/>\n",
                       kLeft, kLeft + plot_w, sy(yv));
  }
  svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", kLeft + plot_w / 2,
                     kHeight - 18, x_label);
  svg += fmt::format(
      "<text x=\"16\" y=\"{0:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0:.1f})\">{1}</text>\n",
      kTop + plot_h / 2, y_label);

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kColors[i % std::size(kColors)];
    std::string points;
    for (std::size_t j = 0; j < s.x.size(); ++j) points += fmt::format("{:.2f},{:.2f} ", sx(s.x[j]), sy(s.y[j]));
    svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color,
                       points);
    const double ly = kTop + 10 + 14.0 * static_cast<double>(i);
    svg += fmt::format("<line x1=\"{0}\" x2=\"{1}\" y1=\"{2}\" y2=\"{2}\" stroke=\"{3}\" stroke-width=\"2\"/>\n",
                       kLeft + plot_w + 10, kLeft + plot_w + 30, ly, color);
    svg += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", kLeft + plot_w + 34, ly + 4, s.label);
  }
  svg += "</svg>\n";
  return svg;
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError(fmt::format("failed writing {}", path.string()));
}

FigureFiles reproduce_figure(FigureId id, const std::filesystem::path& out_dir, const FigureOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw IoError(fmt::format("cannot create output directory {}", out_dir.string()));
  }
  const auto& fi = info(id);
  const auto table = figure_table(id, options);

  FigureFiles files{out_dir / fmt::format("{}.csv", fi.stem), out_dir / fmt::format("{}.svg", fi.stem),
                    out_dir / fmt::format("{}.meta.json", fi.stem)};
  write_file(files.csv, emit_csv(table));
  write_file(files.svg, render_svg(fi.title, x_label(id), y_label(id),
                                   plot_series(id, table, options.base.layer_count())));
  write_file(files.metadata, emit_metadata_json(table));
  return files;
}

}  // namespace hetnet
