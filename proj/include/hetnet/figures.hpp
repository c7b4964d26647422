#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hetnet/sweep.hpp"

namespace hetnet {

enum class FigureId {
  kConnectionPerLayer,
  kCoveragePerLayer,
  kEnergyPerLayer,
  kOverallConnection,
  kOverallCoverage,
  kOverallEnergy,
};

std::string_view to_string(FigureId id);
/// Accepts the enum-style name ("OverallConnection") or the file stem
/// ("overall_connection").
std::optional<FigureId> parse_figure_id(std::string_view name);
const std::vector<FigureId>& all_figures();

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 1, 5, 10, ..., 100.
std::vector<double> default_density_ratios();
std::vector<double> default_thetas();
std::vector<double> default_biases();

inline constexpr double kCoveragePerLayerRatio = 50.0;
inline constexpr double kOverallCoverageRatio = 1.0;

struct FigureOptions {
  SystemParams base = default_scenario();
  std::int64_t trials = 20'000;
  std::uint64_t seed = 1;
  std::int64_t analytic_samples = 20'000;
  std::vector<Engine> engines = {Engine::kMonteCarlo, Engine::kAnalytic};
  std::vector<double> density_ratios = default_density_ratios();
  std::vector<double> thetas = default_thetas();
  std::vector<double> biases = default_biases();
};

/// The sweep behind a figure. ConnectionPerLayer runs one sweep per bias and
/// tags its metrics with "@beta=<b>".
ResultTable figure_table(FigureId id, const FigureOptions& options = {});

struct FigureFiles {
  std::filesystem::path csv;
  std::filesystem::path svg;
  std::filesystem::path metadata;
};

/// Writes <stem>.csv, <stem>.svg and <stem>.meta.json into out_dir.
/// Throws IoError when out_dir cannot be created or a file cannot be written.
FigureFiles reproduce_figure(FigureId id, const std::filesystem::path& out_dir,
                             const FigureOptions& options = {});

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal standalone SVG line chart.
std::string render_svg(std::string_view title, std::string_view x_label, std::string_view y_label,
                       const std::vector<PlotSeries>& series);

/// Writes text to path, throwing IoError on failure.
void write_file(const std::filesystem::path& path, std::string_view text);

}  // namespace hetnet
