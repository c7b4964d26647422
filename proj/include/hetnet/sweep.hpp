#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hetnet/analytic.hpp"
#include "hetnet/params.hpp"

namespace hetnet {

enum class SweepVariable { kDensityRatio, kBias, kTheta };
enum class Engine { kMonteCarlo, kAnalytic };
enum class MetricGroup { kConnection, kCoverage, kEnergy };

std::string_view to_string(SweepVariable v);
std::string_view to_string(Engine e);
std::optional<SweepVariable> parse_sweep_variable(std::string_view name);
std::optional<Engine> parse_engine(std::string_view name);

struct SweepSpec {
  SweepVariable variable = SweepVariable::kDensityRatio;
  std::vector<double> values;
  SystemParams base;
  std::int64_t trials = 20'000;
  std::uint64_t seed = 1;
  std::vector<Engine> engines = {Engine::kMonteCarlo, Engine::kAnalytic};
  std::vector<MetricGroup> groups = {MetricGroup::kConnection, MetricGroup::kCoverage,
                                     MetricGroup::kEnergy};
  std::int64_t analytic_samples = kDefaultImportanceSamples;
  int workers = 0;  // 0 selects default_workers()
};

class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws SpecError unless values are non-empty and strictly increasing,
/// trials >= 100 and at least one engine and metric group is requested.
void validate_spec(const SweepSpec& spec);

/// The parameters of one sweep point.
SystemParams point_params(const SweepSpec& spec, double value);

struct ResultRow {
  std::string sweep_variable;
  double sweep_value = 0.0;
  std::string metric;
  std::string engine;
  double estimate = 0.0;
  double error = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;

  bool operator==(const ResultRow&) const = default;
};

struct PointFailure {
  double sweep_value = 0.0;
  std::string engine;
  std::string message;

  bool operator==(const PointFailure&) const = default;
};

struct TableMetadata {
  std::string config_hash;
  std::string tool_version;
  std::string timestamp;
  int layer_count = 0;
  std::vector<PointFailure> failures;
};

// A failed (point, engine) pair appears as one row with this metric name and
// zero estimate, error and trials; the message is kept in the metadata.
inline constexpr std::string_view kFailedMetric = "failed";

struct ResultTable {
  std::vector<ResultRow> rows;
  TableMetadata metadata;

  /// Sorts rows by (sweep_value, metric, engine).
  void normalize();
  /// Rows of one metric and engine, in table order.
  std::vector<ResultRow> series(std::string_view metric, std::string_view engine) const;
  const ResultRow* find(double sweep_value, std::string_view metric, std::string_view engine) const;
};

ResultTable run_sweep(const SweepSpec& spec);

inline constexpr std::string_view kCsvHeader =
    "sweep_variable,sweep_value,metric,engine,estimate,error,trials,seed";

std::string emit_csv(const ResultTable& table);
/// Parses rows only; metadata lives in the sidecar JSON.
ResultTable parse_csv(std::string_view text);

std::string emit_metadata_json(const ResultTable& table);

/// FNV-1a over the serialized configuration and sweep description.
std::string config_hash(const SweepSpec& spec);

enum class DiscrepancyCategory {
  kCrossCheck,        // both engines estimate the same quantity
  kIndependenceGap,   // product-form vs joint P_MBS; nonzero is expected
  kModelDifference,   // estimands differ when there is more than one layer
};

std::string_view to_string(DiscrepancyCategory c);

struct Discrepancy {
  double sweep_value = 0.0;
  std::string metric;
  DiscrepancyCategory category = DiscrepancyCategory::kCrossCheck;
  double monte_carlo = 0.0;
  double analytic = 0.0;
  double abs_diff = 0.0;
  double combined_error = 0.0;
  bool flagged = false;  // cross-checks only: abs_diff > 3 combined_error
};

struct DiscrepancyReport {
  std::vector<Discrepancy> entries;

  std::int64_t flagged_count() const;
};

DiscrepancyReport compare_engines(const ResultTable& table);

}  // namespace hetnet
