#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "hetnet/analytic.hpp"
#include "hetnet/sweep.hpp"

namespace hetnet {
namespace {

SweepSpec small_spec(SweepVariable var, std::vector<double> values, int layers = 3) {
  SweepSpec s;
  s.variable = var;
  s.values = std::move(values);
  s.base = with_window_rule(with_layer_count(default_scenario(), layers));
  s.trials = 300;
  s.analytic_samples = 500;
  s.seed = 11;
  return s;
}

std::set<std::string> metrics_of(const ResultTable& t, double x, std::string_view engine) {
  std::set<std::string> m;
  for (const auto& r : t.rows) {
    if (r.sweep_value == x && r.engine == engine) m.insert(r.metric);
  }
  return m;
}

TEST(Sweep, DensityCardinality) {
  auto spec = small_spec(SweepVariable::kDensityRatio, {1, 25, 50, 100});
  spec.groups = {MetricGroup::kConnection, MetricGroup::kEnergy};
  const auto t = run_sweep(spec);
  const auto metrics = metrics_of(t, 1, "mc");
  ASSERT_FALSE(metrics.empty());
  EXPECT_EQ(t.rows.size(), 4 * metrics.size() * 2);
  for (double x : spec.values) {
    EXPECT_EQ(metrics_of(t, x, "mc"), metrics);
    EXPECT_EQ(metrics_of(t, x, "analytic"), metrics);
  }
  std::set<std::tuple<double, std::string, std::string>> keys;
  for (const auto& r : t.rows) {
    EXPECT_TRUE(keys.insert({r.sweep_value, r.metric, r.engine}).second);
    EXPECT_EQ(r.seed, spec.seed);
  }
  EXPECT_TRUE(t.metadata.failures.empty());
}

TEST(Sweep, ThetaCoverageNonIncreasing) {
  auto spec = small_spec(SweepVariable::kTheta, {0.1, 1, 5, 10});
  spec.groups = {MetricGroup::kCoverage};
  spec.trials = 2000;
  const auto t = run_sweep(spec);
  for (const auto& [metric, engine] : {std::pair{"coverage_total", "mc"},
                                       std::pair{"coverage_total_noise_only_mbs", "mc"},
                                       std::pair{"coverage_total_noise_only_mbs", "analytic"}}) {
    const auto s = t.series(metric, engine);
    ASSERT_EQ(s.size(), 4u) << engine;
    for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LE(s[i].estimate, s[i - 1].estimate) << engine;
  }
}

TEST(Sweep, DeterministicExceptTimestamp) {
  auto spec = small_spec(SweepVariable::kBias, {2, 4});
  auto a = run_sweep(spec);
  auto b = run_sweep(spec);
  EXPECT_EQ(emit_csv(a), emit_csv(b));
  b.metadata.timestamp = a.metadata.timestamp;
  EXPECT_EQ(emit_metadata_json(a), emit_metadata_json(b));
  spec.workers = 3;
  EXPECT_EQ(emit_csv(run_sweep(spec)), emit_csv(a));
}

TEST(Sweep, CsvRoundTrip) {
  const auto t = run_sweep(small_spec(SweepVariable::kDensityRatio, {2, 7}));
  const auto text = emit_csv(t);
  EXPECT_EQ(text.substr(0, text.find('\n')), kCsvHeader);
  EXPECT_EQ(parse_csv(text).rows, t.rows);
}

TEST(Sweep, CsvRoundTripAwkwardDoubles) {
  ResultTable t;
  t.rows.push_back({"theta", 0.1, "coverage_total", "mc", 1.0 / 3.0, 5e-324, 7, 18446744073709551615ULL});
  t.rows.push_back({"theta", 1e300, "p_mbs", "analytic", -0.0, 0.30000000000000004, 0, 0});
  EXPECT_EQ(parse_csv(emit_csv(t)).rows, t.rows);
}

TEST(Sweep, ParseCsvRejectsBadHeader) {
  EXPECT_ANY_THROW(parse_csv("a,b,c\n"));
}

TEST(Sweep, EngineUnionEqualsSeparateRuns) {
  auto both = small_spec(SweepVariable::kDensityRatio, {3, 9});
  auto mc = both, an = both;
  mc.engines = {Engine::kMonteCarlo};
  an.engines = {Engine::kAnalytic};
  auto merged = run_sweep(mc);
  const auto an_rows = run_sweep(an).rows;
  merged.rows.insert(merged.rows.end(), an_rows.begin(), an_rows.end());
  merged.normalize();
  EXPECT_EQ(merged.rows, run_sweep(both).rows);
}

TEST(Sweep, InvalidPointMarkedFailed) {
  const auto t = run_sweep(small_spec(SweepVariable::kBias, {0.5, 2}));
  ASSERT_EQ(t.metadata.failures.size(), 2u);
  for (const char* engine : {"mc", "analytic"}) {
    const auto* row = t.find(0.5, kFailedMetric, engine);
    ASSERT_NE(row, nullptr) << engine;
    EXPECT_EQ(row->estimate, 0.0);
    EXPECT_NE(t.find(2, "p_mbs", engine), nullptr);
  }
  EXPECT_EQ(metrics_of(t, 0.5, "mc").size(), 1u);
}

TEST(Sweep, SpecValidation) {
  auto s = small_spec(SweepVariable::kTheta, {1, 2});
  s.values = {};
  EXPECT_THROW(validate_spec(s), SpecError);
  s.values = {2, 1};
  EXPECT_THROW(validate_spec(s), SpecError);
  s.values = {1, 1};
  EXPECT_THROW(validate_spec(s), SpecError);
  s.values = {1, 2};
  s.trials = 99;
  EXPECT_THROW(validate_spec(s), SpecError);
  s.trials = 100;
  EXPECT_NO_THROW(validate_spec(s));
  s.engines.clear();
  EXPECT_THROW(validate_spec(s), SpecError);
}

TEST(Sweep, ConfigHashTracksInputs) {
  auto a = small_spec(SweepVariable::kTheta, {1, 2});
  auto b = a;
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  b.base.noise_power_watts *= 2;
  EXPECT_NE(config_hash(a), config_hash(b));
  b = a;
  b.seed += 1;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(CompareEngines, FlagsFabricatedMismatch) {
  ResultTable t;
  t.metadata.layer_count = 1;
  t.rows.push_back({"theta", 1, "coverage_total", "mc", 0.5, 0.01, 100, 1});
  t.rows.push_back({"theta", 1, "coverage_total", "analytic", 0.9, 0.01, 100, 1});
  t.rows.push_back({"theta", 2, "coverage_total", "mc", 0.5, 0.01, 100, 1});
  t.rows.push_back({"theta", 2, "coverage_total", "analytic", 0.51, 0.01, 100, 1});
  const auto r = compare_engines(t);
  ASSERT_EQ(r.entries.size(), 2u);
  EXPECT_EQ(r.flagged_count(), 1);
  EXPECT_TRUE(r.entries[0].flagged);
  EXPECT_NEAR(r.entries[0].abs_diff, 0.4, 1e-12);
  EXPECT_NEAR(r.entries[0].combined_error, std::hypot(0.01, 0.01), 1e-15);
}

TEST(CompareEngines, ClosedFormPointWithinThreeSigma) {
  auto spec = small_spec(SweepVariable::kDensityRatio, {10}, 1);
  spec.base = with_cluster_size(spec.base, 1);
  spec.groups = {MetricGroup::kConnection};
  spec.trials = 20'000;
  spec.analytic_samples = 100'000;
  const auto t = run_sweep(spec);
  const auto report = compare_engines(t);
  EXPECT_EQ(report.flagged_count(), 0);
  bool saw_cross = false;
  for (const auto& e : report.entries) {
    if (e.metric == "win_layer_1") {
      saw_cross = true;
      EXPECT_EQ(e.category, DiscrepancyCategory::kCrossCheck);
      EXPECT_LE(e.abs_diff, 3.0 * e.combined_error);
    }
  }
  EXPECT_TRUE(saw_cross);
}

TEST(CompareEngines, IndependenceGapSeparated) {
  auto spec = small_spec(SweepVariable::kDensityRatio, {5}, 1);
  spec.groups = {MetricGroup::kConnection};
  spec.trials = 20'000;
  spec.analytic_samples = 100'000;
  const auto report = compare_engines(run_sweep(spec));
  bool saw_gap = false;
  for (const auto& e : report.entries) {
    if (e.metric == "p_mbs") {
      saw_gap = true;
      EXPECT_EQ(e.category, DiscrepancyCategory::kIndependenceGap);
      EXPECT_FALSE(e.flagged);
      // One layer: the product form is exact, so the gap is pure noise.
      EXPECT_LE(e.abs_diff, 3.0 * e.combined_error);
    }
  }
  EXPECT_TRUE(saw_gap);
}

TEST(CompareEngines, MultiLayerCoverageIsModelDifference) {
  ResultTable t;
  t.metadata.layer_count = 10;
  t.rows.push_back({"theta", 1, "coverage_layer_3", "mc", 0.9, 0.01, 100, 1});
  t.rows.push_back({"theta", 1, "coverage_layer_3", "analytic", 0.4, 0.01, 100, 1});
  const auto r = compare_engines(t);
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_EQ(r.entries[0].category, DiscrepancyCategory::kModelDifference);
  EXPECT_FALSE(r.entries[0].flagged);
}

}  // namespace
}  // namespace hetnet
