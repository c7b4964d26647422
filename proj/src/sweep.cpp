#include "hetnet/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <tuple>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <json.hpp>

#include "hetnet/association.hpp"
#include "hetnet/config.hpp"
#include "hetnet/coverage.hpp"
#include "hetnet/energy.hpp"
#include "hetnet/version.hpp"

namespace hetnet {

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::kDensityRatio: return "density_ratio";
    case SweepVariable::kBias: return "bias";
    case SweepVariable::kTheta: return "theta";
  }
  return "unknown";
}

std::string_view to_string(Engine e) {
  return e == Engine::kMonteCarlo ? "mc" : "analytic";
}

std::string_view to_string(DiscrepancyCategory c) {
  switch (c) {
    case DiscrepancyCategory::kCrossCheck: return "cross_check";
    case DiscrepancyCategory::kIndependenceGap: return "independence_gap";
    case DiscrepancyCategory::kModelDifference: return "model_difference";
  }
  return "unknown";
}

std::optional<SweepVariable> parse_sweep_variable(std::string_view name) {
  for (auto v : {SweepVariable::kDensityRatio, SweepVariable::kBias, SweepVariable::kTheta}) {
    if (to_string(v) == name) return v;
  }
  return std::nullopt;
}

std::optional<Engine> parse_engine(std::string_view name) {
  for (auto e : {Engine::kMonteCarlo, Engine::kAnalytic}) {
    if (to_string(e) == name) return e;
  }
  return std::nullopt;
}

void validate_spec(const SweepSpec& spec) {
  if (spec.values.empty()) throw SpecError("sweep has no values");
  for (std::size_t i = 1; i < spec.values.size(); ++i) {
    if (!(spec.values[i] > spec.values[i - 1])) throw SpecError("sweep values must be strictly increasing");
  }
  for (double v : spec.values) {
    if (!std::isfinite(v)) throw SpecError("sweep values must be finite");
  }
  if (spec.trials < 100) throw SpecError("trials must be at least 100");
  if (spec.analytic_samples < 1) throw SpecError("analytic_samples must be positive");
  if (spec.engines.empty()) throw SpecError("no engine requested");
  if (spec.groups.empty()) throw SpecError("no metric group requested");
}

SystemParams point_params(const SweepSpec& spec, double value) {
  SystemParams p = spec.base;
  switch (spec.variable) {
    case SweepVariable::kDensityRatio: {
      p = with_density_ratio(p, value);
      // Keep one window for the whole sweep where possible so that points
      // stay coupled; grow it only when a point needs more room.
      p.window_radius_m = std::max(p.window_radius_m, recommended_window_radius(p));
      break;
    }
    case SweepVariable::kBias:
      p = with_uniform_bias(p, value);
      break;
    case SweepVariable::kTheta:
      p.snr_threshold = value;
      break;
  }
  return p;
}

namespace {

bool wants(const SweepSpec& spec, MetricGroup g) {
  return std::find(spec.groups.begin(), spec.groups.end(), g) != spec.groups.end();
}

std::string layer_metric(std::string_view stem, int layer) { return fmt::format("{}_{}", stem, layer); }

class RowSink {
 public:
  RowSink(const SweepSpec& spec, Engine engine, std::vector<ResultRow>& rows)
      : spec_(spec), engine_(to_string(engine)), rows_(rows) {}

  void add(double value, std::string metric, double estimate, double error, std::int64_t trials) {
    rows_.push_back({std::string(to_string(spec_.variable)), value, std::move(metric), engine_,
                     estimate, error, trials, spec_.seed});
  }

  void add(double value, std::string metric, const MonteCarloEstimate& e) {
    if (!e.defined) return;
    add(value, std::move(metric), e.value, e.std_error, e.trials);
  }

  void add(double value, std::string metric, const IntegralEstimate& e, std::int64_t samples) {
    add(value, std::move(metric), e.value, e.abs_error_bound, samples);
  }

 private:
  const SweepSpec& spec_;
  std::string engine_;
  std::vector<ResultRow>& rows_;
};

void add_energy_rows(RowSink& sink, const std::vector<double>& xs, const SystemParams& p,
                     const ConnectionShares& shares, double p_mbs_error,
                     const std::vector<double>& share_errors, std::int64_t trials) {
  const auto e = total_energy(p.energy, p, shares);
  const auto& en = p.energy;
  const double load_slope = static_cast<double>(en.num_users) * p.mbs_power_watts /
                            static_cast<double>(en.mbs_capacity_users);
  const double sbs_slope = static_cast<double>(p.cluster_size) * static_cast<double>(en.num_users) *
                           (en.sbs_static_watts + en.backhaul_watts);
  for (double x : xs) {
    sink.add(x, "energy_mbs", e.mbs_total_watts, load_slope * p_mbs_error, trials);
    sink.add(x, "energy_sbs", e.sbs_total_watts, sbs_slope * p_mbs_error, trials);
    for (int i = 1; i <= p.layer_count(); ++i) {
      const auto idx = static_cast<std::size_t>(i - 1);
      sink.add(x, layer_metric("energy_layer", i), e.per_layer_watts[idx], sbs_slope * share_errors[idx],
               trials);
    }
  }
}

// Evaluates one parameter set. `xs` are the sweep values the results belong
// to and `thetas` the matching thresholds (a theta sweep evaluates all of its
// points on one set of trials).
void run_monte_carlo(const SweepSpec& spec, const SystemParams& p, const std::vector<double>& xs,
                     const std::vector<double>& thetas, std::vector<ResultRow>& rows) {
  RowSink sink(spec, Engine::kMonteCarlo, rows);
  const int workers = spec.workers > 0 ? spec.workers : default_workers();
  const bool connection = wants(spec, MetricGroup::kConnection);
  const bool energy = wants(spec, MetricGroup::kEnergy);

  if (connection || energy) {
    const auto conn = estimate_connection_probabilities(p, spec.trials, spec.seed, workers);
    if (connection) {
      std::vector<MonteCarloEstimate> wins;
      for (int i = 1; i <= p.layer_count(); ++i) {
        wins.push_back(estimate_pairwise_layer_win(p, i, spec.trials, spec.seed, workers));
      }
      for (double x : xs) {
        sink.add(x, "p_mbs", conn.p_mbs);
        sink.add(x, "p_sbs", conn.p_sbs);
        for (int i = 1; i <= p.layer_count(); ++i) {
          const auto idx = static_cast<std::size_t>(i - 1);
          sink.add(x, layer_metric("p_sbs_layer", i), conn.per_layer[idx]);
          sink.add(x, layer_metric("win_layer", i), wins[idx]);
        }
      }
    }
    if (energy) {
      ConnectionShares shares{conn.p_mbs.value, {}};
      std::vector<double> share_errors;
      for (const auto& l : conn.per_layer) {
        shares.per_layer.push_back(l.value);
        share_errors.push_back(l.std_error);
      }
      add_energy_rows(sink, xs, p, shares, conn.p_mbs.std_error, share_errors, spec.trials);
    }
  }

  if (wants(spec, MetricGroup::kCoverage)) {
    const auto results = estimate_coverage(p, thetas, spec.trials, spec.seed, workers);
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const auto& c = results[j];
      const double x = xs[j];
      sink.add(x, "coverage_total", c.total);
      sink.add(x, "coverage_mbs", c.mbs_conditional);
      sink.add(x, "coverage_sbs", c.sbs_conditional);
      sink.add(x, "coverage_mbs_noise_only", c.mbs_conditional_noise_only);
      sink.add(x, "coverage_total_noise_only_mbs", c.total_noise_only_mbs);
      for (int i = 1; i <= p.layer_count(); ++i) {
        sink.add(x, layer_metric("coverage_layer", i),
                 c.per_layer_conditional[static_cast<std::size_t>(i - 1)]);
      }
    }
  }
}

void run_analytic(const SweepSpec& spec, const SystemParams& p, const std::vector<double>& xs,
                  const std::vector<double>& thetas, std::vector<ResultRow>& rows) {
  RowSink sink(spec, Engine::kAnalytic, rows);
  const std::int64_t n = spec.analytic_samples;
  const bool connection = wants(spec, MetricGroup::kConnection);
  const bool energy = wants(spec, MetricGroup::kEnergy);

  if (connection || energy) {
    const auto prod = connection_prob_mbs_product(p, n, spec.seed);
    const auto shares = product_form_shares(prod);
    const double p_mbs = prod.p_mbs.value;
    const double p_err = prod.p_mbs.abs_error_bound;
    std::vector<double> share_errors;
    for (std::size_t i = 0; i < shares.size(); ++i) {
      const double pi = prod.per_layer[i].value;
      const double rel = (p_mbs < 1.0 ? p_err / (1.0 - p_mbs) : 0.0) +
                         (pi > 0.0 ? prod.per_layer[i].abs_error_bound / pi : 0.0);
      share_errors.push_back(shares[i] * rel);
    }
    if (connection) {
      for (double x : xs) {
        sink.add(x, "p_mbs", prod.p_mbs, n);
        sink.add(x, "p_sbs", 1.0 - p_mbs, p_err, n);
        for (int i = 1; i <= p.layer_count(); ++i) {
          const auto idx = static_cast<std::size_t>(i - 1);
          sink.add(x, layer_metric("p_sbs_layer", i), shares[idx], share_errors[idx], n);
          sink.add(x, layer_metric("win_layer", i), prod.per_layer[idx], n);
        }
      }
    }
    if (energy) {
      add_energy_rows(sink, xs, p, ConnectionShares{p_mbs, shares}, p_err, share_errors, n);
    }
  }

  if (wants(spec, MetricGroup::kCoverage)) {
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const double x = xs[j];
      const auto tc = total_coverage(p, thetas[j], n, spec.seed);
      // The analytic MBS term is noise-limited, so it is reported under the
      // noise-only metric names.
      sink.add(x, "coverage_mbs_noise_only", tc.mbs_term, n);
      sink.add(x, "coverage_total_noise_only_mbs", tc.total, n);
      double mass = 0.0;
      double err = 0.0;
      double weight = 0.0;
      for (int i = 1; i <= p.layer_count(); ++i) {
        const auto idx = static_cast<std::size_t>(i - 1);
        const double w = tc.layer_shares[idx];
        if (!(w > 0.0)) continue;
        sink.add(x, layer_metric("coverage_layer", i), tc.layer_terms[idx], n);
        mass += w * tc.layer_terms[idx].value;
        err += w * tc.layer_terms[idx].abs_error_bound;
        weight += w;
      }
      if (weight > 0.0) sink.add(x, "coverage_sbs", mass / weight, err / weight, n);
    }
  }
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

}  // namespace

void ResultTable::normalize() {
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.sweep_value, a.metric, a.engine) < std::tie(b.sweep_value, b.metric, b.engine);
  });
}

std::vector<ResultRow> ResultTable::series(std::string_view metric, std::string_view engine) const {
  std::vector<ResultRow> out;
  for (const auto& r : rows) {
    if (r.metric == metric && r.engine == engine) out.push_back(r);
  }
  return out;
}

const ResultRow* ResultTable::find(double sweep_value, std::string_view metric,
                                   std::string_view engine) const {
  for (const auto& r : rows) {
    if (r.sweep_value == sweep_value && r.metric == metric && r.engine == engine) return &r;
  }
  return nullptr;
}

ResultTable run_sweep(const SweepSpec& spec) {
  validate_spec(spec);
  ResultTable table;
  table.metadata.config_hash = config_hash(spec);
  table.metadata.tool_version = std::string(kToolVersion);
  table.metadata.timestamp = utc_timestamp();
  table.metadata.layer_count = spec.base.layer_count();

  // A theta sweep shares one parameter set, so all of its points are
  // evaluated together on common trials.
  std::vector<std::vector<double>> batches;
  if (spec.variable == SweepVariable::kTheta) {
    batches.push_back(spec.values);
  } else {
    for (double v : spec.values) batches.push_back({v});
  }

  for (const auto& xs : batches) {
    const SystemParams p = point_params(spec, xs.front());
    std::vector<double> thetas = xs;
    if (spec.variable != SweepVariable::kTheta) thetas.assign(xs.size(), p.snr_threshold);
    for (Engine engine : spec.engines) {
      std::vector<ResultRow> rows;
      try {
        if (engine == Engine::kMonteCarlo) {
          run_monte_carlo(spec, p, xs, thetas, rows);
        } else {
          run_analytic(spec, p, xs, thetas, rows);
        }
      } catch (const std::exception& e) {
        rows.clear();
        for (double x : xs) {
          rows.push_back({std::string(to_string(spec.variable)), x, std::string(kFailedMetric),
                          std::string(to_string(engine)), 0.0, 0.0, 0, spec.seed});
          table.metadata.failures.push_back({x, std::string(to_string(engine)), e.what()});
        }
      }
      table.rows.insert(table.rows.end(), rows.begin(), rows.end());
    }
  }
  table.normalize();
  return table;
}

std::string emit_csv(const ResultTable& table) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : table.rows) {
    // {} prints the shortest representation that parses back to the same double.
    out += fmt::format("{},{},{},{},{},{},{},{}\n", r.sweep_variable, r.sweep_value, r.metric, r.engine,
                       r.estimate, r.error, r.trials, r.seed);
  }
  return out;
}

namespace {

template <class T>
T parse_field(std::string_view field, int line) {
  T v{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::invalid_argument(fmt::format("csv line {}: bad value '{}'", line, field));
  }
  return v;
}

}  // namespace

ResultTable parse_csv(std::string_view text) {
  ResultTable table;
  int line_no = 0;
  bool header = true;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (header) {
      if (line != kCsvHeader) throw std::invalid_argument("csv header mismatch");
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (f.size() != 8) throw std::invalid_argument(fmt::format("csv line {}: expected 8 fields", line_no));
    ResultRow r;
    r.sweep_variable = std::string(f[0]);
    r.sweep_value = parse_field<double>(f[1], line_no);
    r.metric = std::string(f[2]);
    r.engine = std::string(f[3]);
    r.estimate = parse_field<double>(f[4], line_no);
    r.error = parse_field<double>(f[5], line_no);
    r.trials = parse_field<std::int64_t>(f[6], line_no);
    r.seed = parse_field<std::uint64_t>(f[7], line_no);
    table.rows.push_back(std::move(r));
  }
  if (header) throw std::invalid_argument("csv is empty");
  return table;
}

std::string emit_metadata_json(const ResultTable& table) {
  nlohmann::json j;
  j["config_hash"] = table.metadata.config_hash;
  j["tool_version"] = table.metadata.tool_version;
  j["timestamp"] = table.metadata.timestamp;
  j["layer_count"] = table.metadata.layer_count;
  j["failures"] = nlohmann::json::array();
  for (const auto& f : table.metadata.failures) {
    j["failures"].push_back({{"sweep_value", f.sweep_value}, {"engine", f.engine}, {"message", f.message}});
  }
  return j.dump(2) + "\n";
}

std::string config_hash(const SweepSpec& spec) {
  std::string text = serialize(Config{spec.base, RunSettings{spec.trials, spec.seed}});
  text += fmt::format("sweep.variable = {}\n", to_string(spec.variable));
  for (double v : spec.values) text += fmt::format("sweep.value = {}\n", v);
  for (auto e : spec.engines) text += fmt::format("sweep.engine = {}\n", to_string(e));
  for (auto g : spec.groups) text += fmt::format("sweep.group = {}\n", static_cast<int>(g));
  text += fmt::format("sweep.analytic_samples = {}\n", spec.analytic_samples);

  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

namespace {

std::string_view base_metric(std::string_view metric) {
  return metric.substr(0, metric.find('@'));
}

int layer_of(std::string_view metric) {
  metric = base_metric(metric);
  const auto us = metric.rfind('_');
  if (us == std::string_view::npos) return 0;
  int v = 0;
  auto tail = metric.substr(us + 1);
  auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), v);
  return ec == std::errc() && ptr == tail.data() + tail.size() ? v : 0;
}

DiscrepancyCategory categorize(std::string_view metric, int layers) {
  metric = base_metric(metric);
  if (metric == "p_mbs" || metric == "p_sbs" || metric == "energy_mbs") {
    return DiscrepancyCategory::kIndependenceGap;
  }
  if (metric.starts_with("win_layer_") || metric == "coverage_mbs_noise_only") {
    return DiscrepancyCategory::kCrossCheck;
  }
  return layers > 1 ? DiscrepancyCategory::kModelDifference : DiscrepancyCategory::kCrossCheck;
}

}  // namespace

std::int64_t DiscrepancyReport::flagged_count() const {
  return std::count_if(entries.begin(), entries.end(), [](const Discrepancy& d) { return d.flagged; });
}

DiscrepancyReport compare_engines(const ResultTable& table) {
  int layers = table.metadata.layer_count;
  for (const auto& r : table.rows) layers = std::max(layers, layer_of(r.metric));

  std::map<std::pair<double, std::string>, std::pair<const ResultRow*, const ResultRow*>> pairs;
  for (const auto& r : table.rows) {
    if (r.metric == kFailedMetric) continue;
    auto& slot = pairs[{r.sweep_value, r.metric}];
    if (r.engine == to_string(Engine::kMonteCarlo)) slot.first = &r;
    if (r.engine == to_string(Engine::kAnalytic)) slot.second = &r;
  }

  DiscrepancyReport report;
  for (const auto& [key, pair] : pairs) {
    const auto [mc, an] = pair;
    if (!mc || !an) continue;
    Discrepancy d;
    d.sweep_value = key.first;
    d.metric = key.second;
    d.category = categorize(d.metric, layers);
    d.monte_carlo = mc->estimate;
    d.analytic = an->estimate;
    d.abs_diff = std::abs(mc->estimate - an->estimate);
    d.combined_error = std::hypot(mc->error, an->error);
    d.flagged = d.category == DiscrepancyCategory::kCrossCheck && !(d.abs_diff <= 3.0 * d.combined_error);
    report.entries.push_back(std::move(d));
  }
  return report;
}

}  // namespace hetnet
