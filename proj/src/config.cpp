#include "hetnet/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>

#include <fmt/format.h>

namespace hetnet {

ConfigError::ConfigError(int line, std::string key, const std::string& message)
    : std::runtime_error(line > 0 ? fmt::format("line {}: {}: {}", line, key, message)
                         : key.empty() ? message
                                       : fmt::format("{}: {}", key, message)),
      line_(line),
      key_(std::move(key)) {}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "mbs.power_w",          "mbs.density_per_m2",    "mbs.capacity_users",
      "layers.count",         "layers.base_power_w",   "layers.power_ratio",
      "layers.bias",          "layers.density_per_m2", "cluster.k",
      "channel.alpha",        "channel.noise_w",       "channel.theta",
      "sim.window_radius_m",  "sim.trials",            "sim.seed",
      "energy.mbs_static_w",  "energy.sbs_static_w",   "energy.backhaul_w",
      "energy.num_users",
  };
  return keys;
}

const std::vector<std::string>& required_config_keys() {
  static const std::vector<std::string> keys = {"mbs.density_per_m2", "layers.count",
                                                "layers.density_per_m2", "cluster.k"};
  return keys;
}

namespace {

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  double parse() {
    const double v = expr();
    skip_space();
    if (pos_ != text_.size()) fail(fmt::format("unexpected '{}'", text_.substr(pos_)));
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument(fmt::format("bad expression \"{}\": {}", text_, what));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  double expr() {
    double v = term();
    for (;;) {
      if (accept('+')) {
        v += term();
      } else if (accept('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  double term() {
    double v = unary();
    for (;;) {
      if (accept('*')) {
        v *= unary();
      } else if (accept('/')) {
        v /= unary();
      } else {
        return v;
      }
    }
  }

  double unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  double power() {
    const double base = primary();
    if (accept('^')) return std::pow(base, unary());
    return base;
  }

  double primary() {
    skip_space();
    if (accept('(')) {
      const double v = expr();
      if (!accept(')')) fail("missing ')'");
      return v;
    }
    if (text_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      return std::numbers::pi;
    }
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct Entry {
  int line = 0;
  std::string value;
};

// layers.<i>.<field>
std::optional<std::pair<int, std::string>> parse_layer_key(std::string_view key) {
  constexpr std::string_view prefix = "layers.";
  if (key.substr(0, prefix.size()) != prefix) return std::nullopt;
  key.remove_prefix(prefix.size());
  const auto dot = key.find('.');
  if (dot == std::string_view::npos || dot == 0) return std::nullopt;
  int index = 0;
  auto [ptr, ec] = std::from_chars(key.data(), key.data() + dot, index);
  if (ec != std::errc() || ptr != key.data() + dot) return std::nullopt;
  std::string field(key.substr(dot + 1));
  if (field != "power_w" && field != "bias" && field != "density_per_m2") return std::nullopt;
  return std::make_pair(index, field);
}

class Document {
 public:
  explicit Document(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.contains(key); }

  double real(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    try {
      return evaluate_expression(it->second.value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(it->second.line, key, e.what());
    }
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const double v = real(key, 0.0);
    if (!(std::isfinite(v) && std::floor(v) == v && std::abs(v) < 9.0e15)) {
      throw ConfigError(it->second.line, key, "expected an integer");
    }
    return static_cast<std::int64_t>(v);
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const auto text = trim(it->second.value);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw ConfigError(it->second.line, key, "expected an unsigned integer");
    }
    return v;
  }

  double threshold(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    auto text = trim(it->second.value);
    bool db = false;
    if (text.size() > 2) {
      const auto suffix = text.substr(text.size() - 2);
      if ((suffix[0] == 'd' || suffix[0] == 'D') && (suffix[1] == 'b' || suffix[1] == 'B')) {
        db = true;
        text.remove_suffix(2);
      }
    }
    try {
      const double v = evaluate_expression(text);
      return db ? std::pow(10.0, v / 10.0) : v;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(it->second.line, key, e.what());
    }
  }

  int line_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  const std::map<std::string, Entry>& entries() const { return entries_; }

 private:
  std::map<std::string, Entry> entries_;
};

Document tokenize(std::string_view text) {
  const std::set<std::string> known(config_keys().begin(), config_keys().end());
  std::map<std::string, Entry> entries;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_no, std::string(line), "expected 'key = value'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(line_no, "", "missing key");
    if (!known.contains(key) && !parse_layer_key(key)) {
      throw ConfigError(line_no, key, "unknown key");
    }
    if (value.empty()) throw ConfigError(line_no, key, "missing value");
    auto [it, inserted] = entries.try_emplace(key, Entry{line_no, value});
    if (!inserted) {
      throw ConfigError(line_no, key, fmt::format("duplicate key (first set on line {})", it->second.line));
    }
  }
  return Document(std::move(entries));
}

}  // namespace

double evaluate_expression(std::string_view expression) {
  return ExpressionParser(trim(expression)).parse();
}

Config load_config(std::string_view text) {
  const Document doc = tokenize(text);

  std::vector<std::string> missing;
  for (const auto& key : required_config_keys()) {
    if (!doc.has(key)) missing.push_back(key);
  }
  if (!missing.empty()) {
    throw ConfigError(0, "", fmt::format("missing required keys: {}", fmt::join(missing, ", ")));
  }

  const SystemParams defaults = default_scenario();
  Config config;
  auto& p = config.system;
  p.mbs_power_watts = doc.real("mbs.power_w", defaults.mbs_power_watts);
  p.mbs_density_per_m2 = doc.real("mbs.density_per_m2", defaults.mbs_density_per_m2);
  p.cluster_size = static_cast<int>(doc.integer("cluster.k", defaults.cluster_size));
  p.path_loss_exponent = doc.real("channel.alpha", defaults.path_loss_exponent);
  p.noise_power_watts = doc.real("channel.noise_w", defaults.noise_power_watts);
  p.snr_threshold = doc.threshold("channel.theta", defaults.snr_threshold);

  const auto count = doc.integer("layers.count", defaults.layer_count());
  if (count < 0 || count > 10'000) {
    throw ConfigError(doc.line_of("layers.count"), "layers.count", "out of range");
  }
  const double base_power = doc.real("layers.base_power_w", p.mbs_power_watts / 100.0);
  const double ratio = doc.real("layers.power_ratio", kDefaultPowerRatio);
  const double bias = doc.real("layers.bias", kDefaultBias);
  const double density = doc.real("layers.density_per_m2", p.mbs_density_per_m2);
  p.layers = make_layers(static_cast<int>(count), base_power, ratio, bias, density);

  for (const auto& [key, entry] : doc.entries()) {
    const auto layer_key = parse_layer_key(key);
    if (!layer_key) continue;
    const auto [index, field] = *layer_key;
    if (index < 1 || index > count) {
      throw ConfigError(entry.line, key, fmt::format("layer index outside 1..{}", count));
    }
    auto& layer = p.layers[static_cast<std::size_t>(index - 1)];
    const double v = doc.real(key, 0.0);
    if (field == "power_w") {
      layer.tx_power_watts = v;
    } else if (field == "bias") {
      layer.bias = v;
    } else {
      layer.density_per_m2 = v;
    }
  }

  p.energy.mbs_static_watts = doc.real("energy.mbs_static_w", defaults.energy.mbs_static_watts);
  p.energy.sbs_static_watts = doc.real("energy.sbs_static_w", defaults.energy.sbs_static_watts);
  p.energy.backhaul_watts = doc.real("energy.backhaul_w", defaults.energy.backhaul_watts);
  p.energy.num_users = static_cast<int>(doc.integer("energy.num_users", defaults.energy.num_users));
  p.energy.mbs_capacity_users =
      static_cast<int>(doc.integer("mbs.capacity_users", defaults.energy.mbs_capacity_users));

  p.window_radius_m = doc.has("sim.window_radius_m")
                          ? doc.real("sim.window_radius_m", 0.0)
                          : (p.layers.empty() || p.mbs_density_per_m2 <= 0.0
                                 ? 0.0
                                 : recommended_window_radius(p));

  config.run.trials = doc.integer("sim.trials", config.run.trials);
  config.run.seed = doc.unsigned_integer("sim.seed", config.run.seed);
  if (config.run.trials < 1) throw ConfigError(doc.line_of("sim.trials"), "sim.trials", "must be positive");
  return config;
}

std::string serialize(const Config& config) {
  const auto& p = config.system;
  std::string out;
  auto put = [&out](std::string_view key, auto value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  auto put_real = [&out](std::string_view key, double value) {
    out += fmt::format("{} = {:.17g}\n", key, value);
  };
  put_real("mbs.power_w", p.mbs_power_watts);
  put_real("mbs.density_per_m2", p.mbs_density_per_m2);
  put("mbs.capacity_users", p.energy.mbs_capacity_users);
  put("layers.count", p.layer_count());
  if (!p.layers.empty()) {
    put_real("layers.base_power_w", p.layers.front().tx_power_watts);
    put_real("layers.power_ratio", 1.0);
    put_real("layers.bias", p.layers.front().bias);
    put_real("layers.density_per_m2", p.layers.front().density_per_m2);
  } else {
    put_real("layers.density_per_m2", 0.0);
  }
  for (const auto& layer : p.layers) {
    put_real(fmt::format("layers.{}.power_w", layer.index), layer.tx_power_watts);
    put_real(fmt::format("layers.{}.bias", layer.index), layer.bias);
    put_real(fmt::format("layers.{}.density_per_m2", layer.index), layer.density_per_m2);
  }
  put("cluster.k", p.cluster_size);
  put_real("channel.alpha", p.path_loss_exponent);
  put_real("channel.noise_w", p.noise_power_watts);
  put_real("channel.theta", p.snr_threshold);
  put_real("sim.window_radius_m", p.window_radius_m);
  put("sim.trials", config.run.trials);
  put("sim.seed", config.run.seed);
  put_real("energy.mbs_static_w", p.energy.mbs_static_watts);
  put_real("energy.sbs_static_w", p.energy.sbs_static_watts);
  put_real("energy.backhaul_w", p.energy.backhaul_watts);
  put("energy.num_users", p.energy.num_users);
  return out;
}

}  // namespace hetnet
