#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hetnet/params.hpp"

namespace hetnet {

struct RunSettings {
  std::int64_t trials = 20'000;
  std::uint64_t seed = 1;

  bool operator==(const RunSettings&) const = default;
};

struct Config {
  SystemParams system;
  RunSettings run;

  bool operator==(const Config&) const = default;
};

/// Parse error. line() is 0 for document-level problems.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string key, const std::string& message);

  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

/// Keys accepted by load_config, in documentation order. Per-layer overrides
/// are written layers.<i>.power_w, layers.<i>.bias, layers.<i>.density_per_m2.
const std::vector<std::string>& config_keys();
const std::vector<std::string>& required_config_keys();

/// Parses `key = value` lines. `#` starts a comment. Values are arithmetic
/// expressions over numbers and `pi` (+ - * / ^ and parentheses);
/// channel.theta additionally accepts a `dB` suffix.
Config load_config(std::string_view text);

/// Evaluates one value expression, e.g. "(500^2*pi)^-1".
double evaluate_expression(std::string_view expression);

/// Writes every key explicitly so that load_config(serialize(c)) == c.
std::string serialize(const Config& config);

}  // namespace hetnet
