#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "virinv/errors.hpp"

namespace virinv::cli {

/// Malformed or incomplete configuration; maps to exit status 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

//============================================================================
/// INI-style run configuration:
///
///   [section]
///   key = value        ; or # comments
///
/// Every typed read records the effective value (explicit or default) so
/// that echo() reproduces the full configuration the run actually used.
/// Keys outside the documented schema are rejected.
//============================================================================
class RunConfig {
 public:
  static RunConfig from_file(const std::filesystem::path& path);
  static RunConfig from_string(const std::string& text);

  bool has(const std::string& path) const;
  /// Reads a value without recording it in echo().
  std::optional<std::string> peek(const std::string& path) const;

  double real(const std::string& path, double fallback);
  double required_real(const std::string& path, const std::string& why = "required");
  long long integer(const std::string& path, long long fallback);
  std::string text(const std::string& path, const std::string& fallback);
  bool flag(const std::string& path, bool fallback);

  /// Records a value computed from other settings (e.g. an overridden seed).
  void record(const std::string& path, const nlohmann::json& value);

  const nlohmann::json& echo() const { return echo_; }

 private:
  explicit RunConfig(std::map<std::string, std::string> entries);
  std::string raw(const std::string& path) const;

  std::map<std::string, std::string> entries_;
  nlohmann::json echo_ = nlohmann::json::object();
};

/// Renders an echo() object back into the INI text format.
std::string to_ini(const nlohmann::json& echo);

}  // namespace virinv::cli
