#include "virinv/cli/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace virinv::cli {

namespace {

// Documented schema: section -> accepted keys.
const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"run", {"seed", "output_dir"}},
      {"grid", {"t_start", "t_end", "samples"}},
      {"integrator", {"method", "abs_tol", "rel_tol", "h0", "h_min", "h_max"}},
      {"oscillator",
       {"eta", "profile", "omega2", "a", "b", "omega", "r0", "table", "damping", "damping_rate", "q0", "p0",
        "random_initial"}},
      {"potential", {"family", "gamma", "m0", "omega"}},
      {"pinney", {"rho0", "rhodot0", "floor"}},
      {"leach", {"C"}},
      {"cascade",
       {"epsilon", "order", "perturbation", "perturbation_omega2", "perturbation_a", "perturbation_b",
        "perturbation_omega", "rho0", "rhodot0"}},
      {"probe", {"n", "floor"}},
      {"virial", {"Q", "Lambda", "periods", "samples", "N", "m", "A0", "d"}},
      {"mathieu",
       {"alpha_min", "alpha_max", "beta_min", "beta_max", "resolution", "alpha_count", "beta_count", "threads",
        "a", "b", "omega"}},
      {"cosmo", {"m0", "omega", "rho2_tilde", "F_rv", "t_i", "t_f", "samples"}},
  };
  return keys;
}

std::pair<std::string, std::string> split(const std::string& path) {
  const auto dot = path.find('.');
  if (dot == std::string::npos) throw ConfigError(path + ": expected section.key");
  return {path.substr(0, dot), path.substr(dot + 1)};
}

}  // namespace

RunConfig::RunConfig(std::map<std::string, std::string> entries) : entries_(std::move(entries)) {
  for (const auto& [path, value] : entries_) {
    const auto [section, key] = split(path);
    const auto it = schema().find(section);
    if (it == schema().end()) throw ConfigError(path + ": unknown section [" + section + "]");
    if (!it->second.contains(key)) throw ConfigError(path + ": unknown key in [" + section + "]");
  }
}

RunConfig RunConfig::from_string(const std::string& text) {
  // '#' comments are accepted in addition to the INI ';' form.
  std::istringstream in(text);
  std::ostringstream cleaned;
  for (std::string line; std::getline(in, line);) {
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '#') continue;
    cleaned << line << '\n';
  }
  boost::property_tree::ptree tree;
  try {
    std::istringstream src(cleaned.str());
    boost::property_tree::ini_parser::read_ini(src, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  std::map<std::string, std::string> entries;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(section + ": top-level keys must live inside a [section]");
    for (const auto& [key, value] : body) entries[section + "." + key] = value.get_value<std::string>();
  }
  return RunConfig(std::move(entries));
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return from_string(text.str());
}

bool RunConfig::has(const std::string& path) const { return entries_.contains(path); }

std::optional<std::string> RunConfig::peek(const std::string& path) const {
  if (!has(path)) return std::nullopt;
  return raw(path);
}

std::string RunConfig::raw(const std::string& path) const { return entries_.at(path); }

void RunConfig::record(const std::string& path, const nlohmann::json& value) {
  const auto [section, key] = split(path);
  echo_[section][key] = value;
}

double RunConfig::real(const std::string& path, double fallback) {
  double value = fallback;
  if (has(path)) {
    const std::string text = raw(path);
    char* end = nullptr;
    errno = 0;
    value = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
      throw ConfigError(path + ": expected a number, got '" + text + "'");
  }
  record(path, value);
  return value;
}

double RunConfig::required_real(const std::string& path, const std::string& why) {
  if (!has(path)) throw ConfigError(path + ": " + why);
  return real(path, 0.0);
}

long long RunConfig::integer(const std::string& path, long long fallback) {
  long long value = fallback;
  if (has(path)) {
    const std::string text = raw(path);
    char* end = nullptr;
    errno = 0;
    value = std::strtoll(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
      throw ConfigError(path + ": expected an integer, got '" + text + "'");
  }
  record(path, value);
  return value;
}

std::string RunConfig::text(const std::string& path, const std::string& fallback) {
  std::string value = has(path) ? raw(path) : fallback;
  record(path, value);
  return value;
}

bool RunConfig::flag(const std::string& path, bool fallback) {
  bool value = fallback;
  if (has(path)) {
    const std::string text = raw(path);
    if (text == "true" || text == "1" || text == "yes") value = true;
    else if (text == "false" || text == "0" || text == "no") value = false;
    else throw ConfigError(path + ": expected true/false, got '" + text + "'");
  }
  record(path, value);
  return value;
}

std::string to_ini(const nlohmann::json& echo) {
  std::ostringstream out;
  for (const auto& [section, body] : echo.items()) {
    out << '[' << section << "]\n";
    for (const auto& [key, value] : body.items()) {
      out << key << " = ";
      if (value.is_string()) out << value.get<std::string>();
      else out << value.dump();
      out << '\n';
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace virinv::cli
