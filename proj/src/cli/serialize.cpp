#include "virinv/cli/serialize.hpp"

#include <fmt/format.h>

#include "virinv/errors.hpp"

namespace virinv::cli {

using nlohmann::json;

json to_json(const std::complex<double>& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const ConservationProbeReport& r) {
  json correlations = json::array();
  for (const auto& c : r.correlations)
    correlations.push_back({{"order", c.order}, {"correlation", c.correlation}, {"degenerate", c.degenerate}});
  double g_min = 0.0, g_max = 0.0;
  if (!r.g.empty()) {
    g_min = g_max = r.g.front().g;
    for (const auto& s : r.g) {
      g_min = std::min(g_min, s.g);
      g_max = std::max(g_max, s.g);
    }
  }
  return json{
      {"n", r.n},
      {"order", r.order},
      {"drift_rho", r.drift_rho},
      {"drift_rhodot_sq", r.drift_rhodot_sq},
      {"identity_residual", r.identity_residual},
      {"identity_scale", r.identity_scale},
      {"valid_samples", r.valid_samples},
      {"total_samples", r.total_samples},
      {"g_min", g_min},
      {"g_max", g_max},
      {"correlations", correlations},
  };
}

json to_json(const WindowReport& r) {
  return json{
      {"params",
       {{"m0", r.params.m0},
        {"omega", r.params.omega},
        {"rho2_tilde", r.params.rho2_tilde},
        {"F_rv", r.params.F_rv},
        {"t_i", r.params.t_i},
        {"t_f", r.params.t_f}}},
      {"constants", {{"A0", to_json(r.constants.A0)}, {"A1", to_json(r.constants.A1)}, {"A2", to_json(r.constants.A2)}}},
      {"window_paper", to_json(r.window_paper)},
      {"window_consistent", to_json(r.window_consistent)},
      {"discrepancy", r.discrepancy},
      {"complex_domain", r.complex_domain},
      {"imaginary_parts", r.imaginary_parts},
      {"small_window", r.small_window},
      {"domain_note", r.domain_note},
  };
}

json to_json(const FloquetVerdict& v) {
  return json{
      {"trace", v.trace},
      {"determinant", v.determinant},
      {"class", to_string(v.classification)},
      {"growth_exponent", v.growth_exponent},
      {"monodromy", {{v.monodromy[0][0], v.monodromy[0][1]}, {v.monodromy[1][0], v.monodromy[1][1]}}},
  };
}

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != columns_) throw InvalidArgument("CSV row width does not match the header");
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_real(values[i]);
  out_ << '\n';
}

void CsvWriter::row(std::span<const std::string> cells) {
  if (cells.size() != columns_) throw InvalidArgument("CSV row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << '\n';
}

}  // namespace virinv::cli
