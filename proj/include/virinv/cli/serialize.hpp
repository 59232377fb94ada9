#pragma once

#include <complex>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "virinv/cosmo_window.hpp"
#include "virinv/expansion.hpp"
#include "virinv/mathieu.hpp"

namespace virinv::cli {

nlohmann::json to_json(const std::complex<double>& z);
nlohmann::json to_json(const ConservationProbeReport& report);
nlohmann::json to_json(const WindowReport& report);
nlohmann::json to_json(const FloquetVerdict& verdict);

/// 17 significant digits with a '.' decimal separator; round-trips doubles.
std::string format_real(double value);

/// Minimal CSV writer; every row is flushed through format_real.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(std::span<const double> values);
  /// Row with possibly missing cells, written empty.
  void row(std::span<const std::string> cells);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

}  // namespace virinv::cli
