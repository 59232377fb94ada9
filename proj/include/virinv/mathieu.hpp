#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "virinv/integrate.hpp"

namespace virinv {

/// Source frequency Omega^2(t) = a + b cos(omega t).
struct MathieuSource {
  double a;
  double b;
  double omega;
};

/// Standard form X'' + (alpha + beta cos 2 tau) X = 0.
struct MathieuParams {
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<MathieuSource> source;
};

enum class Stability { Stable, Marginal, Unstable };

std::string to_string(Stability s);

using Matrix2 = std::array<std::array<double, 2>, 2>;

struct FloquetVerdict {
  double trace = 0.0;
  double determinant = 1.0;
  Stability classification = Stability::Stable;
  /// ln(spectral radius) / pi; zero unless Unstable.
  double growth_exponent = 0.0;
  Matrix2 monodromy{};
};

/// |tr M| is compared with 2 using this tolerance.
inline constexpr double kMarginalTolerance = 1e-9;

/// tau = omega t / 2:  alpha = 4 a / omega^2,  beta = 4 b / omega^2.
MathieuParams to_mathieu(double a, double b, double omega);

/// Adaptive tolerance 1e-12, well inside the Marginal band.
IntegratorSpec floquet_default_spec();

/// Monodromy of the standard form over one coefficient period tau in [0, pi].
FloquetVerdict floquet_classify(const MathieuParams& params, const IntegratorSpec& ispec = floquet_default_spec());

struct ScanRange {
  double lo;
  double hi;
  std::size_t count;

  double at(std::size_t i) const;
};

struct ScanCell {
  double alpha;
  double beta;
  FloquetVerdict verdict;
};

/// Verdicts on an alpha x beta lattice (endpoints included), ordered
/// row-major by alpha then beta. Cells are evaluated on `threads` workers
/// (0 = hardware concurrency); the output order does not depend on it.
std::vector<ScanCell> stability_scan(const ScanRange& alpha, const ScanRange& beta,
                                     const IntegratorSpec& ispec = floquet_default_spec(),
                                     unsigned threads = 0);

}  // namespace virinv
