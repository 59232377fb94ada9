#pragma once

#include <complex>
#include <string>

namespace virinv {

/// Parameters of the early-time window on which rho_0 is Taylor-expanded.
struct CosmoParams {
  double m0 = 2.0;
  double omega = 1.0;
  double rho2_tilde = 1.0;
  /// Radial factor F(r) of the potential at the virialised radius.
  double F_rv = 1.0;
  double t_i = 0.0;
  double t_f = 0.1;

  /// Throws InvalidArgument unless t_i < t_f, F_rv != 0 and all values finite.
  void validate() const;
  double width() const { return t_f - t_i; }
  /// Windows wider than one code unit are flagged as not small.
  bool window_is_small() const { return width() <= 1.0; }
};

/// A0, A1, A2 evaluated on principal complex branches.
struct WindowConstants {
  std::complex<double> A0;
  std::complex<double> A1;
  std::complex<double> A2;

  bool has_imaginary_part() const;
};

/// The golden ratio (1 + sqrt 5)/2: for m0 above it every radicand and the
/// arctanh argument of the constants stay in their real domain.
double golden_ratio();

/// True when m0 <= golden ratio, i.e. some intermediate quantity of the
/// constants is complex (even if the final value happens to be real).
bool complex_domain(double m0);

/// A0 = (4 rho2/F) arctanh(sqrt(m0/(m0^2-1))) / (omega sqrt(m0^2-1))
/// A1 = (2 rho2/F) / ((m0^2-1)(1 - 1/(m0^2-1)))
/// A2 = -(rho2/F) omega m0 / ((m0^2-1)(1 - m0^2/(m0^2-1)))
/// Throws PoleError for m0^2 in {1, 2}.
WindowConstants window_constants(const CosmoParams& params);

/// The twelve-term window polynomial in t_i, t_f exactly as published,
/// including its non-telescoping A0, A1 and A2 groups.
std::complex<double> taylor_window_paper(const CosmoParams& params, const WindowConstants& consts);

/// Exact double integral of A0 + A1 s + A2 s^2 (s = tau - t_i) over the
/// window: A0 D^2/2 + A1 D^3/6 + A2 D^4/12 with D = t_f - t_i.
std::complex<double> taylor_window_consistent(const CosmoParams& params, const WindowConstants& consts);

struct WindowReport {
  CosmoParams params;
  WindowConstants constants;
  std::complex<double> window_paper;
  std::complex<double> window_consistent;
  /// |window_paper - window_consistent|.
  double discrepancy = 0.0;
  bool complex_domain = false;
  bool imaginary_parts = false;
  bool small_window = true;
  std::string domain_note;
};

WindowReport window_report(const CosmoParams& params);

}  // namespace virinv
