#pragma once

namespace virinv {

/// Dimensionless virial oscillation of a self-gravitating cluster,
/// A(t) = A0 z(t), on the negative-energy branch:
///
///   z^2 zdot^2 = Lambda^2 - Q (z - 1/(2Q))^2,
///   t(z)       = Q^-1/2 sqrt(Lambda^2 - (z - 1/(2Q))^2)
///              + (1/(2 Q^3/2)) arccos((z - 1/(2Q)) / Lambda),
///
/// periodic with p = pi / Q^3/2 inside 1/(2Q) - Lambda <= z <= 1/(2Q) + Lambda.
struct VirialModel {
  /// Energy ratio E / W0, taken positive; the sign of E is carried separately.
  double Q = 1.0;
  double Lambda = 0.3;
  int sign_E = -1;

  /// Throws InvalidArgument unless Q > 0, sign_E = -1 and 0 < Lambda <= 1/(2Q).
  void validate_oscillatory() const;
  double centre() const { return 0.5 / Q; }
  double period() const;
  double z_min() const { return centre() - Lambda; }
  double z_max() const { return centre() + Lambda; }
};

struct ClusterScales {
  double N = 1.0;
  double m = 1.0;
  double A0 = 1.0;

  ClusterScales(double N, double m, double A0);
  /// (9 pi / 8)^1/2 A0 / (N m G) with G = 1, kept as the reference time unit.
  double t0() const;
};

/// N m / (d^3 pi^3/2) exp(-r^2/d^2); integrates to N m over all space.
double gaussian_density(const ClusterScales& scales, double r, double d);

/// Time on the principal half-cycle; t = 0 at the upper turning point.
/// Throws OutOfBand if z leaves [z_min, z_max].
double time_of_z(const VirialModel& model, double z);

/// Inverse of time_of_z extended by reflection and periodicity.
double z_of_time(const VirialModel& model, double t);

/// Radial velocity dz/dt along the closed-form solution.
double zdot_of_time(const VirialModel& model, double t);

/// True when Lambda = 1/(2Q) within 1e-12: the orbit reaches z = 0.
bool special_case_lambda(const VirialModel& model);

/// z^2 zdot^2 - [Lambda^2 - Q (z - 1/(2Q))^2].
double first_integral_residual(const VirialModel& model, double z, double zdot);

}  // namespace virinv
