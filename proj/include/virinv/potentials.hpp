#pragma once

#include <string>

namespace virinv {

enum class PotentialFamily { Plummer, Dehnen, Harmonic, JaffeLimit, HernquistLimit };

std::string to_string(PotentialFamily family);
PotentialFamily parse_potential_family(const std::string& name);

//============================================================================
/// Pulsed spherical potential V(r, t) = m(t) V_1(r), m(t) = 1 + m0 sin(omega t).
///
/// All families use unit scale radius and unit mass (G = 1):
///
///   Plummer        V_1 = -1/sqrt(1+r^2)
///   Dehnen(gamma)  V_1 = -(1/(2-gamma)) [1 - (r/(1+r))^(2-gamma)],  0 <= gamma < 2
///   Hernquist      V_1 = -1/(1+r)              (Dehnen gamma = 1)
///   Jaffe          V_1 = ln(r/(1+r))            (Dehnen gamma -> 2)
///   Harmonic       V_1 = r^2/2
//============================================================================
class PulsedPotential {
 public:
  PulsedPotential(PotentialFamily family, double m0 = 0.0, double omega = 0.0, double gamma = 0.0);

  static PulsedPotential plummer(double m0 = 0.0, double omega = 0.0);
  static PulsedPotential dehnen(double gamma, double m0 = 0.0, double omega = 0.0);
  static PulsedPotential harmonic(double m0 = 0.0, double omega = 0.0);
  static PulsedPotential jaffe(double m0 = 0.0, double omega = 0.0);
  static PulsedPotential hernquist(double m0 = 0.0, double omega = 0.0);

  PotentialFamily family() const { return family_; }
  double m0() const { return m0_; }
  double omega() const { return omega_; }
  /// Inner slope; meaningful for Dehnen (1 for Hernquist, 2 for Jaffe).
  double gamma() const { return gamma_; }

  /// The unpulsed radial profile V_1(r).
  double shape(double r) const;
  double shape_d2(double r) const;

 private:
  void check_radius(double r, bool second_derivative) const;

  PotentialFamily family_;
  double m0_;
  double omega_;
  double gamma_;
};

/// m(t) = 1 + m0 sin(omega t).
double mass_law(double m0, double omega, double t);

double potential_value(const PulsedPotential& pot, double r, double t);

/// d^2 V / dr^2 at (r0, t): the squared frequency of small radial
/// oscillations about r0.
double radial_frequency_squared(const PulsedPotential& pot, double r0, double t);

/// E = v^2/2 + V(r, t) with the potential frozen at time t.
double particle_energy(const PulsedPotential& pot, double t, double r, double v);

}  // namespace virinv
