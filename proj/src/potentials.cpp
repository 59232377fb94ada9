#include "virinv/potentials.hpp"

#include <cmath>
#include <limits>

#include "virinv/errors.hpp"

namespace virinv {

std::string to_string(PotentialFamily family) {
  switch (family) {
    case PotentialFamily::Plummer: return "plummer";
    case PotentialFamily::Dehnen: return "dehnen";
    case PotentialFamily::Harmonic: return "harmonic";
    case PotentialFamily::JaffeLimit: return "jaffe";
    case PotentialFamily::HernquistLimit: return "hernquist";
  }
  return "unknown";
}

PotentialFamily parse_potential_family(const std::string& name) {
  if (name == "plummer") return PotentialFamily::Plummer;
  if (name == "dehnen") return PotentialFamily::Dehnen;
  if (name == "harmonic") return PotentialFamily::Harmonic;
  if (name == "jaffe") return PotentialFamily::JaffeLimit;
  if (name == "hernquist") return PotentialFamily::HernquistLimit;
  throw InvalidArgument("unknown potential family '" + name + "'");
}

PulsedPotential::PulsedPotential(PotentialFamily family, double m0, double omega, double gamma)
    : family_(family), m0_(m0), omega_(omega), gamma_(gamma) {
  if (!std::isfinite(m0) || !std::isfinite(omega) || !std::isfinite(gamma))
    throw InvalidArgument("pulsed potential parameters must be finite");
  if (m0 < 0) throw InvalidArgument("pulsation amplitude m0 must be >= 0");
  if (m0 > 0 && !(omega > 0)) throw InvalidArgument("omega must be > 0 when m0 > 0");
  switch (family) {
    case PotentialFamily::Dehnen:
      if (gamma < 0 || gamma >= 2)
        throw InvalidArgument("Dehnen gamma must lie in [0, 2); use the Jaffe limit for gamma -> 2");
      break;
    case PotentialFamily::HernquistLimit: gamma_ = 1.0; break;
    case PotentialFamily::JaffeLimit: gamma_ = 2.0; break;
    default: gamma_ = 0.0; break;
  }
}

PulsedPotential PulsedPotential::plummer(double m0, double omega) {
  return {PotentialFamily::Plummer, m0, omega};
}
PulsedPotential PulsedPotential::dehnen(double gamma, double m0, double omega) {
  return {PotentialFamily::Dehnen, m0, omega, gamma};
}
PulsedPotential PulsedPotential::harmonic(double m0, double omega) {
  return {PotentialFamily::Harmonic, m0, omega};
}
PulsedPotential PulsedPotential::jaffe(double m0, double omega) {
  return {PotentialFamily::JaffeLimit, m0, omega};
}
PulsedPotential PulsedPotential::hernquist(double m0, double omega) {
  return {PotentialFamily::HernquistLimit, m0, omega};
}

void PulsedPotential::check_radius(double r, bool second_derivative) const {
  if (!(r >= 0) || !std::isfinite(r)) throw DomainError("radius must be finite and >= 0");
  if (r > 0) return;
  if (family_ == PotentialFamily::JaffeLimit)
    throw DomainError("Jaffe potential diverges at r = 0");
  // Cusped Dehnen models have an infinite curvature at the centre unless
  // the (1 - gamma) r^-gamma term vanishes identically.
  if (second_derivative && family_ == PotentialFamily::Dehnen && gamma_ != 0.0 && gamma_ != 1.0)
    throw DomainError("Dehnen second derivative diverges at r = 0 for gamma not in {0, 1}");
}

double PulsedPotential::shape(double r) const {
  check_radius(r, false);
  switch (family_) {
    case PotentialFamily::Plummer: return -1.0 / std::sqrt(1.0 + r * r);
    case PotentialFamily::Dehnen: {
      const double slope = 2.0 - gamma_;
      // 1 - x^slope, written with expm1 so that slope -> 0 stays accurate.
      const double bracket = r == 0.0 ? 1.0 : -std::expm1(slope * std::log(r / (1.0 + r)));
      return -bracket / slope;
    }
    case PotentialFamily::HernquistLimit: return -1.0 / (1.0 + r);
    case PotentialFamily::JaffeLimit: return std::log(r / (1.0 + r));
    case PotentialFamily::Harmonic: return 0.5 * r * r;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double PulsedPotential::shape_d2(double r) const {
  check_radius(r, true);
  switch (family_) {
    case PotentialFamily::Plummer: {
      const double s = 1.0 + r * r;
      return (1.0 - 2.0 * r * r) / (s * s * std::sqrt(s));
    }
    case PotentialFamily::Dehnen: {
      // V' = r^(1-g) (1+r)^(g-3);  V'' = r^-g (1+r)^(g-4) [(1-g) - 2r]
      const double g = gamma_;
      const double tail = std::pow(1.0 + r, g - 4.0);
      double value = -2.0 * std::pow(r, 1.0 - g);
      if (g != 1.0) value += (1.0 - g) * std::pow(r, -g);
      return value * tail;
    }
    case PotentialFamily::HernquistLimit: return -2.0 / std::pow(1.0 + r, 3);
    case PotentialFamily::JaffeLimit: return -1.0 / (r * r) + 1.0 / ((1.0 + r) * (1.0 + r));
    case PotentialFamily::Harmonic: return 1.0;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double mass_law(double m0, double omega, double t) { return 1.0 + m0 * std::sin(omega * t); }

double potential_value(const PulsedPotential& pot, double r, double t) {
  return mass_law(pot.m0(), pot.omega(), t) * pot.shape(r);
}

double radial_frequency_squared(const PulsedPotential& pot, double r0, double t) {
  return mass_law(pot.m0(), pot.omega(), t) * pot.shape_d2(r0);
}

double particle_energy(const PulsedPotential& pot, double t, double r, double v) {
  return 0.5 * v * v + potential_value(pot, r, t);
}

}  // namespace virinv
