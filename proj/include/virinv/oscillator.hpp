#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "virinv/potentials.hpp"

namespace virinv {

/// Canonical pair (q, p) at time t, dimensionless code units.
struct PhaseState {
  double q = 0.0;
  double p = 0.0;
  double t = 0.0;
};

struct PhaseState3 {
  std::array<double, 3> q{};
  std::array<double, 3> p{};
  double t = 0.0;
};

void validate(const PhaseState& s);
void validate(const PhaseState3& s);

//============================================================================
/// Squared frequency Omega^2(t) of the time-dependent oscillator.
///
/// Kinds:
///   Constant       Omega^2 = c
///   Cosine         Omega^2 = a + b cos(omega t)
///   Sine           Omega^2 = a + b sin(omega t)
///   FromPotential  Omega^2 = V''(r0, t) of a pulsed potential
///   Tabulated      monotone piecewise-cubic (PCHIP) through (t_k, Omega^2_k);
///                  evaluation outside [t_0, t_n] is an error
///   Perturbed      Omega^2 = base(t) + epsilon * delta(t)
//============================================================================
class FrequencyProfile {
 public:
  struct Constant {
    double omega2;
  };
  struct Cosine {
    double a, b, omega;
  };
  struct Sine {
    double a, b, omega;
  };
  struct FromPotential {
    PulsedPotential potential;
    double r0;
  };
  struct Tabulated {
    std::vector<double> t;
    std::vector<double> omega2;
  };
  struct Perturbed {
    std::shared_ptr<const FrequencyProfile> base;
    double epsilon;
    std::shared_ptr<const FrequencyProfile> delta;
  };
  using Kind = std::variant<Constant, Cosine, Sine, FromPotential, Tabulated, Perturbed>;

  static FrequencyProfile constant(double omega2);
  static FrequencyProfile cosine(double a, double b, double omega);
  static FrequencyProfile sine(double a, double b, double omega);
  static FrequencyProfile from_potential(const PulsedPotential& potential, double r0 = 0.0);
  static FrequencyProfile tabulated(std::vector<double> t, std::vector<double> omega2);
  static FrequencyProfile perturbed(FrequencyProfile base, double epsilon, FrequencyProfile delta);

  double operator()(double t) const;

  /// True when Omega^2 does not depend on t.
  bool is_constant() const;
  const Kind& kind() const { return kind_; }
  std::string describe() const;

 private:
  struct TableInterpolant;

  explicit FrequencyProfile(Kind kind);

  Kind kind_;
  std::shared_ptr<const TableInterpolant> table_;
};

//============================================================================
/// Damping profile F(t) with rate f = dF/dt. The default profile is F = 0.
//============================================================================
class DampingProfile {
 public:
  using Function = std::function<double(double)>;

  DampingProfile() = default;
  static DampingProfile none() { return {}; }
  /// F(t) = rate * t.
  static DampingProfile linear(double rate);
  /// Arbitrary F and its claimed derivative f; df/dt is taken numerically.
  static DampingProfile custom(Function F, Function f);

  double F(double t) const;
  double f(double t) const;
  double fdot(double t) const;
  bool is_zero() const { return kind_ == Kind::None; }
  double rate() const { return rate_; }
  std::string describe() const;

  /// |central difference of F - f| at t.
  double consistency_error(double t) const;

 private:
  enum class Kind { None, Linear, Custom };
  Kind kind_ = Kind::None;
  double rate_ = 0.0;
  Function F_;
  Function f_;
};

/// H = (1/(2 eta)) [p^2 + Omega^2(t) q^2], optionally damped.
class OscillatorModel {
 public:
  OscillatorModel(double eta, FrequencyProfile omega2, DampingProfile damping = {});

  double eta() const { return eta_; }
  const FrequencyProfile& omega2() const { return omega2_; }
  const DampingProfile& damping() const { return damping_; }

  /// Squared frequency seen by the auxiliary (Pinney) equation. Equal to
  /// Omega^2 without damping; otherwise Omega^2 - eta^2 (f^2/4 + f'/2).
  double pinney_omega2(double t) const;

 private:
  double eta_;
  FrequencyProfile omega2_;
  DampingProfile damping_;
};

/// Strictly increasing sample times, at least two of them.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> samples);
  static TimeGrid uniform(double t_start, double t_end, std::size_t count);

  double t_start() const { return samples_.front(); }
  double t_end() const { return samples_.back(); }
  std::size_t size() const { return samples_.size(); }
  double operator[](std::size_t i) const { return samples_[i]; }
  std::span<const double> samples() const { return samples_; }
  bool contains(double t) const { return t >= t_start() && t <= t_end(); }
  bool is_uniform(double rel_tol = 1e-9) const;

 private:
  std::vector<double> samples_;
};

double hamiltonian(const OscillatorModel& model, const PhaseState& state);

}  // namespace virinv
