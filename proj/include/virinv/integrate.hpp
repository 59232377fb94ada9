#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "virinv/oscillator.hpp"

namespace virinv {

/// dy/dt = rhs(t, y); the callee writes into dydt.
using VectorField = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Called after every accepted step; may throw to abort the integration.
using StepGuard = std::function<void(double t, std::span<const double> y)>;

enum class Method { FixedRK4, AdaptiveRK45, Leapfrog };

std::string to_string(Method method);
Method parse_method(const std::string& name);

/// Integrator selection. Fixed-step methods use h0 as their step; the
/// adaptive Dormand-Prince 5(4) pair uses the tolerances and step bounds.
struct IntegratorSpec {
  Method method = Method::AdaptiveRK45;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double h0 = 1e-3;
  double h_min = 1e-12;
  double h_max = 10.0;

  static IntegratorSpec adaptive(double tol);
  static IntegratorSpec fixed_rk4(double step);
  static IntegratorSpec leapfrog(double step);

  void validate() const;
};

//============================================================================
/// Samples (t_i, y_i, dy/dt_i) on a time grid. Off-node evaluation uses
/// cubic Hermite interpolation between the bracketing samples; on-node
/// evaluation returns the stored sample exactly.
//============================================================================
class Trajectory {
 public:
  Trajectory(std::size_t dim, std::vector<double> times, std::vector<double> values, std::vector<double> derivs);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return times_.size(); }
  std::span<const double> times() const { return times_; }
  double time(std::size_t i) const { return times_[i]; }
  std::span<const double> state(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
  std::span<const double> derivative(std::size_t i) const { return {derivs_.data() + i * dim_, dim_}; }
  double value(std::size_t i, std::size_t k) const { return values_[i * dim_ + k]; }
  double derivative(std::size_t i, std::size_t k) const { return derivs_[i * dim_ + k]; }

  /// Column k over all samples.
  std::vector<double> component(std::size_t k) const;

  bool contains(double t) const { return t >= times_.front() && t <= times_.back(); }
  /// Dense output; throws OutOfGrid outside [t_front, t_back].
  std::vector<double> at(double t) const;
  double at(double t, std::size_t k) const;
  /// Time derivative of component k from the interpolant.
  double derivative_at(double t, std::size_t k) const;

 private:
  std::size_t locate(double t) const;

  std::size_t dim_;
  std::vector<double> times_;
  std::vector<double> values_;
  std::vector<double> derivs_;
};

/// Integrates rhs from y0 at grid.t_start() and records the state at every
/// grid sample. Leapfrog treats the first half of y as coordinates and the
/// second half as momenta and requires a separable field.
Trajectory integrate_ode(const VectorField& rhs, std::span<const double> y0, const TimeGrid& grid,
                         const IntegratorSpec& spec, const StepGuard& guard = {});

/// Hamilton's equations for the (possibly damped) oscillator,
///   dq/dt = e^{-F} p / eta,  dp/dt = -e^{F} Omega^2(t) q / eta.
/// Components: (q, p).
Trajectory integrate_hamiltonian(const OscillatorModel& model, const PhaseState& s0, const TimeGrid& grid,
                                 const IntegratorSpec& spec);

/// Isotropic three-dimensional oscillator. Components: (q1, q2, q3, p1, p2, p3).
Trajectory integrate_hamiltonian3(const OscillatorModel& model, const PhaseState3& s0, const TimeGrid& grid,
                                  const IntegratorSpec& spec);

PhaseState phase_state(const Trajectory& traj, std::size_t i);
PhaseState3 phase_state3(const Trajectory& traj, std::size_t i);

/// Adaptive Gauss-Kronrod quadrature of f over [a, b] (b may be +inf).
/// Throws ToleranceNotMet if the error estimate stays above tol.
double quad(const std::function<double(double)>& f, double a, double b, double tol);

/// First derivative of sampled values. Fourth-order stencils on uniform
/// grids, second-order three-point formulas otherwise.
std::vector<double> differentiate(std::span<const double> t, std::span<const double> y);

}  // namespace virinv
