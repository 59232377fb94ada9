#pragma once

#include <array>
#include <optional>

#include "virinv/integrate.hpp"
#include "virinv/oscillator.hpp"

namespace virinv {

//============================================================================
/// Solution of the auxiliary (Ermakov-Pinney) equation
///
///   eta^2 rho'' + Omega^2(t) rho = rho^-3
///
/// sampled on a grid together with the accumulated phase
///
///   W(t) = int_{t0}^{t} rho^-2 dt'.
///
/// Trajectory components are (rho, rhodot, W); rho > 0 on every sample.
//============================================================================
class ErmakovSolution {
 public:
  ErmakovSolution(double eta, Trajectory samples);

  double eta() const { return eta_; }
  double t0() const { return samples_.time(0); }
  const Trajectory& trajectory() const { return samples_; }
  bool contains(double t) const { return samples_.contains(t); }

  double rho(double t) const { return samples_.at(t, 0); }
  double rhodot(double t) const { return samples_.at(t, 1); }
  double W(double t) const { return samples_.at(t, 2); }

 private:
  double eta_;
  Trajectory samples_;
};

struct PinneyOptions {
  /// rho(t0); defaults to the equilibrium Omega(t0)^-1/2 of the initial frequency.
  std::optional<double> rho0;
  double rhodot0 = 0.0;
  /// SingularityApproached is raised once rho drops below this floor.
  double floor = 1e-8;
};

/// Equilibrium of eta^2 rho'' + w2 rho = rho^-3 for constant w2 > 0.
double pinney_equilibrium(double omega2);

/// Direct integration of the Pinney equation, with W integrated alongside.
/// Damped models use the damping-consistent frequency of
/// OscillatorModel::pinney_omega2.
ErmakovSolution solve_pinney(const OscillatorModel& model, const TimeGrid& grid, const IntegratorSpec& spec,
                             const PinneyOptions& options = {});

/// Closed-form construction from the linear solutions u, v of
/// eta^2 x'' + Omega^2 x = 0 with u(t0)=1, u'(t0)=0, v(t0)=0, v'(t0)=1:
///
///   rho^2 = A u^2 + 2 B u v + C v^2,  A C - B^2 = 1/Wr^2,  Wr = eta (u v' - u' v),
///
/// with A, B, C fixed by rho(t0) = rho0 and rho'(t0) = rhodot0. The default
/// initial data give rho = sqrt(u^2 + v^2/Wr^2). Requires an undamped model.
ErmakovSolution pinney_from_linear_basis(const OscillatorModel& model, const TimeGrid& grid,
                                         const IntegratorSpec& spec, double rho0 = 1.0, double rhodot0 = 0.0);

/// Leach scaling parameters C1 = cosh C, C2 = sinh C.
class LeachParams {
 public:
  explicit LeachParams(double C = 0.0);
  double C() const { return C_; }
  double C1() const { return C1_; }
  double C2() const { return C2_; }

 private:
  double C_;
  double C1_;
  double C2_;
};

/// I = (1/2) [ (q/rho)^2 + (rho p - eta rho' q)^2 ].
double lewis_invariant(const OscillatorModel& model, const ErmakovSolution& erma, const PhaseState& state);

/// Undamped Leach invariant
///
///   2I = (q/rho)^2 (C1^2 + C2^2 + 2 C1 C2 cos 2theta)
///      + B^2       (C1^2 + C2^2 - 2 C1 C2 cos 2theta)
///      - 4 (q/rho) B C1 C2 sin 2theta,
///
/// with B = rho p - eta rho' q and theta = W/eta. Equals the Lewis
/// invariant for C = 0.
double leach_invariant(const OscillatorModel& model, const ErmakovSolution& erma, const PhaseState& state,
                       const LeachParams& params);

/// General Leach invariant for the damped oscillator; q/rho becomes
/// e^{F/2} q / rho and B becomes rho e^{-F/2} p - eta (rho' - rho f/2) e^{F/2} q.
/// Throws InconsistentDamping if f is not dF/dt at the state time.
double leach_invariant_damped(const OscillatorModel& model, const ErmakovSolution& erma, const PhaseState& state,
                              const LeachParams& params);

using SymmetricMatrix3 = std::array<std::array<double, 3>, 3>;

/// I_mn = (1/2) [ q_m q_n / rho^2 + (rho p_m - eta rho' q_m)(rho p_n - eta rho' q_n) ].
SymmetricMatrix3 tensor_invariant(const ErmakovSolution& erma, const PhaseState3& state);

}  // namespace virinv
