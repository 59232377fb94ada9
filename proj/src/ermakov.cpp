#include "virinv/ermakov.hpp"

#include <cmath>
#include <string>

#include "virinv/errors.hpp"

namespace virinv {

ErmakovSolution::ErmakovSolution(double eta, Trajectory samples) : eta_(eta), samples_(std::move(samples)) {
  if (!(eta > 0)) throw InvalidArgument("eta must be positive");
  if (samples_.dim() != 3) throw InvalidArgument("Ermakov samples must hold (rho, rhodot, W)");
  for (std::size_t i = 0; i < samples_.size(); ++i)
    if (!(samples_.value(i, 0) > 0)) throw SingularityApproached("rho must stay positive on the grid");
}

double pinney_equilibrium(double omega2) {
  if (!(omega2 > 0)) throw DomainError("Pinney equilibrium needs Omega^2 > 0");
  return std::pow(omega2, -0.25);
}

ErmakovSolution solve_pinney(const OscillatorModel& model, const TimeGrid& grid, const IntegratorSpec& spec,
                             const PinneyOptions& options) {
  const double t0 = grid.t_start();
  const double rho0 = options.rho0 ? *options.rho0 : pinney_equilibrium(model.pinney_omega2(t0));
  if (!(rho0 > 0)) throw InvalidArgument("rho0 must be positive");
  if (!(options.floor > 0)) throw InvalidArgument("singularity floor must be positive");
  const double inv_eta2 = 1.0 / (model.eta() * model.eta());
  VectorField rhs = [&model, inv_eta2](double t, std::span<const double> y, std::span<double> dy) {
    const double rho = y[0];
    if (!(rho > 0)) throw SingularityApproached("rho reached zero at t = " + std::to_string(t));
    const double inv2 = 1.0 / (rho * rho);
    dy[0] = y[1];
    dy[1] = (inv2 / rho - model.pinney_omega2(t) * rho) * inv_eta2;
    dy[2] = inv2;
  };
  const double floor = options.floor;
  StepGuard guard = [floor](double t, std::span<const double> y) {
    if (y[0] < floor)
      throw SingularityApproached("rho fell below the floor " + std::to_string(floor) + " at t = " +
                                  std::to_string(t));
  };
  const std::array<double, 3> y0{rho0, options.rhodot0, 0.0};
  return ErmakovSolution(model.eta(), integrate_ode(rhs, y0, grid, spec, guard));
}

ErmakovSolution pinney_from_linear_basis(const OscillatorModel& model, const TimeGrid& grid,
                                         const IntegratorSpec& spec, double rho0, double rhodot0) {
  if (!model.damping().is_zero()) throw InvalidArgument("linear-basis construction requires F = 0");
  if (!(rho0 > 0)) throw InvalidArgument("rho0 must be positive");
  const double eta = model.eta();
  const double inv_eta2 = 1.0 / (eta * eta);
  // Wronskian of the normalised basis, constant along the flow.
  const double wr = eta;
  const double A = rho0 * rho0;
  const double B = rho0 * rhodot0;
  const double C = (1.0 / (wr * wr) + B * B) / A;

  VectorField rhs = [&model, inv_eta2, A, B, C](double t, std::span<const double> y, std::span<double> dy) {
    const double w2 = model.omega2()(t);
    dy[0] = y[1];
    dy[1] = -w2 * y[0] * inv_eta2;
    dy[2] = y[3];
    dy[3] = -w2 * y[2] * inv_eta2;
    dy[4] = 1.0 / (A * y[0] * y[0] + 2 * B * y[0] * y[2] + C * y[2] * y[2]);
  };
  const std::array<double, 5> y0{1.0, 0.0, 0.0, 1.0, 0.0};
  const Trajectory basis = integrate_ode(rhs, y0, grid, spec);

  std::vector<double> times(basis.times().begin(), basis.times().end());
  std::vector<double> values;
  std::vector<double> derivs;
  values.reserve(3 * basis.size());
  derivs.reserve(3 * basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double u = basis.value(i, 0), ud = basis.value(i, 1);
    const double v = basis.value(i, 2), vd = basis.value(i, 3);
    const double rho = std::sqrt(A * u * u + 2 * B * u * v + C * v * v);
    const double rhodot = (A * u * ud + B * (ud * v + u * vd) + C * v * vd) / rho;
    const double rhoddot = (1.0 / (rho * rho * rho) - model.omega2()(times[i]) * rho) * inv_eta2;
    values.insert(values.end(), {rho, rhodot, basis.value(i, 4)});
    derivs.insert(derivs.end(), {rhodot, rhoddot, 1.0 / (rho * rho)});
  }
  return ErmakovSolution(eta, Trajectory(3, std::move(times), std::move(values), std::move(derivs)));
}

LeachParams::LeachParams(double C) : C_(C), C1_(std::cosh(C)), C2_(std::sinh(C)) {
  if (!std::isfinite(C) || std::abs(C) > 20.0) throw InvalidArgument("Leach parameter C must satisfy |C| <= 20");
}

namespace {

void require_in_grid(const ErmakovSolution& erma, double t) {
  if (!erma.contains(t)) throw OutOfGrid("state time " + std::to_string(t) + " outside the Ermakov grid");
}

// 2I for scaled coordinate x = q/rho and momentum bracket b.
double leach_form(double x, double b, double theta, const LeachParams& params) {
  const double c1 = params.C1(), c2 = params.C2();
  const double sum = c1 * c1 + c2 * c2;
  const double cross = 2.0 * c1 * c2;
  const double c = std::cos(2.0 * theta), s = std::sin(2.0 * theta);
  return x * x * (sum + cross * c) + b * b * (sum - cross * c) - 2.0 * x * b * cross * s;
}

}  // namespace

double lewis_invariant(const OscillatorModel& model, const ErmakovSolution& erma, const PhaseState& state) {
  require_in_grid(erma, state.t);
  const double rho = erma.rho(state.t);
  const double x = state.q / rho;
  const double b = rho * state.p - model.eta() * erma.rhodot(state.t) * state.q;
  return 0.5 * (x * x + b * b);
}

double leach_invariant(const OscillatorModel& model, const ErmakovSolution& erma, const PhaseState& state,
                       const LeachParams& params) {
  require_in_grid(erma, state.t);
  const double rho = erma.rho(state.t);
  const double x = state.q / rho;
  const double b = rho * state.p - model.eta() * erma.rhodot(state.t) * state.q;
  return 0.5 * leach_form(x, b, erma.W(state.t) / model.eta(), params);
}

double leach_invariant_damped(const OscillatorModel& model, const ErmakovSolution& erma, const PhaseState& state,
                              const LeachParams& params) {
  require_in_grid(erma, state.t);
  const DampingProfile& damping = model.damping();
  const double t = state.t;
  const double f = damping.f(t);
  if (damping.consistency_error(t) > 1e-6 * std::max(1.0, std::abs(f)))
    throw InconsistentDamping("damping rate f is not dF/dt at t = " + std::to_string(t));
  const double half_F = 0.5 * damping.F(t);
  const double grow = std::exp(half_F);
  const double shrink = std::exp(-half_F);
  const double rho = erma.rho(t);
  const double x = grow * state.q / rho;
  const double b = rho * shrink * state.p - model.eta() * (erma.rhodot(t) - 0.5 * rho * f) * grow * state.q;
  return 0.5 * leach_form(x, b, erma.W(t) / model.eta(), params);
}

SymmetricMatrix3 tensor_invariant(const ErmakovSolution& erma, const PhaseState3& state) {
  require_in_grid(erma, state.t);
  const double rho = erma.rho(state.t);
  const double scaled_rhodot = erma.eta() * erma.rhodot(state.t);
  std::array<double, 3> x{}, b{};
  for (int m = 0; m < 3; ++m) {
    x[m] = state.q[m] / rho;
    b[m] = rho * state.p[m] - scaled_rhodot * state.q[m];
  }
  SymmetricMatrix3 out{};
  for (int m = 0; m < 3; ++m)
    for (int n = m; n < 3; ++n) out[m][n] = out[n][m] = 0.5 * (x[m] * x[n] + b[m] * b[n]);
  return out;
}

}  // namespace virinv
