#include "virinv/virial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "virinv/errors.hpp"

namespace virinv {

namespace {

constexpr double kPi = std::numbers::pi;

// Phase angle theta in [0, pi] with z = 1/(2Q) + Lambda cos(theta); the
// closed-form time is monotone in theta, which keeps the inversion
// well conditioned near the turning points.
double time_of_theta(const VirialModel& model, double theta) {
  const double sq = std::sqrt(model.Q);
  return model.Lambda * std::sin(theta) / sq + theta / (2.0 * model.Q * sq);
}

double theta_of_time(const VirialModel& model, double half_cycle_time) {
  const auto f = [&](double theta) { return time_of_theta(model, theta) - half_cycle_time; };
  const double f_lo = f(0.0);
  const double f_hi = f(kPi);
  if (f_lo == 0.0) return 0.0;
  if (f_hi == 0.0) return kPi;
  if (f_lo > 0 || f_hi < 0) throw ConvergenceFailure("virial inversion could not bracket the phase");
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 1);
  std::uintmax_t max_iter = 200;
  const auto [lo, hi] = boost::math::tools::bisect(f, 0.0, kPi, tol, max_iter);
  if (max_iter >= 200) throw ConvergenceFailure("virial inversion did not converge");
  return 0.5 * (lo + hi);
}

double reduced_time(const VirialModel& model, double t, bool& descending) {
  const double p = model.period();
  double tau = std::fmod(t, p);
  if (tau < 0) tau += p;
  descending = tau <= 0.5 * p;
  return descending ? tau : p - tau;
}

}  // namespace

void VirialModel::validate_oscillatory() const {
  if (!(Q > 0) || !std::isfinite(Q)) throw InvalidArgument("virial Q must be positive");
  if (sign_E != -1) throw InvalidArgument("oscillatory virial branch requires negative total energy");
  if (!(Lambda > 0) || Lambda > centre() * (1.0 + 1e-12))
    throw InvalidArgument("virial Lambda must satisfy 0 < Lambda <= 1/(2Q)");
}

double VirialModel::period() const { return kPi / std::pow(Q, 1.5); }

ClusterScales::ClusterScales(double N_, double m_, double A0_) : N(N_), m(m_), A0(A0_) {
  if (!(N >= 1) || !(m > 0) || !(A0 > 0)) throw InvalidArgument("cluster scales need N >= 1, m > 0, A0 > 0");
}

double ClusterScales::t0() const { return std::sqrt(9.0 * kPi / 8.0) * A0 / (N * m); }

double gaussian_density(const ClusterScales& scales, double r, double d) {
  if (!(d > 0)) throw InvalidArgument("dispersion radius must be positive");
  if (!(r >= 0)) throw DomainError("radius must be >= 0");
  if (std::isinf(r)) return 0.0;
  return scales.N * scales.m / (d * d * d * std::pow(kPi, 1.5)) * std::exp(-(r * r) / (d * d));
}

double time_of_z(const VirialModel& model, double z) {
  model.validate_oscillatory();
  const double u = z - model.centre();
  const double L = model.Lambda;
  // Allow a few ulps of slack so sampled turning points stay in band.
  const double slack = 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(z));
  if (!(std::abs(u) <= L + slack))
    throw OutOfBand("z = " + std::to_string(z) + " outside the oscillation band");
  const double ratio = std::clamp(u / L, -1.0, 1.0);
  const double radicand = std::max(0.0, L * L - u * u);
  const double sq = std::sqrt(model.Q);
  return std::sqrt(radicand) / sq + std::acos(ratio) / (2.0 * model.Q * sq);
}

double z_of_time(const VirialModel& model, double t) {
  model.validate_oscillatory();
  bool descending = true;
  const double theta = theta_of_time(model, reduced_time(model, t, descending));
  return model.centre() + model.Lambda * std::cos(theta);
}

double zdot_of_time(const VirialModel& model, double t) {
  model.validate_oscillatory();
  bool descending = true;
  const double theta = theta_of_time(model, reduced_time(model, t, descending));
  const double z = model.centre() + model.Lambda * std::cos(theta);
  if (z <= 0) return 0.0;
  const double speed = model.Lambda * std::sin(theta) * std::sqrt(model.Q) / z;
  return descending ? -speed : speed;
}

bool special_case_lambda(const VirialModel& model) {
  return std::abs(model.Lambda - 0.5 / model.Q) <= 1e-12;
}

double first_integral_residual(const VirialModel& model, double z, double zdot) {
  const double u = z - 0.5 / model.Q;
  return z * z * zdot * zdot - (model.Lambda * model.Lambda - model.Q * u * u);
}

}  // namespace virinv
