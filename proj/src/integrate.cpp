#include "virinv/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "virinv/errors.hpp"

namespace virinv {

std::string to_string(Method method) {
  switch (method) {
    case Method::FixedRK4: return "rk4";
    case Method::AdaptiveRK45: return "rk45";
    case Method::Leapfrog: return "leapfrog";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "rk4") return Method::FixedRK4;
  if (name == "rk45") return Method::AdaptiveRK45;
  if (name == "leapfrog") return Method::Leapfrog;
  throw InvalidArgument("unknown integrator method '" + name + "'");
}

IntegratorSpec IntegratorSpec::adaptive(double tol) {
  IntegratorSpec s;
  s.abs_tol = tol;
  s.rel_tol = tol;
  return s;
}

IntegratorSpec IntegratorSpec::fixed_rk4(double step) {
  IntegratorSpec s;
  s.method = Method::FixedRK4;
  s.h0 = step;
  s.h_min = std::min(s.h_min, step);
  s.h_max = std::max(s.h_max, step);
  return s;
}

IntegratorSpec IntegratorSpec::leapfrog(double step) {
  IntegratorSpec s = fixed_rk4(step);
  s.method = Method::Leapfrog;
  return s;
}

void IntegratorSpec::validate() const {
  if (!(abs_tol > 0) || !(rel_tol > 0)) throw InvalidArgument("integrator tolerances must be positive");
  if (!(h_min > 0) || !(h_min <= h0) || !(h0 <= h_max))
    throw InvalidArgument("integrator steps must satisfy 0 < h_min <= h0 <= h_max");
}

// ---------------------------------------------------------------------------

Trajectory::Trajectory(std::size_t dim, std::vector<double> times, std::vector<double> values,
                       std::vector<double> derivs)
    : dim_(dim), times_(std::move(times)), values_(std::move(values)), derivs_(std::move(derivs)) {
  if (dim_ == 0 || times_.empty()) throw InvalidArgument("trajectory must be non-empty");
  if (values_.size() != dim_ * times_.size() || derivs_.size() != values_.size())
    throw InvalidArgument("trajectory storage size mismatch");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1])) throw InvalidArgument("trajectory times must increase strictly");
}

std::vector<double> Trajectory::component(std::size_t k) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = value(i, k);
  return out;
}

std::size_t Trajectory::locate(double t) const {
  if (!contains(t)) throw OutOfGrid("time outside the sampled trajectory");
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.end()) return times_.size() - 1;
  return static_cast<std::size_t>(it - times_.begin()) - 1;
}

double Trajectory::at(double t, std::size_t k) const {
  const std::size_t i = locate(t);
  if (times_[i] == t || i + 1 == size()) return value(i, k);
  const double h = times_[i + 1] - times_[i];
  const double s = (t - times_[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * value(i, k) + h10 * h * derivative(i, k) + h01 * value(i + 1, k) + h11 * h * derivative(i + 1, k);
}

std::vector<double> Trajectory::at(double t) const {
  std::vector<double> out(dim_);
  for (std::size_t k = 0; k < dim_; ++k) out[k] = at(t, k);
  return out;
}

double Trajectory::derivative_at(double t, std::size_t k) const {
  const std::size_t i = locate(t);
  if (times_[i] == t || i + 1 == size()) return derivative(i, k);
  const double h = times_[i + 1] - times_[i];
  const double s = (t - times_[i]) / h;
  const double d00 = 6 * s * (s - 1) / h;
  const double d10 = (1 - s) * (1 - 3 * s);
  const double d01 = -d00;
  const double d11 = s * (3 * s - 2);
  return d00 * value(i, k) + d10 * derivative(i, k) + d01 * value(i + 1, k) + d11 * derivative(i + 1, k);
}

// ---------------------------------------------------------------------------

namespace {

using Vec = std::vector<double>;

void check_finite(std::span<const double> y, double t) {
  for (double v : y)
    if (!std::isfinite(v)) throw NonFiniteState("state left the finite domain at t = " + std::to_string(t));
}

struct Recorder {
  std::size_t dim;
  std::vector<double> values;
  std::vector<double> derivs;

  void record(const VectorField& rhs, double t, const Vec& y, Vec& scratch) {
    rhs(t, y, scratch);
    check_finite(scratch, t);
    values.insert(values.end(), y.begin(), y.end());
    derivs.insert(derivs.end(), scratch.begin(), scratch.end());
  }
};

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

class DormandPrince {
 public:
  DormandPrince(const VectorField& rhs, const IntegratorSpec& spec, std::size_t n)
      : k1(n), rhs_(rhs), spec_(spec), n_(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n) {}

  // Advances y from t to target exactly. k1 must hold rhs(t, y) on entry
  // and holds rhs(target, y) on exit.
  void advance(double& t, Vec& y, double target, double& h, const StepGuard& guard) {
    while (t < target) {
      const double remaining = target - t;
      bool clamped = false;
      double step = std::min(h, spec_.h_max);
      if (step >= remaining * (1.0 - 1e-12)) {
        step = remaining;
        clamped = true;
      }
      const double err = attempt(t, y, step);
      if (err <= 1.0) {
        t = clamped ? target : t + step;
        std::swap(y, ynew);
        std::swap(k1, k7);
        check_finite(y, t);
        if (guard) guard(t, y);
        const double grow = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
        const double proposed = step * grow;
        h = clamped ? std::max(h, proposed) : proposed;
      } else {
        h = step * std::max(0.2, 0.9 * std::pow(err, -0.2));
        if (h < spec_.h_min)
          throw StepSizeUnderflow("adaptive step fell below h_min at t = " + std::to_string(t));
      }
    }
  }

  Vec k1;

 private:
  double attempt(double t, const Vec& y, double h) {
    for (std::size_t i = 0; i < n_; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    rhs_(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < n_; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs_(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < n_; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs_(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < n_; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs_(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < n_; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs_(t + h, tmp, k6);
    for (std::size_t i = 0; i < n_; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    rhs_(t + h, ynew, k7);

    double sum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale = spec_.abs_tol + spec_.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double r = e / scale;
      sum += r * r;
    }
    const double err = std::sqrt(sum / static_cast<double>(n_));
    return std::isfinite(err) ? err : std::numeric_limits<double>::infinity();
  }

  const VectorField& rhs_;
  const IntegratorSpec& spec_;
  std::size_t n_;
  Vec k2, k3, k4, k5, k6, k7, tmp, ynew;
};

void rk4_step(const VectorField& rhs, double t, Vec& y, double h, Vec& k1, Vec& k2, Vec& k3, Vec& k4, Vec& tmp) {
  const std::size_t n = y.size();
  rhs(t, y, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  rhs(t + 0.5 * h, tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  rhs(t + 0.5 * h, tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
  rhs(t + h, tmp, k4);
  for (std::size_t i = 0; i < n; ++i) y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
}

// Kick-drift-kick on y = (q, p).
void leapfrog_step(const VectorField& rhs, double t, Vec& y, double h, Vec& dy) {
  const std::size_t half = y.size() / 2;
  rhs(t, y, dy);
  for (std::size_t i = half; i < y.size(); ++i) y[i] += 0.5 * h * dy[i];
  rhs(t + 0.5 * h, y, dy);
  for (std::size_t i = 0; i < half; ++i) y[i] += h * dy[i];
  rhs(t + h, y, dy);
  for (std::size_t i = half; i < y.size(); ++i) y[i] += 0.5 * h * dy[i];
}

}  // namespace

Trajectory integrate_ode(const VectorField& rhs, std::span<const double> y0, const TimeGrid& grid,
                         const IntegratorSpec& spec, const StepGuard& guard) {
  spec.validate();
  const std::size_t n = y0.size();
  if (n == 0) throw InvalidArgument("empty initial state");
  if (spec.method == Method::Leapfrog && n % 2 != 0)
    throw InvalidArgument("leapfrog needs an even-dimensional (q, p) state");
  check_finite(y0, grid.t_start());

  Vec y(y0.begin(), y0.end());
  Vec scratch(n);
  Recorder rec{n, {}, {}};
  rec.values.reserve(n * grid.size());
  rec.derivs.reserve(n * grid.size());
  double t = grid.t_start();
  rec.record(rhs, t, y, scratch);

  if (spec.method == Method::AdaptiveRK45) {
    DormandPrince dp(rhs, spec, n);
    dp.k1 = scratch;
    double h = spec.h0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      dp.advance(t, y, grid[i], h, guard);
      rec.values.insert(rec.values.end(), y.begin(), y.end());
      rec.derivs.insert(rec.derivs.end(), dp.k1.begin(), dp.k1.end());
    }
  } else {
    Vec k1(n), k2(n), k3(n), k4(n), tmp(n);
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double span = grid[i] - grid[i - 1];
      const auto substeps = static_cast<std::size_t>(std::max(1.0, std::ceil(span / spec.h0 - 1e-9)));
      const double h = span / static_cast<double>(substeps);
      for (std::size_t s = 0; s < substeps; ++s) {
        const double ts = grid[i - 1] + static_cast<double>(s) * h;
        if (spec.method == Method::FixedRK4)
          rk4_step(rhs, ts, y, h, k1, k2, k3, k4, tmp);
        else
          leapfrog_step(rhs, ts, y, h, k1);
        check_finite(y, ts + h);
        if (guard) guard(ts + h, y);
      }
      t = grid[i];
      rec.record(rhs, t, y, scratch);
    }
  }
  std::vector<double> times(grid.samples().begin(), grid.samples().end());
  return Trajectory(n, std::move(times), std::move(rec.values), std::move(rec.derivs));
}

Trajectory integrate_hamiltonian(const OscillatorModel& model, const PhaseState& s0, const TimeGrid& grid,
                                 const IntegratorSpec& spec) {
  validate(s0);
  if (s0.t != grid.t_start()) throw InvalidArgument("initial state time must equal the grid start");
  const bool damped = !model.damping().is_zero();
  if (damped && spec.method == Method::Leapfrog)
    throw InvalidArgument("leapfrog is only available for undamped models");
  const double inv_eta = 1.0 / model.eta();
  VectorField rhs = [&model, damped, inv_eta](double t, std::span<const double> y, std::span<double> dy) {
    const double w2 = model.omega2()(t);
    if (!damped) {
      dy[0] = y[1] * inv_eta;
      dy[1] = -w2 * y[0] * inv_eta;
    } else {
      const double F = model.damping().F(t);
      dy[0] = std::exp(-F) * y[1] * inv_eta;
      dy[1] = -std::exp(F) * w2 * y[0] * inv_eta;
    }
  };
  const std::array<double, 2> y0{s0.q, s0.p};
  return integrate_ode(rhs, y0, grid, spec);
}

Trajectory integrate_hamiltonian3(const OscillatorModel& model, const PhaseState3& s0, const TimeGrid& grid,
                                  const IntegratorSpec& spec) {
  validate(s0);
  if (s0.t != grid.t_start()) throw InvalidArgument("initial state time must equal the grid start");
  if (!model.damping().is_zero()) throw InvalidArgument("three-dimensional oscillator must be undamped");
  const double inv_eta = 1.0 / model.eta();
  VectorField rhs = [&model, inv_eta](double t, std::span<const double> y, std::span<double> dy) {
    const double w2 = model.omega2()(t);
    for (int m = 0; m < 3; ++m) {
      dy[m] = y[3 + m] * inv_eta;
      dy[3 + m] = -w2 * y[m] * inv_eta;
    }
  };
  const std::array<double, 6> y0{s0.q[0], s0.q[1], s0.q[2], s0.p[0], s0.p[1], s0.p[2]};
  return integrate_ode(rhs, y0, grid, spec);
}

PhaseState phase_state(const Trajectory& traj, std::size_t i) {
  return {traj.value(i, 0), traj.value(i, 1), traj.time(i)};
}

PhaseState3 phase_state3(const Trajectory& traj, std::size_t i) {
  PhaseState3 s;
  for (int m = 0; m < 3; ++m) {
    s.q[m] = traj.value(i, m);
    s.p[m] = traj.value(i, 3 + m);
  }
  s.t = traj.time(i);
  return s;
}

double quad(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(tol > 0)) throw InvalidArgument("quadrature tolerance must be positive");
  if (a == b) return 0.0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  const double roundoff_rel = 64 * std::numeric_limits<double>::epsilon();
  // Boost's tolerance is relative to the L1 norm; a single-panel pass sizes it.
  double error = 0.0;
  double l1 = 0.0;
  GK::integrate(f, a, b, 0, 0.0, &error, &l1);
  const double rel = std::max(roundoff_rel, tol / std::max(l1, std::numeric_limits<double>::min()));
  const double value = GK::integrate(f, a, b, 15, rel, &error, &l1);
  const double roundoff = roundoff_rel * l1;
  if (!std::isfinite(value) || (error > tol && error > roundoff)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "quadrature error estimate %.3e exceeds tolerance %.3e", error, tol);
    throw ToleranceNotMet(buf);
  }
  return value;
}

std::vector<double> differentiate(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = t.size();
  if (n != y.size()) throw InvalidArgument("differentiate: size mismatch");
  if (n < 2) throw InvalidArgument("differentiate: need at least 2 samples");
  std::vector<double> d(n);
  if (n == 2) {
    d[0] = d[1] = (y[1] - y[0]) / (t[1] - t[0]);
    return d;
  }
  const double h = (t[n - 1] - t[0]) / static_cast<double>(n - 1);
  bool uniform = n >= 5;
  for (std::size_t i = 1; uniform && i < n; ++i)
    if (std::abs((t[i] - t[i - 1]) - h) > 1e-9 * h) uniform = false;

  if (uniform) {
    const double c = 1.0 / (12.0 * h);
    d[0] = c * (-25 * y[0] + 48 * y[1] - 36 * y[2] + 16 * y[3] - 3 * y[4]);
    d[1] = c * (-3 * y[0] - 10 * y[1] + 18 * y[2] - 6 * y[3] + y[4]);
    for (std::size_t i = 2; i + 2 < n; ++i) d[i] = c * (y[i - 2] - 8 * y[i - 1] + 8 * y[i + 1] - y[i + 2]);
    d[n - 2] = c * (-y[n - 5] + 6 * y[n - 4] - 18 * y[n - 3] + 10 * y[n - 2] + 3 * y[n - 1]);
    d[n - 1] = c * (3 * y[n - 5] - 16 * y[n - 4] + 36 * y[n - 3] - 48 * y[n - 2] + 25 * y[n - 1]);
    return d;
  }

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = t[i] - t[i - 1];
    const double h2 = t[i + 1] - t[i];
    d[i] = -h2 / (h1 * (h1 + h2)) * y[i - 1] + (h2 - h1) / (h1 * h2) * y[i] + h1 / (h2 * (h1 + h2)) * y[i + 1];
  }
  {
    const double h1 = t[1] - t[0];
    const double h2 = t[2] - t[1];
    d[0] = -(2 * h1 + h2) / (h1 * (h1 + h2)) * y[0] + (h1 + h2) / (h1 * h2) * y[1] - h1 / (h2 * (h1 + h2)) * y[2];
  }
  {
    const double h1 = t[n - 2] - t[n - 3];
    const double h2 = t[n - 1] - t[n - 2];
    d[n - 1] = (2 * h2 + h1) / (h2 * (h1 + h2)) * y[n - 1] - (h1 + h2) / (h1 * h2) * y[n - 2] +
               h2 / (h1 * (h1 + h2)) * y[n - 3];
  }
  return d;
}

}  // namespace virinv
