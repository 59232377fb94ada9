#include <cmath>
#include <numbers>

#include <doctest.h>

#include "virinv/errors.hpp"
#include "virinv/integrate.hpp"

using namespace virinv;
using std::numbers::pi;

namespace {

void harmonic(double, std::span<const double> y, std::span<double> d) {
  d[0] = y[1];
  d[1] = -y[0];
}

double rk4_period_error(double h) {
  const std::vector<double> y0{1.0, 0.0};
  const auto traj = integrate_ode(harmonic, y0, TimeGrid::uniform(0.0, 2 * pi, 2), IntegratorSpec::fixed_rk4(h));
  return std::hypot(traj.value(1, 0) - 1.0, traj.value(1, 1));
}

}  // namespace

TEST_CASE("adaptive integration examples") {
  const std::vector<double> y0{1.0, 0.0};
  const auto traj = integrate_ode(harmonic, y0, TimeGrid::uniform(0.0, 2 * pi, 2), IntegratorSpec::adaptive(1e-10));
  CHECK(std::abs(traj.value(1, 0) - 1.0) <= 1e-8);
  CHECK(std::abs(traj.value(1, 1)) <= 1e-8);

  const std::vector<double> one{1.0};
  const auto expo = integrate_ode([](double, std::span<const double> y, std::span<double> d) { d[0] = y[0]; }, one,
                                  TimeGrid::uniform(0.0, 1.0, 2), {});
  CHECK(std::abs(expo.value(1, 0) - std::numbers::e) <= 1e-8);
}

TEST_CASE("blow-up is reported as step underflow") {
  const std::vector<double> one{1.0};
  const auto square = [](double, std::span<const double> y, std::span<double> d) { d[0] = y[0] * y[0]; };
  double reached = 0.0;
  try {
    integrate_ode(square, one, TimeGrid::uniform(0.0, 1.5, 151), {},
                  [&](double t, std::span<const double>) { reached = t; });
    FAIL("expected StepSizeUnderflow");
  } catch (const StepSizeUnderflow&) {
    CHECK(reached < 1.0);
  }
}

TEST_CASE("non-finite states are rejected") {
  const std::vector<double> one{1.0};
  const auto square = [](double, std::span<const double> y, std::span<double> d) { d[0] = y[0] * y[0]; };
  CHECK_THROWS_AS(integrate_ode(square, one, TimeGrid::uniform(0.0, 1.5, 4), IntegratorSpec::fixed_rk4(0.1)),
                  NonFiniteState);
  const std::vector<double> bad{NAN};
  CHECK_THROWS_AS(integrate_ode(square, bad, TimeGrid::uniform(0.0, 1.0, 2), {}), NonFiniteState);
}

TEST_CASE("integrator spec validation") {
  IntegratorSpec s;
  s.abs_tol = 0;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s = {};
  s.h_min = 1.0;
  s.h0 = 0.1;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  CHECK(parse_method("leapfrog") == Method::Leapfrog);
  CHECK_THROWS_AS(parse_method("euler"), InvalidArgument);
  const std::vector<double> odd{1.0};
  CHECK_THROWS_AS(integrate_ode(harmonic, odd, TimeGrid::uniform(0, 1, 2), IntegratorSpec::leapfrog(0.1)),
                  InvalidArgument);
}

TEST_CASE("hamiltonian integration examples") {
  const OscillatorModel unit(1.0, FrequencyProfile::constant(1.0));
  const auto a = integrate_hamiltonian(unit, {1, 0, 0}, TimeGrid::uniform(0.0, 2 * pi, 2), {});
  CHECK(std::abs(a.value(1, 0) - 1.0) <= 1e-8);
  CHECK(std::abs(a.value(1, 1)) <= 1e-8);

  // Omega^2 = 4: q = cos 2t, first zero at pi/4.
  const OscillatorModel fast(1.0, FrequencyProfile::constant(4.0));
  const auto b = integrate_hamiltonian(fast, {1, 0, 0}, TimeGrid::uniform(0.0, 1.0, 101), {});
  double lo = 0.7, hi = 0.9;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (b.at(mid, 0) > 0 ? lo : hi) = mid;
  }
  CHECK(std::abs(lo - pi / 4) <= 1e-6);

  // eta = 2: q = sin(t/2), p = cos(t/2).
  const OscillatorModel slow(2.0, FrequencyProfile::constant(1.0));
  const auto c = integrate_hamiltonian(slow, {0, 1, 0}, TimeGrid::uniform(0.0, pi, 2), {});
  CHECK(std::abs(c.value(1, 0) - 1.0) <= 1e-8);
  CHECK(std::abs(c.value(1, 1)) <= 1e-8);

  CHECK_THROWS_AS(integrate_hamiltonian(unit, {1, 0, 0.5}, TimeGrid::uniform(0.0, 1.0, 2), {}), InvalidArgument);
  const OscillatorModel damped(1.0, FrequencyProfile::constant(1.0), DampingProfile::linear(0.1));
  CHECK_THROWS_AS(integrate_hamiltonian(damped, {1, 0, 0}, TimeGrid::uniform(0.0, 1.0, 2), IntegratorSpec::leapfrog(0.01)),
                  InvalidArgument);
}

TEST_CASE("damped equations of motion") {
  // F = g t: q'' + g q' + q = 0 for eta = 1.
  const double g = 0.1;
  const OscillatorModel damped(1.0, FrequencyProfile::constant(1.0), DampingProfile::linear(g));
  const auto traj = integrate_hamiltonian(damped, {1, 0, 0}, TimeGrid::uniform(0.0, 10.0, 11), {});
  const double w = std::sqrt(1 - g * g / 4);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.time(i);
    const double q = std::exp(-g * t / 2) * (std::cos(w * t) + g / (2 * w) * std::sin(w * t));
    CHECK(std::abs(traj.value(i, 0) - q) <= 1e-8);
  }
}

TEST_CASE("quadrature examples") {
  CHECK(quad([](double) { return 1.0; }, 0.0, 1.0, 1e-12) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(quad([](double t) { return std::sin(t); }, 0.0, pi, 1e-10) - 2.0) <= 1e-10);
  CHECK(std::abs(quad([](double t) { return t * t * t; }, 0.0, 1.0, 1e-12) - 0.25) <= 1e-12);
  CHECK(std::abs(quad([](double t) { return std::exp(-t * t); }, 0.0, INFINITY, 1e-10) - std::sqrt(pi) / 2) <= 1e-10);
  CHECK_THROWS_AS(quad([](double t) { return std::sin(1.0 / t) / t; }, 0.0, 1.0, 1e-12), ToleranceNotMet);
}

TEST_CASE("dense output") {
  const std::vector<double> y0{1.0, 0.0};
  const auto traj = integrate_ode(harmonic, y0, TimeGrid::uniform(0.0, 10.0, 201), {});
  for (double t : {0.013, 1.37, 5.55, 9.99}) {
    CHECK(std::abs(traj.at(t, 0) - std::cos(t)) <= 1e-6);
    CHECK(std::abs(traj.derivative_at(t, 0) + std::sin(t)) <= 1e-4);
  }
  CHECK(traj.at(traj.time(17), 1) == traj.value(17, 1));
  CHECK_THROWS_AS(traj.at(10.5), OutOfGrid);
  CHECK_THROWS_AS(traj.at(-1e-9), OutOfGrid);
}

TEST_CASE("differentiation") {
  std::vector<double> t, y;
  for (int i = 0; i <= 200; ++i) {
    t.push_back(0.05 * i);
    y.push_back(std::sin(t.back()));
  }
  const auto d = differentiate(t, y);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(std::abs(d[i] - std::cos(t[i])) <= 1e-5);
  const std::vector<double> tn{0.0, 0.1, 0.3, 0.35}, yn{0.0, 0.01, 0.09, 0.1225};
  const auto dn = differentiate(tn, yn);
  for (std::size_t i = 0; i < tn.size(); ++i) CHECK(dn[i] == doctest::Approx(2 * tn[i]).epsilon(1e-12).scale(1));
}

TEST_CASE("property: RK4 is fourth order") {
  const double e1 = rk4_period_error(2 * pi / 40);
  const double e2 = rk4_period_error(2 * pi / 80);
  const double order = std::log2(e1 / e2);
  CHECK(order == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("property: leapfrog energy error is bounded without secular drift") {
  // Kick-drift-kick conserves the modified energy p^2/2 + (1 - h^2/4) q^2/2
  // exactly; the true energy oscillates with relative amplitude near h^2/4.
  const double h = 2 * pi / 100;
  const std::size_t periods = 10000;
  const OscillatorModel unit(1.0, FrequencyProfile::constant(1.0));
  const auto grid = TimeGrid::uniform(0.0, 2 * pi * periods, periods * 25 + 1);
  const auto traj = integrate_hamiltonian(unit, {1, 0, 0}, grid, IntegratorSpec::leapfrog(h));
  const double H0 = 0.5;
  const double shadow0 = 0.5 * (1 - h * h / 4);
  double early = 0, late = 0, shadow_drift = 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double q = traj.value(i, 0), p = traj.value(i, 1);
    const double err = std::abs(0.5 * (p * p + q * q) - H0) / H0;
    (i < traj.size() / 10 ? early : late) = std::max(i < traj.size() / 10 ? early : late, err);
    shadow_drift = std::max(shadow_drift, std::abs(0.5 * (p * p + (1 - h * h / 4) * q * q) - shadow0));
  }
  CHECK(late <= h * h / 4 * 1.01);
  CHECK(late <= early * 1.01);
  CHECK(shadow_drift <= 1e-10);
}

TEST_CASE("property: integration is deterministic") {
  const OscillatorModel m(1.0, FrequencyProfile::cosine(1.0, 0.2, 0.7));
  const auto grid = TimeGrid::uniform(0.0, 30.0, 301);
  const auto a = integrate_hamiltonian(m, {0.3, -0.4, 0}, grid, {});
  const auto b = integrate_hamiltonian(m, {0.3, -0.4, 0}, grid, {});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < 2; ++k) CHECK(a.value(i, k) == b.value(i, k));
}
