#include <cmath>
#include <numbers>

#include <doctest.h>

#include "virinv/errors.hpp"
#include "virinv/potentials.hpp"

using namespace virinv;
using std::numbers::pi;

namespace {

double fd2(const PulsedPotential& pot, double r, double t, double h = 1e-4) {
  return (potential_value(pot, r + h, t) - 2 * potential_value(pot, r, t) + potential_value(pot, r - h, t)) / (h * h);
}

}  // namespace

TEST_CASE("mass law") {
  CHECK(mass_law(0.0, 3.0, 1.7) == 1.0);
  CHECK(mass_law(0.5, 1.0, pi / 2) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(mass_law(1.0, 2.0, 0.0) == 1.0);
}

TEST_CASE("potential values") {
  CHECK(potential_value(PulsedPotential::plummer(), 0.0, 0.0) == -1.0);
  CHECK(potential_value(PulsedPotential::dehnen(1.0), 1.0, 0.0) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(potential_value(PulsedPotential::hernquist(), 1.0, 0.0) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(potential_value(PulsedPotential::jaffe(), 1.0, 0.0) == doctest::Approx(std::log(0.5)).epsilon(1e-15));
  CHECK(potential_value(PulsedPotential::harmonic(), 2.0, 0.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(potential_value(PulsedPotential::jaffe(), 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(potential_value(PulsedPotential::plummer(), -1.0, 0.0), DomainError);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(PulsedPotential::dehnen(2.0), InvalidArgument);
  CHECK_THROWS_AS(PulsedPotential::dehnen(-0.1), InvalidArgument);
  CHECK_THROWS_AS(PulsedPotential::plummer(-0.1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(PulsedPotential::plummer(0.1, 0.0), InvalidArgument);
  CHECK_NOTHROW(PulsedPotential::plummer(0.0, 0.0));
  CHECK(parse_potential_family("dehnen") == PotentialFamily::Dehnen);
  CHECK_THROWS_AS(parse_potential_family("kepler"), InvalidArgument);
}

TEST_CASE("radial frequency") {
  CHECK(radial_frequency_squared(PulsedPotential::plummer(), 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  // V is even in r, so V(-h) = V(h).
  const auto plummer = PulsedPotential::plummer();
  const double h = 1e-5;
  const double even_fd = 2 * (potential_value(plummer, h, 0.0) - potential_value(plummer, 0.0, 0.0)) / (h * h);
  CHECK(even_fd == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(radial_frequency_squared(PulsedPotential::harmonic(0.3, 2.0), 7.0, pi / 4) ==
        doctest::Approx(1.3).epsilon(1e-15));
  CHECK(radial_frequency_squared(PulsedPotential::plummer(0.2, 1.0), 0.0, pi / 2) ==
        doctest::Approx(1.2).epsilon(1e-15));
  CHECK_THROWS_AS(radial_frequency_squared(PulsedPotential::jaffe(), 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(radial_frequency_squared(PulsedPotential::dehnen(0.5), 0.0, 0.0), DomainError);
}

TEST_CASE("particle energy") {
  CHECK(particle_energy(PulsedPotential::plummer(), 0.0, 0.0, 0.0) == -1.0);
  CHECK(particle_energy(PulsedPotential::plummer(), 0.0, 0.0, std::sqrt(2.0)) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(particle_energy(PulsedPotential::harmonic(), 0.0, 1.0, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("property: Dehnen(1) is Hernquist") {
  const auto d = PulsedPotential::dehnen(1.0);
  const auto h = PulsedPotential::hernquist();
  for (int i = 0; i <= 1000; ++i) {
    const double r = 0.1 * i;
    CHECK(std::abs(potential_value(d, r, 0.0) - potential_value(h, r, 0.0)) <= 1e-12);
  }
}

TEST_CASE("property: Dehnen approaches Jaffe") {
  const auto d = PulsedPotential::dehnen(2.0 - 1e-6);
  const auto j = PulsedPotential::jaffe();
  for (int i = 0; i <= 99; ++i) {
    const double r = 0.1 + 0.1 * i;
    CHECK(std::abs(potential_value(d, r, 0.0) - potential_value(j, r, 0.0)) <= 1e-4);
  }
}

TEST_CASE("property: unpulsed potentials are static and pulsation factorizes") {
  const PulsedPotential fams[] = {PulsedPotential::plummer(0.3, 1.1), PulsedPotential::dehnen(0.5, 0.3, 1.1),
                                  PulsedPotential::harmonic(0.3, 1.1), PulsedPotential::jaffe(0.3, 1.1),
                                  PulsedPotential::hernquist(0.3, 1.1)};
  for (const auto& pot : fams) {
    const PulsedPotential still(pot.family(), 0.0, 0.0, pot.gamma());
    for (double r : {0.2, 1.0, 3.5}) {
      CHECK(potential_value(still, r, 0.0) == potential_value(still, r, 17.3));
      for (double t : {0.4, 2.0, 5.5}) {
        const double m = mass_law(pot.m0(), pot.omega(), t);
        CHECK(potential_value(pot, r, t) == doctest::Approx(potential_value(still, r, 0.0) * m).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("property: second derivative matches finite differences") {
  const PulsedPotential fams[] = {PulsedPotential::plummer(0.3, 1.1),    PulsedPotential::dehnen(0.0, 0.3, 1.1),
                                  PulsedPotential::dehnen(0.5, 0.3, 1.1), PulsedPotential::harmonic(0.3, 1.1),
                                  PulsedPotential::jaffe(0.3, 1.1),       PulsedPotential::hernquist(0.3, 1.1)};
  for (const auto& pot : fams) {
    for (double r : {0.3, 1.0, 2.5, 6.0}) {
      const double exact = radial_frequency_squared(pot, r, 0.9);
      CHECK(fd2(pot, r, 0.9) == doctest::Approx(exact).epsilon(1e-6));
    }
  }
}
