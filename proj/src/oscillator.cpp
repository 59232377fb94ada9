#include "virinv/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

// Boost 1.74 pchip calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include "virinv/errors.hpp"

namespace virinv {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be finite");
}

}  // namespace

void validate(const PhaseState& s) {
  require_finite(s.q, "q");
  require_finite(s.p, "p");
  require_finite(s.t, "t");
}

void validate(const PhaseState3& s) {
  for (int m = 0; m < 3; ++m) {
    require_finite(s.q[m], "q component");
    require_finite(s.p[m], "p component");
  }
  require_finite(s.t, "t");
}

// ---------------------------------------------------------------------------

struct FrequencyProfile::TableInterpolant {
  using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
  TableInterpolant(std::vector<double> t, std::vector<double> y) : spline(std::move(t), std::move(y)) {}
  Pchip spline;
};

FrequencyProfile::FrequencyProfile(Kind kind) : kind_(std::move(kind)) {}

FrequencyProfile FrequencyProfile::constant(double omega2) {
  require_finite(omega2, "Omega^2");
  return FrequencyProfile(Constant{omega2});
}

FrequencyProfile FrequencyProfile::cosine(double a, double b, double omega) {
  require_finite(a, "a");
  require_finite(b, "b");
  require_finite(omega, "omega");
  return FrequencyProfile(Cosine{a, b, omega});
}

FrequencyProfile FrequencyProfile::sine(double a, double b, double omega) {
  require_finite(a, "a");
  require_finite(b, "b");
  require_finite(omega, "omega");
  return FrequencyProfile(Sine{a, b, omega});
}

FrequencyProfile FrequencyProfile::from_potential(const PulsedPotential& potential, double r0) {
  // Fails early if r0 is outside the family's domain.
  (void)radial_frequency_squared(potential, r0, 0.0);
  return FrequencyProfile(FromPotential{potential, r0});
}

FrequencyProfile FrequencyProfile::tabulated(std::vector<double> t, std::vector<double> omega2) {
  if (t.size() != omega2.size()) throw InvalidArgument("tabulated profile: size mismatch");
  if (t.size() < 4) throw InvalidArgument("tabulated profile needs at least 4 points");
  for (std::size_t i = 0; i < t.size(); ++i) {
    require_finite(t[i], "table time");
    require_finite(omega2[i], "table Omega^2");
    if (i > 0 && !(t[i] > t[i - 1])) throw InvalidArgument("tabulated profile: times must increase strictly");
  }
  FrequencyProfile profile(Tabulated{t, omega2});
  profile.table_ = std::make_shared<TableInterpolant>(std::move(t), std::move(omega2));
  return profile;
}

FrequencyProfile FrequencyProfile::perturbed(FrequencyProfile base, double epsilon, FrequencyProfile delta) {
  require_finite(epsilon, "epsilon");
  return FrequencyProfile(Perturbed{std::make_shared<const FrequencyProfile>(std::move(base)), epsilon,
                                    std::make_shared<const FrequencyProfile>(std::move(delta))});
}

double FrequencyProfile::operator()(double t) const {
  return std::visit(
      Overloaded{
          [](const Constant& k) { return k.omega2; },
          [t](const Cosine& k) { return k.a + k.b * std::cos(k.omega * t); },
          [t](const Sine& k) { return k.a + k.b * std::sin(k.omega * t); },
          [t](const FromPotential& k) { return radial_frequency_squared(k.potential, k.r0, t); },
          [t, this](const Tabulated& k) {
            if (!(t >= k.t.front() && t <= k.t.back()))
              throw DomainError("tabulated profile evaluated outside its table");
            return table_->spline(t);
          },
          [t](const Perturbed& k) { return (*k.base)(t) + k.epsilon * (*k.delta)(t); },
      },
      kind_);
}

bool FrequencyProfile::is_constant() const {
  return std::visit(Overloaded{
                        [](const Constant&) { return true; },
                        [](const Cosine& k) { return k.b == 0.0 || k.omega == 0.0; },
                        [](const Sine& k) { return k.b == 0.0 || k.omega == 0.0; },
                        [](const FromPotential& k) { return k.potential.m0() == 0.0; },
                        [](const Tabulated&) { return false; },
                        [](const Perturbed& k) {
                          return k.base->is_constant() && (k.epsilon == 0.0 || k.delta->is_constant());
                        },
                    },
                    kind_);
}

std::string FrequencyProfile::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const Constant& k) { os << "constant(" << k.omega2 << ")"; },
                 [&](const Cosine& k) { os << "cosine(" << k.a << ", " << k.b << ", " << k.omega << ")"; },
                 [&](const Sine& k) { os << "sine(" << k.a << ", " << k.b << ", " << k.omega << ")"; },
                 [&](const FromPotential& k) {
                   os << "potential(" << to_string(k.potential.family()) << ", m0=" << k.potential.m0()
                      << ", omega=" << k.potential.omega() << ", r0=" << k.r0 << ")";
                 },
                 [&](const Tabulated& k) { os << "tabulated(" << k.t.size() << " points)"; },
                 [&](const Perturbed& k) {
                   os << k.base->describe() << " + " << k.epsilon << " * " << k.delta->describe();
                 },
             },
             kind_);
  return os.str();
}

// ---------------------------------------------------------------------------

DampingProfile DampingProfile::linear(double rate) {
  require_finite(rate, "damping rate");
  DampingProfile d;
  if (rate != 0.0) {
    d.kind_ = Kind::Linear;
    d.rate_ = rate;
  }
  return d;
}

DampingProfile DampingProfile::custom(Function F, Function f) {
  if (!F || !f) throw InvalidArgument("custom damping needs both F and f");
  DampingProfile d;
  d.kind_ = Kind::Custom;
  d.F_ = std::move(F);
  d.f_ = std::move(f);
  return d;
}

double DampingProfile::F(double t) const {
  switch (kind_) {
    case Kind::None: return 0.0;
    case Kind::Linear: return rate_ * t;
    case Kind::Custom: return F_(t);
  }
  return 0.0;
}

double DampingProfile::f(double t) const {
  switch (kind_) {
    case Kind::None: return 0.0;
    case Kind::Linear: return rate_;
    case Kind::Custom: return f_(t);
  }
  return 0.0;
}

double DampingProfile::fdot(double t) const {
  if (kind_ != Kind::Custom) return 0.0;
  const double h = 1e-4 * std::max(1.0, std::abs(t));
  return (f_(t + h) - f_(t - h)) / (2.0 * h);
}

double DampingProfile::consistency_error(double t) const {
  if (kind_ != Kind::Custom) return 0.0;
  const double h = 1e-4 * std::max(1.0, std::abs(t));
  // Fourth-order central difference.
  const double dF = (-F_(t + 2 * h) + 8 * F_(t + h) - 8 * F_(t - h) + F_(t - 2 * h)) / (12.0 * h);
  return std::abs(dF - f_(t));
}

std::string DampingProfile::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::None: os << "none"; break;
    case Kind::Linear: os << "linear(" << rate_ << ")"; break;
    case Kind::Custom: os << "custom"; break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------

OscillatorModel::OscillatorModel(double eta, FrequencyProfile omega2, DampingProfile damping)
    : eta_(eta), omega2_(std::move(omega2)), damping_(std::move(damping)) {
  if (!(eta > 0) || !std::isfinite(eta)) throw InvalidArgument("eta must be a positive finite number");
}

double OscillatorModel::pinney_omega2(double t) const {
  const double w2 = omega2_(t);
  if (damping_.is_zero()) return w2;
  const double f = damping_.f(t);
  return w2 - eta_ * eta_ * (0.25 * f * f + 0.5 * damping_.fdot(t));
}

// ---------------------------------------------------------------------------

TimeGrid::TimeGrid(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.size() < 2) throw InvalidArgument("time grid needs at least 2 samples");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    require_finite(samples_[i], "grid time");
    if (i > 0 && !(samples_[i] > samples_[i - 1]))
      throw InvalidArgument("time grid must be strictly increasing");
  }
}

TimeGrid TimeGrid::uniform(double t_start, double t_end, std::size_t count) {
  if (count < 2) throw InvalidArgument("time grid needs at least 2 samples");
  if (!(t_start < t_end)) throw InvalidArgument("time grid requires t_start < t_end");
  std::vector<double> s(count);
  const double span = t_end - t_start;
  const auto last = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) s[i] = t_start + span * (static_cast<double>(i) / last);
  s.back() = t_end;
  return TimeGrid(std::move(s));
}

bool TimeGrid::is_uniform(double rel_tol) const {
  const double h = (t_end() - t_start()) / static_cast<double>(size() - 1);
  for (std::size_t i = 1; i < size(); ++i)
    if (std::abs((samples_[i] - samples_[i - 1]) - h) > rel_tol * h) return false;
  return true;
}

double hamiltonian(const OscillatorModel& model, const PhaseState& state) {
  return (state.p * state.p + model.omega2()(state.t) * state.q * state.q) / (2.0 * model.eta());
}

}  // namespace virinv
