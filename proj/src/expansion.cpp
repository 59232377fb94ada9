#include "virinv/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "virinv/ermakov.hpp"
#include "virinv/errors.hpp"

namespace virinv {

void CascadeSpec::validate() const {
  if (!(epsilon > 0 && epsilon < 1)) throw InvalidArgument("cascade epsilon must lie in (0, 1)");
  if (max_order < 0) throw InvalidArgument("cascade order must be >= 0");
  if (max_order > kMaxCascadeOrder)
    throw OrderOverflow("cascade order " + std::to_string(max_order) + " exceeds the supported maximum " +
                        std::to_string(kMaxCascadeOrder));
  if (rho0 && !(*rho0 > 0)) throw InvalidArgument("rho_0 initial value must be positive");
  if (!(floor > 0)) throw InvalidArgument("singularity floor must be positive");
}

std::vector<double> series_power(const std::vector<double>& a, double power) {
  if (a.empty()) return {};
  if (a[0] == 0.0) throw DomainError("series_power needs a nonzero leading coefficient");
  std::vector<double> b(a.size());
  b[0] = std::pow(a[0], power);
  for (std::size_t k = 1; k < a.size(); ++k) {
    double sum = 0.0;
    for (std::size_t j = 1; j <= k; ++j)
      sum += ((power + 1.0) * static_cast<double>(j) - static_cast<double>(k)) * a[j] * b[k - j];
    b[k] = sum / (static_cast<double>(k) * a[0]);
  }
  return b;
}

namespace {

// Order equations for y = (rho_0, rho_0', rho_1, rho_1', ...).
struct CascadeField {
  const OscillatorModel* model;
  const CascadeSpec* spec;
  int orders;
  double inv_eta2;

  void operator()(double t, std::span<const double> y, std::span<double> dy) const {
    if (!(y[0] > 0)) throw SingularityApproached("rho_0 reached zero at t = " + std::to_string(t));
    std::vector<double> rho(orders);
    for (int k = 0; k < orders; ++k) rho[k] = y[2 * k];
    const std::vector<double> source = series_power(rho, -3.0);
    const double w2 = model->pinney_omega2(t);
    const double dw2 = spec->perturbation(t);
    for (int k = 0; k < orders; ++k) {
      double accel = source[k] - w2 * rho[k];
      if (k > 0) accel -= dw2 * rho[k - 1];
      dy[2 * k] = y[2 * k + 1];
      dy[2 * k + 1] = accel * inv_eta2;
    }
  }
};

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y, bool& degenerate) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  // Variance below roundoff counts as constant.
  const double tiny = 1e-24 * n;
  degenerate = !(sxx > tiny * std::max(1.0, mx * mx)) || !(syy > tiny * std::max(1.0, my * my));
  return degenerate ? 0.0 : sxy / std::sqrt(sxx * syy);
}

}  // namespace

OscillatorModel perturbed_model(const OscillatorModel& model, const CascadeSpec& spec) {
  return OscillatorModel(model.eta(), FrequencyProfile::perturbed(model.omega2(), spec.epsilon, spec.perturbation),
                         model.damping());
}

CascadeSolution::CascadeSolution(OscillatorModel model, CascadeSpec spec, Trajectory samples)
    : model_(std::move(model)), spec_(std::move(spec)), samples_(std::move(samples)) {
  if (samples_.dim() != 2 * static_cast<std::size_t>(spec_.max_order + 1))
    throw InvalidArgument("cascade samples do not match the order count");
  const double eta2 = model_.eta() * model_.eta();
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!(rho(0, i) > 0)) throw SingularityApproached("rho_0 must stay positive");
    const double r = resummed(i);
    if (!(r > 0)) throw SingularityApproached("resummed rho is not positive at t = " + std::to_string(samples_.time(i)));
    double accel = 0.0, e = 1.0;
    for (int k = 0; k <= spec_.max_order; ++k, e *= spec_.epsilon) accel += e * rhoddot(k, i);
    const double t = samples_.time(i);
    const double w2 = model_.pinney_omega2(t) + spec_.epsilon * spec_.perturbation(t);
    residual_ = std::max(residual_, std::abs(eta2 * accel + w2 * r - 1.0 / (r * r * r)));
  }
}

double CascadeSolution::resummed(std::size_t i, int K) const {
  K = std::min(K, spec_.max_order);
  double sum = 0.0, e = 1.0;
  for (int k = 0; k <= K; ++k, e *= spec_.epsilon) sum += e * rho(k, i);
  return sum;
}

double CascadeSolution::resummed_rate(std::size_t i) const {
  double sum = 0.0, e = 1.0;
  for (int k = 0; k <= spec_.max_order; ++k, e *= spec_.epsilon) sum += e * rhodot(k, i);
  return sum;
}

std::vector<double> CascadeSolution::hierarchy_residuals() const {
  const int orders = spec_.max_order + 1;
  const double eta2 = model_.eta() * model_.eta();
  std::vector<std::vector<double>> accel(orders);
  for (int k = 0; k < orders; ++k) accel[k] = differentiate(times(), order_rate(k));
  std::vector<double> out(orders, 0.0);
  std::vector<double> rho_i(orders);
  for (std::size_t i = 0; i < size(); ++i) {
    const double t = samples_.time(i);
    for (int k = 0; k < orders; ++k) rho_i[k] = rho(k, i);
    const std::vector<double> source = series_power(rho_i, -3.0);
    const double w2 = model_.pinney_omega2(t);
    const double dw2 = spec_.perturbation(t);
    for (int k = 0; k < orders; ++k) {
      double r = eta2 * accel[k][i] + w2 * rho_i[k] - source[k];
      if (k > 0) r += dw2 * rho_i[k - 1];
      out[k] = std::max(out[k], std::abs(r));
    }
  }
  return out;
}

CascadeSolution cascade_solve(const OscillatorModel& model, const CascadeSpec& spec, const TimeGrid& grid,
                              const IntegratorSpec& ispec) {
  spec.validate();
  const int orders = spec.max_order + 1;
  const double t0 = grid.t_start();
  const double rho0 = spec.rho0 ? *spec.rho0 : pinney_equilibrium(model.pinney_omega2(t0));
  std::vector<double> y0(2 * orders, 0.0);
  y0[0] = rho0;
  y0[1] = spec.rhodot0;
  const CascadeField field{&model, &spec, orders, 1.0 / (model.eta() * model.eta())};
  const double floor = spec.floor;
  StepGuard guard = [floor](double t, std::span<const double> y) {
    if (y[0] < floor) throw SingularityApproached("rho_0 fell below the floor at t = " + std::to_string(t));
  };
  Trajectory samples = integrate_ode(field, y0, grid, ispec, guard);
  return CascadeSolution(model, spec, std::move(samples));
}

ConservationProbeReport conservation_probe(const CascadeSolution& casc, int n, double floor) {
  if (n < 0) throw InvalidArgument("probe index n must be >= 0");
  const int order = 2 * n;
  if (order > casc.max_order())
    throw InvalidArgument("probe order " + std::to_string(order) + " exceeds the cascade order " +
                          std::to_string(casc.max_order()));
  const std::size_t size = casc.size();
  const std::vector<double> rho = casc.order(order);
  const std::vector<double> rate = casc.order_rate(order);
  std::vector<double> sq(size), twice_product(size);
  for (std::size_t i = 0; i < size; ++i) {
    sq[i] = rate[i] * rate[i];
    twice_product[i] = 2.0 * rate[i] * casc.rhoddot(order, i);
  }
  const std::vector<double> dsq = differentiate(casc.times(), sq);

  ConservationProbeReport report;
  report.n = n;
  report.order = order;
  report.total_samples = size;
  for (std::size_t i = 0; i < size; ++i) {
    report.drift_rho = std::max(report.drift_rho, std::abs(rho[i] - rho[0]));
    report.drift_rhodot_sq = std::max(report.drift_rhodot_sq, std::abs(sq[i] - sq[0]));
    report.identity_residual = std::max(report.identity_residual, std::abs(dsq[i] - twice_product[i]));
  }
  report.identity_scale = max_abs(twice_product);

  std::vector<std::size_t> valid;
  for (std::size_t i = 0; i < size; ++i)
    if (std::abs(rate[i]) > floor) valid.push_back(i);
  report.valid_samples = valid.size();
  if (2 * valid.size() < size)
    throw DegenerateOrder("rho'_" + std::to_string(order) + " vanishes on more than half of the grid");

  std::vector<double> g;
  g.reserve(valid.size());
  for (std::size_t i : valid) {
    g.push_back(dsq[i] / sq[i]);
    report.g.push_back({casc.times()[i], g.back()});
  }
  for (int j = 0; j <= n; ++j) {
    const std::vector<double> lower = casc.order(2 * j);
    std::vector<double> picked;
    picked.reserve(valid.size());
    for (std::size_t i : valid) picked.push_back(lower[i]);
    bool degenerate = false;
    const double r = pearson(g, picked, degenerate);
    report.correlations.push_back({2 * j, r, degenerate});
  }
  return report;
}

}  // namespace virinv
