// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "virinv/cli/runner.hpp"
#include "virinv/cosmo_window.hpp"
#include "virinv/ermakov.hpp"
#include "virinv/expansion.hpp"
#include "virinv/mathieu.hpp"
#include "virinv/virial.hpp"

using namespace virinv;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double relative_drift(const std::vector<double>& v) {
  double d = 0;
  for (double x : v) d = std::max(d, std::abs(x - v.front()));
  return d / std::abs(v.front());
}

const OscillatorModel kPulsed(1.0, FrequencyProfile::sine(1.0, 0.2, 0.7));

Verdict lewis_conservation() {
  const auto t0 = Clock::now();
  const auto grid = TimeGrid::uniform(0.0, 200.0, 20001);
  const auto e = solve_pinney(kPulsed, grid, {});
  const auto tr = integrate_hamiltonian(kPulsed, {1.0, 0.0, 0.0}, grid, {});
  std::vector<double> I;
  for (std::size_t i = 0; i < tr.size(); ++i) I.push_back(lewis_invariant(kPulsed, e, phase_state(tr, i)));
  const double drift = relative_drift(I);
  const double secs = seconds_since(t0);
  return {drift <= 1e-6 && secs < 5.0, fmt::format("max relative drift {:.3e}, {:.2f} s", drift, secs)};
}

Verdict leach_reduction() {
  const auto grid = TimeGrid::uniform(0.0, 200.0, 20001);
  const auto e = solve_pinney(kPulsed, grid, {});
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(-3.0, 3.0), ut(0.0, 200.0);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const PhaseState s{u(gen), u(gen), ut(gen)};
    const double lewis = lewis_invariant(kPulsed, e, s);
    worst = std::max(worst, std::abs(leach_invariant(kPulsed, e, s, LeachParams(0.0)) - lewis) / std::max(1.0, lewis));
  }
  const auto tr = integrate_hamiltonian(kPulsed, {1.0, 0.0, 0.0}, grid, {});
  std::vector<double> I;
  for (std::size_t i = 0; i < tr.size(); ++i) I.push_back(leach_invariant(kPulsed, e, phase_state(tr, i), LeachParams(0.5)));
  const double drift = relative_drift(I);
  return {worst <= 1e-12 && drift <= 1e-6,
          fmt::format("C=0 gap {:.3e}, C=0.5 drift {:.3e}", worst, drift)};
}

Verdict route_equivalence() {
  const auto grid = TimeGrid::uniform(0.0, 200.0, 20001);
  const auto a = solve_pinney(kPulsed, grid, {});
  const auto b = pinney_from_linear_basis(kPulsed, grid, {}, a.rho(0.0), 0.0);
  double gap = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    gap = std::max(gap, std::abs(a.trajectory().value(i, 0) - b.trajectory().value(i, 0)));
  return {gap <= 1e-8, fmt::format("max |rho_direct - rho_basis| {:.3e}", gap)};
}

Verdict virial_closed_form() {
  const auto t0 = Clock::now();
  double period_err = 0, band_err = 0;
  for (double Q : {0.5, 1.0, 2.0}) {
    const VirialModel m{Q, 0.2, -1};
    const double p = pi / std::pow(Q, 1.5);
    // Period from repeated upper turning points, band from a dense sample.
    const double z0 = z_of_time(m, 0.0);
    for (int k = 1; k <= 3; ++k) period_err = std::max(period_err, std::abs(z_of_time(m, k * p) - z0));
    double lo = z0, hi = z0;
    for (int i = 0; i <= 20000; ++i) {
      const double z = z_of_time(m, p * i / 20000.0);
      lo = std::min(lo, z);
      hi = std::max(hi, z);
    }
    period_err = std::max(period_err, std::abs(m.period() - p));
    band_err = std::max({band_err, std::abs(lo - (0.5 / Q - 0.2)), std::abs(hi - (0.5 / Q + 0.2))});
  }
  const double secs = seconds_since(t0);
  return {period_err <= 1e-6 && band_err <= 1e-8 && secs < 1.0,
          fmt::format("period error {:.3e}, band error {:.3e}, {:.3f} s", period_err, band_err, secs)};
}

Verdict mathieu_tongues() {
  const auto t0 = Clock::now();
  const ScanRange alpha{0.0, 5.0, 200}, beta{0.0, 1.0, 200};
  const auto cells = stability_scan(alpha, beta);
  const double secs = seconds_since(t0);
  const double cell = 5.0 / 199.0;
  double det_err = 0;
  for (const auto& c : cells) det_err = std::max(det_err, std::abs(c.verdict.determinant - 1.0));
  // Lowest unstable cell near each n^2 must sit within one cell of it.
  std::string detail;
  bool touches = true;
  for (double n2 : {1.0, 4.0}) {
    const ScanCell* lowest = nullptr;
    for (const auto& c : cells)
      if (c.verdict.classification == Stability::Unstable && std::abs(c.alpha - n2) <= 0.5 &&
          (!lowest || c.beta < lowest->beta))
        lowest = &c;
    if (!lowest) {
      touches = false;
      detail += fmt::format("no tongue near {}; ", n2);
      continue;
    }
    const bool ok = std::abs(lowest->alpha - n2) <= cell;
    touches = touches && ok;
    detail += fmt::format("tongue {} lowest at alpha {:.4f} beta {:.4f}; ", n2, lowest->alpha, lowest->beta);
  }
  return {touches && det_err <= 1e-9 && secs < 60.0,
          detail + fmt::format("det error {:.3e}, {:.1f} s", det_err, secs)};
}

Verdict cascade_convergence() {
  const OscillatorModel unit(1.0, FrequencyProfile::constant(1.0));
  const auto grid = TimeGrid::uniform(0.0, 20.0, 401);
  const auto ispec = IntegratorSpec::adaptive(1e-13);
  std::vector<double> errs;
  for (double eps : {4e-3, 2e-3, 1e-3}) {
    CascadeSpec spec;
    spec.epsilon = eps;
    spec.max_order = 2;
    spec.perturbation = FrequencyProfile::sine(0.0, 1.0, 1.0);
    const auto casc = cascade_solve(unit, spec, grid, ispec);
    const auto direct = solve_pinney(perturbed_model(unit, spec), grid, ispec, {.rho0 = 1.0});
    double err = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      err = std::max(err, std::abs(casc.resummed(i) - direct.trajectory().value(i, 0)));
    errs.push_back(err);
  }
  const double order = std::min(std::log2(errs[0] / errs[1]), std::log2(errs[1] / errs[2]));

  // Linear response about rho = 1 under a constant shift oscillates at 2 Omega.
  const auto long_grid = TimeGrid::uniform(0.0, 20 * pi, 8001);
  CascadeSpec spec;
  spec.max_order = 1;
  spec.perturbation = FrequencyProfile::constant(0.3);
  const auto casc = cascade_solve(unit, spec, long_grid, IntegratorSpec::adaptive(1e-12));
  const auto r1 = casc.order(1);
  const auto t = casc.times();
  const double mid = 0.5 * (*std::min_element(r1.begin(), r1.end()) + *std::max_element(r1.begin(), r1.end()));
  std::vector<double> up;
  for (std::size_t i = 1; i < r1.size(); ++i)
    if (r1[i - 1] < mid && r1[i] >= mid) up.push_back(t[i - 1] + (mid - r1[i - 1]) / (r1[i] - r1[i - 1]) * (t[i] - t[i - 1]));
  const double freq = up.size() >= 3 ? 2 * pi * static_cast<double>(up.size() - 1) / (up.back() - up.front()) : 0.0;
  const double mode_err = std::abs(freq - 2.0) / 2.0;
  return {order >= 2.7 && mode_err <= 1e-4,
          fmt::format("measured order {:.3f}, normal mode {:.8f} (relative error {:.2e})", order, freq, mode_err)};
}

Verdict probe_identity() {
  const OscillatorModel unit(1.0, FrequencyProfile::constant(1.0));
  CascadeSpec spec;
  spec.epsilon = 1e-2;
  spec.max_order = 4;
  spec.perturbation = FrequencyProfile::cosine(0.0, 1.0, 1.3);
  spec.rho0 = 1.2;
  const auto casc = cascade_solve(unit, spec, TimeGrid::uniform(0.0, 20.0, 4001), IntegratorSpec::adaptive(1e-12));
  double worst = 0;
  std::size_t valid = 0;
  for (int n = 0; n <= 2; ++n) {
    const auto report = conservation_probe(casc, n);
    worst = std::max(worst, report.identity_residual / report.identity_scale);
    valid += report.valid_samples;
  }
  return {worst <= 1e-6, fmt::format("worst relative identity residual {:.3e} ({} probe samples)", worst, valid)};
}

Verdict cosmo_window() {
  double quad_gap = 0;
  for (double ti : {0.0, 0.5})
    for (double D : {0.1, 1.0}) {
      CosmoParams p;
      p.t_i = ti;
      p.t_f = ti + D;
      const WindowConstants k{2.6, -1.3, 0.4};
      const double exact = taylor_window_consistent(p, k).real();
      const double numeric = quad(
          [&](double t) {
            return quad([&](double tau) { const double s = tau - ti; return 2.6 - 1.3 * s + 0.4 * s * s; }, ti, t, 1e-13);
          },
          ti, ti + D, 1e-12);
      quad_gap = std::max(quad_gap, std::abs(exact - numeric));
    }
  const auto k = window_constants(CosmoParams{});
  // 2 ln((1+x)/(1-x)) / sqrt 3 with x = sqrt(2/3).
  const double x = std::sqrt(2.0 / 3.0);
  const double A0 = 2.0 * std::log((1 + x) / (1 - x)) / std::sqrt(3.0);
  const double const_gap =
      std::max({std::abs(k.A1 - 1.0), std::abs(k.A2 - 2.0), std::abs(k.A0 - A0)});
  const bool flag = complex_domain(0.5) && window_report(CosmoParams{.m0 = 0.5}).complex_domain;
  return {quad_gap <= 1e-10 && const_gap <= 1e-9 && flag,
          fmt::format("quadrature gap {:.3e}, constants gap {:.3e}, complex flag at 0.5 {}", quad_gap, const_gap, flag)};
}

Verdict tensor_conservation() {
  const OscillatorModel m(1.0, FrequencyProfile::sine(1.0, 0.2, 0.7));
  const auto grid = TimeGrid::uniform(0.0, 100.0, 2001);
  const auto e = solve_pinney(m, grid, {});
  const PhaseState3 s0{{0.7, -0.4, 0.2}, {0.1, 0.5, -0.8}, 0.0};
  const auto tr = integrate_hamiltonian3(m, s0, grid, {});
  const auto I0 = tensor_invariant(e, s0);
  double scale = 0;
  for (const auto& row : I0)
    for (double v : row) scale = std::max(scale, std::abs(v));
  double drift = 0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const auto I = tensor_invariant(e, phase_state3(tr, i));
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) drift = std::max(drift, std::abs(I[a][b] - I0[a][b]) / scale);
  }
  return {drift <= 1e-6, fmt::format("max entry drift {:.3e} relative to the largest entry", drift)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict cli_determinism() {
  const fs::path root = fs::temp_directory_path() / "virinv_acceptance";
  fs::remove_all(root);
  std::string mismatched;
  for (const auto& sub : cli::subcommands()) {
    for (const char* tag : {"a", "b"}) {
      cli::RunOptions o;
      o.subcommand = sub;
      o.config_path = fs::path(VIRINV_CONFIG_DIR) / (sub + ".ini");
      o.out_dir = root / (sub + tag);
      o.quiet = true;
      std::ostringstream out, err;
      if (cli::run(o, out, err) != cli::kSuccess) return {false, sub + " failed: " + err.str()};
    }
    for (const auto& entry : fs::directory_iterator(root / (sub + "a"))) {
      const auto name = entry.path().filename();
      if (name == "run.log") continue;
      if (slurp(entry.path()) != slurp(root / (sub + "b") / name)) mismatched += sub + "/" + name.string() + " ";
    }
  }
  return {mismatched.empty(), mismatched.empty() ? "artifacts identical for every subcommand"
                                                 : "differing: " + mismatched};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"Lewis invariant conservation", lewis_conservation},
      {"Leach reduction and conservation", leach_reduction},
      {"Pinney route equivalence", route_equivalence},
      {"virial closed form", virial_closed_form},
      {"Mathieu tongues", mathieu_tongues},
      {"cascade convergence", cascade_convergence},
      {"conservation probe identity", probe_identity},
      {"cosmological window", cosmo_window},
      {"tensor invariant", tensor_conservation},
      {"CLI determinism", cli_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failures += !v.pass;
    fmt::print("{} {:2d} {}: {}\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
