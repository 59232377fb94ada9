#include "virinv/cli/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "virinv/cli/serialize.hpp"
#include "virinv/cosmo_window.hpp"
#include "virinv/ermakov.hpp"
#include "virinv/expansion.hpp"
#include "virinv/integrate.hpp"
#include "virinv/mathieu.hpp"
#include "virinv/potentials.hpp"
#include "virinv/virial.hpp"

namespace virinv::cli {

using nlohmann::json;
namespace fs = std::filesystem;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"simulate", "invariant", "pinney", "cascade",
                                                 "probe",    "virial",    "mathieu", "cosmo"};
  return names;
}

namespace {

struct Artifacts {
  fs::path dir;
  json results = json::object();
};

double max_relative_drift(const std::vector<double>& values) {
  const double ref = values.front();
  double drift = 0.0;
  for (double v : values) drift = std::max(drift, std::abs(v - ref));
  return drift / std::max(std::abs(ref), 1e-12);
}

// ---- configuration builders ------------------------------------------------

IntegratorSpec integrator_from(RunConfig& cfg, IntegratorSpec spec = {}) {
  spec.method = parse_method(cfg.text("integrator.method", to_string(spec.method)));
  spec.abs_tol = cfg.real("integrator.abs_tol", spec.abs_tol);
  spec.rel_tol = cfg.real("integrator.rel_tol", spec.rel_tol);
  spec.h0 = cfg.real("integrator.h0", spec.h0);
  spec.h_min = cfg.real("integrator.h_min", spec.h_min);
  spec.h_max = cfg.real("integrator.h_max", spec.h_max);
  spec.validate();
  return spec;
}

TimeGrid grid_from(RunConfig& cfg, double t_end, long long samples) {
  const double start = cfg.real("grid.t_start", 0.0);
  const double end = cfg.real("grid.t_end", t_end);
  const long long count = cfg.integer("grid.samples", samples);
  if (count < 2) throw ConfigError("grid.samples: must be >= 2");
  if (!(start < end)) throw ConfigError("grid.t_end: must exceed grid.t_start");
  return TimeGrid::uniform(start, end, static_cast<std::size_t>(count));
}

PulsedPotential potential_from(RunConfig& cfg) {
  const PotentialFamily family = parse_potential_family(cfg.text("potential.family", "plummer"));
  const double gamma = family == PotentialFamily::Dehnen ? cfg.real("potential.gamma", 0.0) : 0.0;
  const double m0 = cfg.real("potential.m0", 0.0);
  const double omega = m0 > 0 ? cfg.required_real("potential.omega", "required when potential.m0 > 0")
                              : cfg.real("potential.omega", 0.0);
  return PulsedPotential(family, m0, omega, gamma);
}

FrequencyProfile tabulated_from(const std::string& path, const std::string& key) {
  std::ifstream in(path);
  if (!in) throw ConfigError(key + ": cannot open table '" + path + "'");
  std::vector<double> t, w2;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    std::istringstream row(line);
    double a = 0, b = 0;
    char comma = 0;
    if (!(row >> a >> comma >> b) || comma != ',') throw ConfigError(key + ": malformed table row '" + line + "'");
    t.push_back(a);
    w2.push_back(b);
  }
  return FrequencyProfile::tabulated(std::move(t), std::move(w2));
}

// Profile keys live in `section` and carry `prefix` (cascade perturbations
// use "perturbation_"); the kind is read from `kind_key`.
FrequencyProfile profile_from(RunConfig& cfg, const std::string& section, const std::string& kind_key,
                              const std::string& prefix, const std::string& fallback_kind) {
  const std::string base = section + "." + prefix;
  const std::string kind = cfg.text(section + "." + kind_key, fallback_kind);
  if (kind == "constant") return FrequencyProfile::constant(cfg.real(base + "omega2", 1.0));
  if (kind == "cosine" || kind == "sine") {
    const double a = cfg.real(base + "a", kind == "sine" && !prefix.empty() ? 0.0 : 1.0);
    const double b = cfg.real(base + "b", prefix.empty() ? 0.0 : 1.0);
    const double omega = prefix.empty() ? cfg.required_real(base + "omega", "required for a " + kind + " profile")
                                        : cfg.real(base + "omega", 1.0);
    return kind == "cosine" ? FrequencyProfile::cosine(a, b, omega) : FrequencyProfile::sine(a, b, omega);
  }
  if (kind == "potential" && prefix.empty())
    return FrequencyProfile::from_potential(potential_from(cfg), cfg.real(section + ".r0", 0.0));
  if (kind == "tabulated" && prefix.empty()) {
    const std::string table = cfg.text(section + ".table", "");
    if (table.empty()) throw ConfigError(section + ".table: required for a tabulated profile");
    return tabulated_from(table, section + ".table");
  }
  throw ConfigError(section + "." + kind_key + ": unknown profile kind '" + kind + "'");
}

OscillatorModel model_from(RunConfig& cfg) {
  const double eta = cfg.real("oscillator.eta", 1.0);
  FrequencyProfile profile = profile_from(cfg, "oscillator", "profile", "", "constant");
  const std::string damping = cfg.text("oscillator.damping", "none");
  DampingProfile dp;
  if (damping == "linear") dp = DampingProfile::linear(cfg.real("oscillator.damping_rate", 0.0));
  else if (damping != "none") throw ConfigError("oscillator.damping: expected none or linear, got '" + damping + "'");
  return OscillatorModel(eta, std::move(profile), std::move(dp));
}

PhaseState initial_state_from(RunConfig& cfg, std::uint64_t seed, double t0) {
  if (cfg.flag("oscillator.random_initial", false)) {
    std::mt19937_64 gen(seed);
    const auto unit = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    const double q = 2.0 * unit() - 1.0;
    const double p = 2.0 * unit() - 1.0;
    return {q, p, t0};
  }
  return {cfg.real("oscillator.q0", 1.0), cfg.real("oscillator.p0", 0.0), t0};
}

PinneyOptions pinney_from(RunConfig& cfg) {
  PinneyOptions opts;
  if (cfg.has("pinney.rho0")) opts.rho0 = cfg.real("pinney.rho0", 1.0);
  opts.rhodot0 = cfg.real("pinney.rhodot0", 0.0);
  opts.floor = cfg.real("pinney.floor", opts.floor);
  return opts;
}

CascadeSpec cascade_from(RunConfig& cfg) {
  CascadeSpec spec;
  spec.epsilon = cfg.real("cascade.epsilon", spec.epsilon);
  spec.max_order = static_cast<int>(cfg.integer("cascade.order", spec.max_order));
  spec.perturbation = profile_from(cfg, "cascade", "perturbation", "perturbation_", "sine");
  if (cfg.has("cascade.rho0")) spec.rho0 = cfg.real("cascade.rho0", 1.0);
  spec.rhodot0 = cfg.real("cascade.rhodot0", 0.0);
  spec.validate();
  return spec;
}

// ---- subcommands -------------------------------------------------------------

void write_series(const fs::path& path, const std::vector<std::string>& header,
                  const std::function<void(CsvWriter&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  CsvWriter csv(out, header);
  body(csv);
}

void cmd_simulate(RunConfig& cfg, std::uint64_t seed, Artifacts& art) {
  const OscillatorModel model = model_from(cfg);
  const TimeGrid grid = grid_from(cfg, 20.0, 2001);
  const IntegratorSpec ispec = integrator_from(cfg);
  const PhaseState s0 = initial_state_from(cfg, seed, grid.t_start());
  const Trajectory traj = integrate_hamiltonian(model, s0, grid, ispec);
  std::vector<double> energy(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) energy[i] = hamiltonian(model, phase_state(traj, i));
  write_series(art.dir / "series.csv", {"t", "q", "p", "H"}, [&](CsvWriter& csv) {
    for (std::size_t i = 0; i < traj.size(); ++i)
      csv.row(std::vector<double>{traj.time(i), traj.value(i, 0), traj.value(i, 1), energy[i]});
  });
  art.results = {
      {"initial_state", {{"q", s0.q}, {"p", s0.p}, {"t", s0.t}}},
      {"final_state", {{"q", traj.value(traj.size() - 1, 0)}, {"p", traj.value(traj.size() - 1, 1)}}},
      {"energy_initial", energy.front()},
      {"energy_max_relative_drift", max_relative_drift(energy)},
      {"frequency_constant", model.omega2().is_constant()},
      {"profile", model.omega2().describe()},
      {"damping", model.damping().describe()},
  };
}

void cmd_invariant(RunConfig& cfg, std::uint64_t seed, Artifacts& art) {
  const OscillatorModel model = model_from(cfg);
  const TimeGrid grid = grid_from(cfg, 200.0, 20001);
  const IntegratorSpec ispec = integrator_from(cfg);
  const PhaseState s0 = initial_state_from(cfg, seed, grid.t_start());
  const PinneyOptions popts = pinney_from(cfg);
  const LeachParams leach(cfg.real("leach.C", 0.5));
  const bool damped = !model.damping().is_zero();

  const ErmakovSolution erma = solve_pinney(model, grid, ispec, popts);
  const Trajectory traj = integrate_hamiltonian(model, s0, grid, ispec);
  std::vector<double> lewis(traj.size()), leach_vals(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const PhaseState s = phase_state(traj, i);
    lewis[i] = damped ? leach_invariant_damped(model, erma, s, LeachParams(0.0)) : lewis_invariant(model, erma, s);
    leach_vals[i] = damped ? leach_invariant_damped(model, erma, s, leach) : leach_invariant(model, erma, s, leach);
  }
  write_series(art.dir / "series.csv", {"t", "q", "p", "rho", "rhodot", "W", "I_lewis", "I_leach"},
               [&](CsvWriter& csv) {
                 const Trajectory& e = erma.trajectory();
                 for (std::size_t i = 0; i < traj.size(); ++i)
                   csv.row(std::vector<double>{traj.time(i), traj.value(i, 0), traj.value(i, 1), e.value(i, 0),
                                               e.value(i, 1), e.value(i, 2), lewis[i], leach_vals[i]});
               });
  const double lewis_drift = max_relative_drift(lewis);
  art.results = {
      {"initial_state", {{"q", s0.q}, {"p", s0.p}, {"t", s0.t}}},
      {"profile", model.omega2().describe()},
      {"damping", model.damping().describe()},
      {"damped_form", damped},
      {"rho0", erma.trajectory().value(0, 0)},
      {"lewis_initial", lewis.front()},
      {"lewis_max_relative_drift", lewis_drift},
      {"lewis_conserved", lewis_drift <= 1e-6},
      {"leach_C", leach.C()},
      {"leach_initial", leach_vals.front()},
      {"leach_max_relative_drift", max_relative_drift(leach_vals)},
  };
}

void cmd_pinney(RunConfig& cfg, std::uint64_t, Artifacts& art) {
  const OscillatorModel model = model_from(cfg);
  const TimeGrid grid = grid_from(cfg, 50.0, 5001);
  const IntegratorSpec ispec = integrator_from(cfg);
  const PinneyOptions popts = pinney_from(cfg);
  const ErmakovSolution erma = solve_pinney(model, grid, ispec, popts);
  const Trajectory& e = erma.trajectory();

  const std::vector<double> rho = e.component(0), rhodot = e.component(1), W = e.component(2);
  const std::vector<double> rhoddot = differentiate(e.times(), rhodot);
  const std::vector<double> dW = differentiate(e.times(), W);
  const double eta2 = model.eta() * model.eta();
  double residual = 0.0, w_rate_error = 0.0;
  bool w_increasing = true;
  double rho_min = rho.front(), rho_max = rho.front();
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double t = e.time(i);
    residual = std::max(residual, std::abs(eta2 * rhoddot[i] + model.pinney_omega2(t) * rho[i] -
                                           1.0 / (rho[i] * rho[i] * rho[i])));
    w_rate_error = std::max(w_rate_error, std::abs(dW[i] - 1.0 / (rho[i] * rho[i])));
    if (i > 0 && !(W[i] > W[i - 1])) w_increasing = false;
    rho_min = std::min(rho_min, rho[i]);
    rho_max = std::max(rho_max, rho[i]);
  }
  std::optional<ErmakovSolution> basis;
  if (model.damping().is_zero()) basis = pinney_from_linear_basis(model, grid, ispec, rho.front(), rhodot.front());
  double route_gap = 0.0;
  write_series(art.dir / "series.csv", {"t", "rho", "rhodot", "W", "rho_basis"}, [&](CsvWriter& csv) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      std::vector<std::string> cells{format_real(e.time(i)), format_real(rho[i]), format_real(rhodot[i]),
                                     format_real(W[i]), ""};
      if (basis) {
        const double rb = basis->trajectory().value(i, 0);
        route_gap = std::max(route_gap, std::abs(rb - rho[i]));
        cells[4] = format_real(rb);
      }
      csv.row(std::span<const std::string>(cells));
    }
  });
  art.results = {
      {"profile", model.omega2().describe()},
      {"rho0", rho.front()},
      {"rhodot0", rhodot.front()},
      {"rho_min", rho_min},
      {"rho_max", rho_max},
      {"pinney_residual_max", residual},
      {"W_final", W.back()},
      {"W_strictly_increasing", w_increasing},
      {"W_rate_error_max", w_rate_error},
  };
  if (basis) art.results["route_max_difference"] = route_gap;
}

void cmd_cascade(RunConfig& cfg, std::uint64_t, Artifacts& art) {
  const OscillatorModel model = model_from(cfg);
  const CascadeSpec spec = cascade_from(cfg);
  const TimeGrid grid = grid_from(cfg, 20.0, 2001);
  const IntegratorSpec ispec = integrator_from(cfg);
  const CascadeSolution casc = cascade_solve(model, spec, grid, ispec);
  PinneyOptions popts;
  popts.rho0 = casc.rho(0, 0);
  popts.rhodot0 = spec.rhodot0;
  const ErmakovSolution direct = solve_pinney(perturbed_model(model, spec), grid, ispec, popts);

  std::vector<std::string> header{"t"};
  for (int k = 0; k <= spec.max_order; ++k) header.push_back(fmt::format("rho_{}", k));
  header.insert(header.end(), {"rho_resummed", "rho_direct"});
  double gap = 0.0;
  write_series(art.dir / "series.csv", header, [&](CsvWriter& csv) {
    std::vector<double> row;
    for (std::size_t i = 0; i < casc.size(); ++i) {
      row.assign({casc.times()[i]});
      for (int k = 0; k <= spec.max_order; ++k) row.push_back(casc.rho(k, i));
      const double rd = direct.trajectory().value(i, 0);
      row.push_back(casc.resummed(i));
      row.push_back(rd);
      gap = std::max(gap, std::abs(casc.resummed(i) - rd));
      csv.row(row);
    }
  });
  art.results = {
      {"epsilon", spec.epsilon},
      {"order", spec.max_order},
      {"perturbation", spec.perturbation.describe()},
      {"resummed_pinney_residual", casc.residual()},
      {"resummation_error_vs_direct", gap},
      {"hierarchy_residuals", casc.hierarchy_residuals()},
  };
}

void cmd_probe(RunConfig& cfg, std::uint64_t, Artifacts& art) {
  const OscillatorModel model = model_from(cfg);
  const CascadeSpec spec = cascade_from(cfg);
  const TimeGrid grid = grid_from(cfg, 20.0, 2001);
  const IntegratorSpec ispec = integrator_from(cfg);
  const int n = static_cast<int>(cfg.integer("probe.n", 1));
  const double floor = cfg.real("probe.floor", 1e-10);
  const CascadeSolution casc = cascade_solve(model, spec, grid, ispec);
  const ConservationProbeReport report = conservation_probe(casc, n, floor);

  std::map<double, double> g_at;
  for (const auto& s : report.g) g_at[s.t] = s.g;
  const int order = report.order;
  write_series(art.dir / "series.csv", {"t", fmt::format("rho_{}", order), fmt::format("rhodot_{}", order), "g"},
               [&](CsvWriter& csv) {
                 for (std::size_t i = 0; i < casc.size(); ++i) {
                   const double t = casc.times()[i];
                   const auto it = g_at.find(t);
                   std::vector<std::string> cells{format_real(t), format_real(casc.rho(order, i)),
                                                  format_real(casc.rhodot(order, i)),
                                                  it == g_at.end() ? "" : format_real(it->second)};
                   csv.row(std::span<const std::string>(cells));
                 }
               });
  art.results = {{"epsilon", spec.epsilon}, {"cascade_order", spec.max_order}, {"probe", to_json(report)}};
}

void cmd_virial(RunConfig& cfg, std::uint64_t, Artifacts& art) {
  VirialModel model;
  model.Q = cfg.real("virial.Q", 1.0);
  model.Lambda = cfg.real("virial.Lambda", 0.3);
  model.validate_oscillatory();
  const double periods = cfg.real("virial.periods", 3.0);
  const long long samples = cfg.integer("virial.samples", 601);
  if (!(periods > 0)) throw ConfigError("virial.periods: must be positive");
  if (samples < 2) throw ConfigError("virial.samples: must be >= 2");
  const ClusterScales scales(cfg.real("virial.N", 1.0), cfg.real("virial.m", 1.0), cfg.real("virial.A0", 1.0));
  const double d = cfg.real("virial.d", 1.0);

  const double p = model.period();
  const TimeGrid grid = TimeGrid::uniform(0.0, periods * p, static_cast<std::size_t>(samples));
  double z_lo = model.z_max(), z_hi = model.z_min(), residual = 0.0, period_gap = 0.0;
  write_series(art.dir / "series.csv", {"t", "z", "zdot", "first_integral_residual"}, [&](CsvWriter& csv) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double t = grid[i];
      const double z = z_of_time(model, t);
      const double zd = zdot_of_time(model, t);
      const double r = first_integral_residual(model, z, zd);
      z_lo = std::min(z_lo, z);
      z_hi = std::max(z_hi, z);
      residual = std::max(residual, std::abs(r));
      period_gap = std::max(period_gap, std::abs(z_of_time(model, t + p) - z));
      csv.row(std::vector<double>{t, z, zd, r});
    }
  });
  art.results = {
      {"Q", model.Q},
      {"Lambda", model.Lambda},
      {"period", p},
      {"half_period_time", time_of_z(model, model.z_min())},
      {"periodicity_max_gap", period_gap},
      {"band", {{"z_min", model.z_min()}, {"z_max", model.z_max()}}},
      {"sampled_band", {{"z_min", z_lo}, {"z_max", z_hi}}},
      {"special_case_lambda", special_case_lambda(model)},
      {"first_integral_residual_max", residual},
      {"cluster", {{"t0", scales.t0()}, {"central_density", gaussian_density(scales, 0.0, d)}}},
  };
}

void cmd_mathieu(RunConfig& cfg, std::uint64_t, Artifacts& art) {
  const long long resolution = cfg.integer("mathieu.resolution", 200);
  const long long n_alpha = cfg.integer("mathieu.alpha_count", resolution);
  const long long n_beta = cfg.integer("mathieu.beta_count", resolution);
  if (n_alpha < 2 || n_beta < 2) throw ConfigError("mathieu.resolution: must be >= 2 per axis");
  const ScanRange alpha{cfg.real("mathieu.alpha_min", 0.0), cfg.real("mathieu.alpha_max", 5.0),
                        static_cast<std::size_t>(n_alpha)};
  const ScanRange beta{cfg.real("mathieu.beta_min", 0.0), cfg.real("mathieu.beta_max", 1.0),
                       static_cast<std::size_t>(n_beta)};
  const long long threads = cfg.integer("mathieu.threads", 0);
  if (threads < 0) throw ConfigError("mathieu.threads: must be >= 0");
  const IntegratorSpec ispec = integrator_from(cfg, floquet_default_spec());
  const std::vector<ScanCell> cells = stability_scan(alpha, beta, ispec, static_cast<unsigned>(threads));

  std::map<std::string, std::size_t> counts{{"stable", 0}, {"marginal", 0}, {"unstable", 0}};
  double det_error = 0.0;
  write_series(art.dir / "scan.csv", {"alpha", "beta", "trace", "class", "exponent"}, [&](CsvWriter& csv) {
    for (const ScanCell& c : cells) {
      const std::string cls = to_string(c.verdict.classification);
      ++counts[cls];
      det_error = std::max(det_error, std::abs(c.verdict.determinant - 1.0));
      const std::vector<std::string> cells_text{format_real(c.alpha), format_real(c.beta),
                                                format_real(c.verdict.trace), cls,
                                                format_real(c.verdict.growth_exponent)};
      csv.row(std::span<const std::string>(cells_text));
    }
  });
  art.results = {
      {"alpha_count", n_alpha},
      {"beta_count", n_beta},
      {"cells", cells.size()},
      {"counts", counts},
      {"determinant_max_error", det_error},
  };
  if (cfg.has("mathieu.a") || cfg.has("mathieu.b") || cfg.has("mathieu.omega")) {
    const double a = cfg.real("mathieu.a", 1.0);
    const double b = cfg.real("mathieu.b", 0.0);
    const double omega = cfg.required_real("mathieu.omega", "required to map a source profile");
    const MathieuParams mp = to_mathieu(a, b, omega);
    art.results["source"] = {{"a", a}, {"b", b}, {"omega", omega}, {"alpha", mp.alpha}, {"beta", mp.beta},
                             {"verdict", to_json(floquet_classify(mp, ispec))}};
  }
}

void cmd_cosmo(RunConfig& cfg, std::uint64_t, Artifacts& art) {
  CosmoParams params;
  params.m0 = cfg.real("cosmo.m0", params.m0);
  params.omega = cfg.real("cosmo.omega", params.omega);
  params.rho2_tilde = cfg.real("cosmo.rho2_tilde", params.rho2_tilde);
  params.F_rv = cfg.real("cosmo.F_rv", params.F_rv);
  params.t_i = cfg.real("cosmo.t_i", params.t_i);
  params.t_f = cfg.real("cosmo.t_f", params.t_f);
  const long long samples = cfg.integer("cosmo.samples", 101);
  if (samples < 2) throw ConfigError("cosmo.samples: must be >= 2");
  const WindowReport report = window_report(params);

  // Window values as the right endpoint sweeps across [t_i, t_f].
  write_series(art.dir / "series.csv", {"t_f", "published_re", "published_im", "consistent_re", "consistent_im"},
               [&](CsvWriter& csv) {
                 const TimeGrid sweep = TimeGrid::uniform(params.t_i, params.t_f, static_cast<std::size_t>(samples));
                 CosmoParams p = params;
                 for (std::size_t i = 0; i < sweep.size(); ++i) {
                   p.t_f = sweep[i];
                   const auto wp = taylor_window_paper(p, report.constants);
                   const auto wc = taylor_window_consistent(p, report.constants);
                   csv.row(std::vector<double>{p.t_f, wp.real(), wp.imag(), wc.real(), wc.imag()});
                 }
               });
  art.results = {{"window", to_json(report)}};
}

using Command = void (*)(RunConfig&, std::uint64_t, Artifacts&);

Command find_command(const std::string& name) {
  static const std::map<std::string, Command> table = {
      {"simulate", cmd_simulate}, {"invariant", cmd_invariant}, {"pinney", cmd_pinney},
      {"cascade", cmd_cascade},   {"probe", cmd_probe},         {"virial", cmd_virial},
      {"mathieu", cmd_mathieu},   {"cosmo", cmd_cosmo},
  };
  const auto it = table.find(name);
  return it == table.end() ? nullptr : it->second;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int run(const std::string& subcommand, RunConfig cfg, const RunOptions& options, std::ostream& out,
        std::ostream& err) {
  const Command command = find_command(subcommand);
  if (!command) {
    err << "error: unknown subcommand '" << subcommand << "'\n";
    return kConfigFailure;
  }
  Artifacts art;
  int status = kSuccess;
  std::string message = "ok";
  try {
    const std::string configured_dir = cfg.peek("run.output_dir").value_or("out");
    if (options.out_dir) art.dir = *options.out_dir;
    else if (const char* env = std::getenv(kOutDirEnv); env && *env) art.dir = env;
    else art.dir = configured_dir;
    std::uint64_t seed = 0;
    if (options.seed) {
      seed = *options.seed;
      cfg.record("run.seed", seed);
    } else {
      const long long s = cfg.integer("run.seed", 0);
      if (s < 0) throw ConfigError("run.seed: must be >= 0");
      seed = static_cast<std::uint64_t>(s);
    }
    fs::create_directories(art.dir);
    command(cfg, seed, art);

    json summary = {
        {"tool", kToolName}, {"version", kToolVersion}, {"subcommand", subcommand},
        {"seed", seed},      {"config", cfg.echo()},    {"results", art.results},
    };
    std::ofstream js(art.dir / "summary.json", std::ios::binary);
    if (!js) throw Error("cannot write summary.json");
    js << summary.dump(2) << '\n';
    if (!options.quiet) out << subcommand << ": artifacts written to " << art.dir.string() << '\n';
  } catch (const ConfigError& e) {
    status = kConfigFailure;
    message = e.what();
  } catch (const NumericError& e) {
    status = kNumericFailure;
    message = e.what();
  } catch (const Error& e) {
    status = kConfigFailure;
    message = e.what();
  } catch (const std::exception& e) {
    status = kConfigFailure;
    message = e.what();
  }
  if (status != kSuccess) err << "error: " << message << '\n';
  if (!art.dir.empty() && fs::is_directory(art.dir)) {
    std::ofstream log(art.dir / "run.log", std::ios::app);
    log << timestamp() << ' ' << kToolName << ' ' << kToolVersion << ' ' << subcommand << " status=" << status
        << ' ' << message << '\n';
  }
  return status;
}

int run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  try {
    RunConfig cfg = options.config_path ? RunConfig::from_file(*options.config_path) : RunConfig::from_string("");
    return run(options.subcommand, std::move(cfg), options, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigFailure;
  }
}

}  // namespace virinv::cli
