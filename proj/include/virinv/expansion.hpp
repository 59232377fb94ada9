#pragma once

#include <optional>
#include <vector>

#include "virinv/integrate.hpp"
#include "virinv/oscillator.hpp"

namespace virinv {

/// Largest order accepted by cascade_solve.
inline constexpr int kMaxCascadeOrder = 16;

/// Small-parameter expansion rho = rho_0 + eps rho_1 + eps^2 rho_2 + ...
/// of the Pinney solution for Omega^2 = Omega_0^2 + eps * dOmega^2, where
/// Omega_0^2 is the model's own profile.
struct CascadeSpec {
  double epsilon = 1e-3;
  int max_order = 2;
  FrequencyProfile perturbation = FrequencyProfile::constant(0.0);
  /// rho_0(t0); defaults to the equilibrium of Omega_0^2(t0).
  std::optional<double> rho0;
  double rhodot0 = 0.0;
  double floor = 1e-8;

  void validate() const;
};

/// Coefficients of the power series (sum_k a_k eps^k)^power up to the size of a.
std::vector<double> series_power(const std::vector<double>& a, double power);

//============================================================================
/// Order functions rho_k(t), k = 0..K, sampled on the cascade grid.
///
/// The order equations are
///
///   eta^2 rho_k'' + Omega_0^2 rho_k + dOmega^2 rho_{k-1} = T_k,
///
/// with T_k the k-th coefficient of (rho_0 + eps rho_1 + ...)^-3 and
/// zero initial data for every k >= 1. All orders are advanced together as
/// one lower-triangular system.
//============================================================================
class CascadeSolution {
 public:
  CascadeSolution(OscillatorModel model, CascadeSpec spec, Trajectory samples);

  int max_order() const { return spec_.max_order; }
  double epsilon() const { return spec_.epsilon; }
  const OscillatorModel& model() const { return model_; }
  const CascadeSpec& spec() const { return spec_; }
  const Trajectory& trajectory() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  std::span<const double> times() const { return samples_.times(); }

  double rho(int k, std::size_t i) const { return samples_.value(i, 2 * k); }
  double rhodot(int k, std::size_t i) const { return samples_.value(i, 2 * k + 1); }
  double rhoddot(int k, std::size_t i) const { return samples_.derivative(i, 2 * k + 1); }
  std::vector<double> order(int k) const { return samples_.component(2 * k); }
  std::vector<double> order_rate(int k) const { return samples_.component(2 * k + 1); }

  /// sum_k eps^k rho_k at sample i, optionally truncated at order K.
  double resummed(std::size_t i) const { return resummed(i, spec_.max_order); }
  double resummed(std::size_t i, int K) const;
  double resummed_rate(std::size_t i) const;

  /// Max-norm Pinney residual of the resummed rho on the full Omega^2.
  double residual() const { return residual_; }

  /// Per-order residual of the order equations with rho_k'' taken by
  /// finite differences of the sampled rho_k'.
  std::vector<double> hierarchy_residuals() const;

 private:
  OscillatorModel model_;
  CascadeSpec spec_;
  Trajectory samples_;
  double residual_ = 0.0;
};

CascadeSolution cascade_solve(const OscillatorModel& model, const CascadeSpec& spec, const TimeGrid& grid,
                              const IntegratorSpec& ispec);

/// Full frequency profile Omega_0^2 + eps dOmega^2 seen by the direct route.
OscillatorModel perturbed_model(const OscillatorModel& model, const CascadeSpec& spec);

struct ProbeSample {
  double t;
  double g;
};

struct OrderCorrelation {
  int order;
  double correlation;
  /// Set when either series has zero variance; correlation is then 0.
  bool degenerate;
};

/// Empirical study of d/dt (rho'_{2n})^2 = sign * (rho'_{2n})^2 f_{2n}(...).
/// The ratio g = (d/dt rho'^2) / rho'^2 is reported pointwise wherever
/// |rho'_{2n}| exceeds the floor; no closed form for f_{2n} is assumed.
struct ConservationProbeReport {
  int n = 0;
  int order = 0;
  /// max_t |rho_{2n}(t) - rho_{2n}(t0)|.
  double drift_rho = 0.0;
  /// max_t |rho'_{2n}(t)^2 - rho'_{2n}(t0)^2|.
  double drift_rhodot_sq = 0.0;
  /// max_t |d/dt(rho'^2) - 2 rho' rho''| with the derivative from samples.
  double identity_residual = 0.0;
  /// max_t |2 rho' rho''|, the scale of the identity.
  double identity_scale = 0.0;
  std::size_t valid_samples = 0;
  std::size_t total_samples = 0;
  std::vector<ProbeSample> g;
  /// Pearson correlation of g with rho_{2j}, j = 0..n.
  std::vector<OrderCorrelation> correlations;
};

ConservationProbeReport conservation_probe(const CascadeSolution& casc, int n, double floor = 1e-10);

}  // namespace virinv
