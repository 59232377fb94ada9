#include "virinv/mathieu.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "virinv/errors.hpp"

namespace virinv {

std::string to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Marginal: return "marginal";
    case Stability::Unstable: return "unstable";
  }
  return "unknown";
}

MathieuParams to_mathieu(double a, double b, double omega) {
  if (!(omega > 0)) throw InvalidArgument("Mathieu mapping requires omega > 0");
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(omega))
    throw InvalidArgument("Mathieu source parameters must be finite");
  const double scale = 4.0 / (omega * omega);
  return MathieuParams{scale * a, scale * b, MathieuSource{a, b, omega}};
}

IntegratorSpec floquet_default_spec() { return IntegratorSpec::adaptive(1e-12); }

FloquetVerdict floquet_classify(const MathieuParams& params, const IntegratorSpec& ispec) {
  if (!std::isfinite(params.alpha) || !std::isfinite(params.beta))
    throw InvalidArgument("Mathieu parameters must be finite");
  const double alpha = params.alpha;
  const double beta = params.beta;
  VectorField rhs = [alpha, beta](double tau, std::span<const double> y, std::span<double> dy) {
    const double k = alpha + beta * std::cos(2.0 * tau);
    dy[0] = y[1];
    dy[1] = -k * y[0];
    dy[2] = y[3];
    dy[3] = -k * y[2];
  };
  const TimeGrid period({0.0, std::numbers::pi});
  const std::array<double, 4> identity{1.0, 0.0, 0.0, 1.0};
  const Trajectory traj = integrate_ode(rhs, identity, period, ispec);
  const auto end = traj.state(1);

  FloquetVerdict v;
  v.monodromy = {{{end[0], end[2]}, {end[1], end[3]}}};
  v.trace = end[0] + end[3];
  v.determinant = end[0] * end[3] - end[2] * end[1];
  const double excess = std::abs(v.trace) - 2.0;
  if (excess > kMarginalTolerance) {
    v.classification = Stability::Unstable;
    const double disc = std::sqrt(std::max(0.0, v.trace * v.trace - 4.0 * v.determinant));
    const double radius = 0.5 * (std::abs(v.trace) + disc);
    v.growth_exponent = std::log(radius) / std::numbers::pi;
  } else if (excess >= -kMarginalTolerance) {
    v.classification = Stability::Marginal;
  } else {
    v.classification = Stability::Stable;
  }
  return v;
}

double ScanRange::at(std::size_t i) const {
  if (i + 1 == count) return hi;
  return lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(count - 1));
}

std::vector<ScanCell> stability_scan(const ScanRange& alpha, const ScanRange& beta, const IntegratorSpec& ispec,
                                     unsigned threads) {
  for (const ScanRange* r : {&alpha, &beta}) {
    if (!std::isfinite(r->lo) || !std::isfinite(r->hi) || !(r->lo <= r->hi))
      throw InvalidArgument("scan ranges must be finite with lo <= hi");
    if (r->count < 2) throw InvalidArgument("scan resolution must be >= 2 per axis");
  }
  ispec.validate();
  const std::size_t total = alpha.count * beta.count;
  std::vector<ScanCell> cells(total);
  for (std::size_t i = 0; i < alpha.count; ++i)
    for (std::size_t j = 0; j < beta.count; ++j) {
      ScanCell& c = cells[i * beta.count + j];
      c.alpha = alpha.at(i);
      c.beta = beta.at(j);
    }

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      try {
        cells[k].verdict = floquet_classify(MathieuParams{cells[k].alpha, cells[k].beta, std::nullopt}, ispec);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = total;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return cells;
}

}  // namespace virinv
