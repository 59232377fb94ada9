#include "virinv/cosmo_window.hpp"

#include <cmath>

#include "virinv/errors.hpp"

namespace virinv {

using cplx = std::complex<double>;

void CosmoParams::validate() const {
  for (double v : {m0, omega, rho2_tilde, F_rv, t_i, t_f})
    if (!std::isfinite(v)) throw InvalidArgument("cosmological window parameters must be finite");
  if (F_rv == 0.0) throw InvalidArgument("F(r_v) must be nonzero");
  if (!(t_i < t_f)) throw InvalidArgument("window requires t_i < t_f");
}

bool WindowConstants::has_imaginary_part() const {
  return A0.imag() != 0.0 || A1.imag() != 0.0 || A2.imag() != 0.0;
}

double golden_ratio() { return 0.5 * (1.0 + std::sqrt(5.0)); }

bool complex_domain(double m0) { return !(m0 > golden_ratio()); }

WindowConstants window_constants(const CosmoParams& params) {
  const double m0 = params.m0;
  const double s = m0 * m0 - 1.0;
  if (std::abs(s) < 1e-12) throw PoleError("window constants have a pole at m0^2 = 1");
  if (std::abs(s - 1.0) < 1e-12) throw PoleError("A1 has a pole at m0^2 = 2");
  if (params.F_rv == 0.0) throw InvalidArgument("F(r_v) must be nonzero");
  const double scale = params.rho2_tilde / params.F_rv;

  // Real inputs are lifted to complex with a +0 imaginary part so that the
  // principal branches of sqrt and atanh apply across the cuts.
  const cplx root = std::sqrt(cplx(s, 0.0));
  const cplx arg = std::sqrt(cplx(m0 / s, 0.0));
  WindowConstants c;
  c.A0 = 4.0 * scale * std::atanh(arg) / (params.omega * root);
  c.A1 = cplx(2.0 * scale / (s * (1.0 - 1.0 / s)), 0.0);
  c.A2 = cplx(-scale * params.omega * m0 / (s * (1.0 - m0 * m0 / s)), 0.0);
  return c;
}

std::complex<double> taylor_window_paper(const CosmoParams& params, const WindowConstants& k) {
  const double ti = params.t_i, tf = params.t_f;
  const double ti2 = ti * ti, ti3 = ti2 * ti, ti4 = ti3 * ti;
  const double tf2 = tf * tf, tf3 = tf2 * tf, tf4 = tf3 * tf;
  const cplx a0_group = k.A0 * (tf2 / 2 - ti2 / 2 - ti * tf + ti2 / 2);
  const cplx a1_group = k.A1 * (tf3 / 6 - ti3 / 6 - ti * tf / 2 + ti2 / 2);
  const cplx a2_group = k.A2 * (tf4 / 12 - ti4 / 12 - ti3 * tf / 3 + ti4 / 3);
  return a0_group + a1_group + a2_group;
}

std::complex<double> taylor_window_consistent(const CosmoParams& params, const WindowConstants& k) {
  const double d = params.t_f - params.t_i;
  const double d2 = d * d;
  return k.A0 * (d2 / 2) + k.A1 * (d2 * d / 6) + k.A2 * (d2 * d2 / 12);
}

WindowReport window_report(const CosmoParams& params) {
  params.validate();
  WindowReport r;
  r.params = params;
  r.constants = window_constants(params);
  r.window_paper = taylor_window_paper(params, r.constants);
  r.window_consistent = taylor_window_consistent(params, r.constants);
  r.discrepancy = std::abs(r.window_paper - r.window_consistent);
  r.complex_domain = complex_domain(params.m0);
  r.imaginary_parts = r.constants.has_imaginary_part();
  r.small_window = params.window_is_small();
  if (r.complex_domain) {
    r.domain_note = "m0 <= golden ratio: radicands or the arctanh argument leave the real domain; "
                    "principal complex branches used";
    if (!r.imaginary_parts) r.domain_note += " (imaginary parts cancel in the constants)";
  } else {
    r.domain_note = "real domain";
  }
  return r;
}

}  // namespace virinv
