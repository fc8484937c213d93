#include "pttunnel/chrono.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pttunnel/errors.hpp"
#include "pttunnel/specfun.hpp"
#include "pttunnel/transfer.hpp"

namespace pttunnel {

using namespace std::complex_literals;

namespace {

void require_cells(int cells) {
  if (cells < 0) throw NumericError(ErrorCode::InvalidInput, "cell count must be >= 0");
}

double span_of(const CellSpec& cell, int cells) { return 2.0 * cells * cell.width(); }

ScaledArg scaled_xi(const ScaledCellTerms& s) {
  return {s.xi, s.log_scale, s.xi_minus_one, s.xi_plus_one};
}

}  // namespace

ScaledCellTerms scaled_cell_terms(const Particle& particle, const CellSpec& cell) {
  const DerivedQuantities d = derived_quantities(particle, cell);
  if (d.beta > kMaxBeta) {
    throw NumericError(ErrorCode::Overflow,
                       "beta = " + std::to_string(d.beta) + " exceeds " + std::to_string(kMaxBeta));
  }

  // Each hyperbolic function is carried multiplied by w = e^{-2 beta}.
  const double w = std::exp(-2.0 * d.beta);
  const double w_sinh = -0.5 * std::expm1(-4.0 * d.beta);  // w sinh(2 beta)
  const double w_cosh = 0.5 * (1.0 + w * w);               // w cosh(2 beta)

  const double sp = std::sin(d.phi);
  const double cp = std::cos(d.phi);
  const double s2p = std::sin(2.0 * d.phi);
  const double s2a = std::sin(2.0 * d.alpha);
  const double c2a = std::cos(2.0 * d.alpha);

  ScaledCellTerms s{};
  s.log_scale = 2.0 * d.beta;
  // xi = (cos 2a + cosh 2b)/2 - cos 2phi (cosh^2 b sin^2 a + cos^2 a sinh^2 b)
  //    = cos^2 phi cos 2a + sin^2 phi cosh 2b
  s.xi = cp * cp * c2a * w + sp * sp * w_cosh;
  // xi - 1 = 2 sin^2 phi sinh^2 b - 2 cos^2 phi sin^2 a, and likewise for xi + 1.
  const double sa = std::sin(d.alpha);
  const double ca = std::cos(d.alpha);
  const double one_minus_w = -std::expm1(-2.0 * d.beta);
  s.xi_minus_one = 0.5 * sp * sp * one_minus_w * one_minus_w - 2.0 * cp * cp * sa * sa * w;
  s.xi_plus_one = 0.5 * sp * sp * (1.0 + w) * (1.0 + w) + 2.0 * cp * cp * ca * ca * w;
  s.chi = 0.5 * (d.u_plus * cp * s2a * w + d.u_minus * sp * w_sinh);
  s.xi_prime = 2.0 * d.beta_prime * sp * sp * w_sinh - 2.0 * d.alpha_prime * cp * cp * s2a * w +
               d.phi_prime * s2p * (w_cosh - c2a * w);
  s.chi_prime = d.u_plus * (d.alpha_prime * c2a * cp - 0.5 * d.phi_prime * sp * s2a) * w +
                d.u_minus * (d.beta_prime * w_cosh * sp + 0.5 * d.phi_prime * cp * w_sinh) +
                0.5 * d.u_plus_prime * cp * s2a * w + 0.5 * d.u_minus_prime * sp * w_sinh;
  return s;
}

XiChi xi_chi(const Particle& particle, const CellSpec& cell) {
  const ScaledCellTerms s = scaled_cell_terms(particle, cell);
  const double e = std::exp(s.log_scale);
  return {s.xi * e, s.chi * e};
}

XiChiPrime xi_chi_prime(const Particle& particle, const CellSpec& cell) {
  const ScaledCellTerms s = scaled_cell_terms(particle, cell);
  const double e = std::exp(s.log_scale);
  return {s.xi_prime * e, s.chi_prime * e};
}

cplx transmission_closed(const Particle& particle, const CellSpec& cell, int cells) {
  require_cells(cells);
  const ScaledCellTerms s = scaled_cell_terms(particle, cell);
  const double kl = particle.k() * span_of(cell, cells);
  const double e = std::exp(s.log_scale);
  const ChebPoint xi{s.xi * e, s.xi_minus_one * e, s.xi_plus_one * e};
  const double chi = s.chi * e;

  if (cells == 0 || std::abs(xi.x) <= 1.0) {
    // Bounded polynomial values; this also covers the roots of T_N.
    const cplx g = (xi.x - 1i * chi) * cheb_U(cells - 1, xi) - cheb_U(cells - 2, xi);
    if (std::abs(g) < 1e-12) {
      throw NumericError(ErrorCode::SpectralSingularity, "|G| < 1e-12");
    }
    return std::polar(1.0, -kl) / g;
  }

  // G = T_N (1 - i q chi); only log|T_N| is ever formed.
  const ChebRatio r = cheb_ratio(cells, scaled_xi(s));
  const double q_chi = r.q * s.chi;
  const double log_abs_g = r.log_abs_t + 0.5 * std::log1p(q_chi * q_chi);
  if (log_abs_g > std::log(std::numeric_limits<double>::max())) {
    throw NumericError(ErrorCode::Overflow, "|G| exceeds double range, log|G| = " +
                                                std::to_string(log_abs_g));
  }
  if (log_abs_g < std::log(1e-12)) {
    throw NumericError(ErrorCode::SpectralSingularity, "|G| < 1e-12");
  }
  return std::polar(r.t_sign * std::exp(-r.log_abs_t), -kl) / (1.0 - 1i * q_chi);
}

double phase_theta(const Particle& particle, const CellSpec& cell, int cells) {
  require_cells(cells);
  if (cells == 0) return 0.0;
  const ScaledCellTerms s = scaled_cell_terms(particle, cell);
  const ChebRatio r = cheb_ratio(cells, scaled_xi(s));
  const double kl = particle.k() * span_of(cell, cells);
  double theta = std::atan(r.q * s.chi) - kl;
  if (r.t_sign < 0) theta += std::numbers::pi;
  return std::remainder(theta, 2.0 * std::numbers::pi);
}

TunnelingTime tunneling_time_detailed(const Particle& particle, const CellSpec& cell, int cells) {
  require_cells(cells);
  if (cells == 0) return {0.0, false};
  const ScaledCellTerms s = scaled_cell_terms(particle, cell);
  const ChebRatio r = cheb_ratio(cells, scaled_xi(s));

  // d(q chi)/dk = q chi' + chi xi' dq/dxi, where
  // dq/dxi = N/(xi^2-1) - N q^2 - q xi/(xi^2-1).
  // The scale factors cancel: q carries e^{2beta}, dq/dxi carries e^{4beta}.
  const double q_chi = r.q * s.chi;
  const double numerator = r.q * s.chi_prime + s.chi * s.xi_prime * r.dq_dx;
  const double tau = numerator / (2.0 * particle.k() * (1.0 + q_chi * q_chi));
  return {tau, r.endpoint};
}

double tunneling_time(const Particle& particle, const CellSpec& cell, int cells) {
  return tunneling_time_detailed(particle, cell, cells).tau;
}

ClosedForm closed_form(const Particle& particle, const CellSpec& cell, int cells) {
  require_cells(cells);
  const ScaledCellTerms s = scaled_cell_terms(particle, cell);
  const double e = std::exp(s.log_scale);

  ClosedForm f{};
  f.xi = s.xi * e;
  f.chi = s.chi * e;
  f.xi_prime = s.xi_prime * e;
  f.chi_prime = s.chi_prime * e;
  f.q = cells == 0 ? 0.0 : cheb_ratio(cells, scaled_xi(s)).q / e;
  f.theta = phase_theta(particle, cell, cells);
  f.t = transmission_closed(particle, cell, cells);
  const TunnelingTime tt = tunneling_time_detailed(particle, cell, cells);
  f.tau = tt.tau;
  f.endpoint_path = tt.endpoint_path;
  return f;
}

namespace {

void require_step(double h) {
  if (!(h >= 1e-9 && h <= 1e-3)) {
    throw NumericError(ErrorCode::InvalidInput, "relative step must lie in [1e-9, 1e-3]");
  }
}

double transmission_phase(const Particle& p, const CellSpec& cell, int cells, PhaseSource source) {
  if (source == PhaseSource::TransferMatrix) {
    return std::arg(transmission_from_matrix(lattice_matrix_direct(p, cell, cells)));
  }
  return std::arg(transmission_closed(p, cell, cells));
}

// Central difference of arg(t e^{i k shift}) over k(1 +- h), unwrapped by
// minimal jump.
double phase_slope(const Particle& particle, const CellSpec& cell, int cells, double h,
                   PhaseSource source, double shift) {
  const double k = particle.k();
  const Particle hi(k * k * (1.0 + h) * (1.0 + h));
  const Particle lo(k * k * (1.0 - h) * (1.0 - h));
  const double up = transmission_phase(hi, cell, cells, source) + hi.k() * shift;
  const double down = transmission_phase(lo, cell, cells, source) + lo.k() * shift;
  const double jump = std::remainder(up - down, 2.0 * std::numbers::pi);
  return jump / (hi.k() - lo.k());
}

}  // namespace

double tunneling_time_fd(const Particle& particle, const CellSpec& cell, int cells, double h,
                         PhaseSource source) {
  require_cells(cells);
  require_step(h);
  const double k = particle.k();
  const double span = span_of(cell, cells);
  return phase_slope(particle, cell, cells, h, source, 0.0) / (2.0 * k) + span / (2.0 * k);
}

double tunneling_time_fd_richardson(const Particle& particle, const CellSpec& cell, int cells,
                                    double h, PhaseSource source) {
  require_cells(cells);
  require_step(h);
  require_step(0.5 * h);
  const double span = span_of(cell, cells);
  const double coarse = phase_slope(particle, cell, cells, h, source, span);
  const double fine = phase_slope(particle, cell, cells, 0.5 * h, source, span);
  return (4.0 * fine - coarse) / 3.0 / (2.0 * particle.k());
}

HartmanCoeffs hartman_coeffs(const Particle& particle, const CellSpec& cell) {
  if (cell.strength() == 0.0) {
    throw NumericError(ErrorCode::DegenerateV, "free space (V = 0) has no thick-barrier regime");
  }
  const DerivedQuantities d = derived_quantities(particle, cell);
  const double k = particle.k();
  const double k2 = particle.energy();
  const double v = cell.strength();
  const double sp = std::sin(d.phi);
  const double cp = std::cos(d.phi);
  const double s2p = std::sin(2.0 * d.phi);
  const double rho3 = d.rho * d.rho * d.rho;
  const double along = k2 * cp * cp + 0.5 * v * s2p;   // k^2 cos^2 phi + V sin 2phi / 2
  const double across = k2 * sp * sp - 0.5 * v * s2p;  // k^2 sin^2 phi - V sin 2phi / 2

  HartmanCoeffs c{};
  c.f1 = 0.5 * sp * sp;
  c.f2 = 0.5 * d.phi_prime * s2p;
  c.f3 = -2.0 * k / rho3 * std::sin(2.0 * d.alpha) * cp * along;
  c.f4 = k * sp / rho3 * across;
  c.g1 = k * d.u_plus * std::cos(2.0 * d.alpha) / rho3 * along;
  c.g2 = k * d.u_minus / (2.0 * rho3) * across;
  c.g3 = 0.25 * (d.phi_prime * d.u_minus * cp + d.u_minus_prime * sp);
  c.gamma = 0.5 * d.u_minus / sp;
  return c;
}

double hartman_limit_time(const Particle& particle, double strength) {
  if (strength == 0.0) {
    throw NumericError(ErrorCode::DegenerateV, "free space (V = 0) has no thick-barrier regime");
  }
  // The limit does not involve b; any width gives the same b-free coefficients.
  const HartmanCoeffs c = hartman_coeffs(particle, CellSpec(strength, 1.0));
  return (c.g3 - c.gamma * c.f2) / (2.0 * particle.k() * (1.0 + c.gamma * c.gamma) * c.f1);
}

double free_propagation_time(const Particle& particle, double span) {
  if (!(span >= 0.0)) throw NumericError(ErrorCode::InvalidInput, "span must be >= 0");
  return span / (2.0 * particle.k());
}

double n_infinity_bracket(const Particle& particle, double strength, double span) {
  if (!(strength >= 0.0)) throw NumericError(ErrorCode::InvalidInput, "V must be >= 0");
  if (!(span > 0.0)) throw NumericError(ErrorCode::InvalidInput, "span must be > 0");
  const DerivedQuantities d = derived_quantities(particle, CellSpec(strength, 1.0));
  const double k = particle.k();
  const double k2 = particle.energy();
  const double rho3 = d.rho * d.rho * d.rho;
  const double bracket = rho3 + ((k2 * k2 - strength * strength) / k2) * d.rho * std::cos(2.0 * d.phi) +
                         2.0 * strength * d.rho * std::sin(2.0 * d.phi);
  return span / (4.0 * k * rho3) * bracket;
}

double square_barrier_time(const Particle& particle, double height, double span) {
  const double e = particle.energy();
  if (!(height > e)) {
    throw NumericError(ErrorCode::InvalidInput, "square barrier requires V > E (tunneling regime)");
  }
  if (!(span >= 0.0)) throw NumericError(ErrorCode::InvalidInput, "span must be >= 0");

  // d/dE arctan(f tanh(qL)), f = (k^2 - q^2)/(2kq), q = sqrt(V - E).
  const double k = particle.k();
  const double q = std::sqrt(height - e);
  const double f = (e - q * q) / (2.0 * k * q);
  const double sum = e + q * q;
  const double df = sum * sum / (4.0 * e * k * q * q * q);
  const double th = std::tanh(q * span);
  const double ch = std::cosh(q * span);
  const double dth = -span / (2.0 * q * ch * ch);
  return (df * th + f * dth) / (1.0 + f * f * th * th);
}

}  // namespace pttunnel
