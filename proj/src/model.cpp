#include "pttunnel/model.hpp"

#include <cmath>
#include <string>

#include "pttunnel/errors.hpp"

namespace pttunnel {

Particle::Particle(double energy) : energy_(energy) {
  if (!std::isfinite(energy) || !(energy > 0.0)) {
    throw NumericError(ErrorCode::InvalidEnergy,
                       "energy must be finite and > 0, got " + std::to_string(energy));
  }
}

double Particle::k() const noexcept { return std::sqrt(energy_); }

CellSpec::CellSpec(double strength, double width) : strength_(strength), width_(width) {
  if (!std::isfinite(strength) || strength < 0.0) {
    throw NumericError(ErrorCode::InvalidInput, "potential strength must be finite and >= 0");
  }
  if (!std::isfinite(width) || !(width > 0.0)) {
    throw NumericError(ErrorCode::InvalidInput, "barrier width must be finite and > 0");
  }
}

LatticeSpec::LatticeSpec(CellSpec cell, int cells)
    : cell_(cell), cells_(cells), span_(2.0 * cells * cell.width()) {
  if (cells < 0) throw NumericError(ErrorCode::InvalidInput, "cell count must be >= 0");
}

DerivedQuantities derived_quantities(const Particle& particle, const CellSpec& cell) {
  const double k = particle.k();
  const double k2 = particle.energy();
  const double v = cell.strength();
  const double b = cell.width();

  DerivedQuantities d{};
  const double rho2 = std::hypot(k2, v);
  d.rho = std::sqrt(rho2);
  d.phi = 0.5 * std::atan2(v, k2);

  const double cp = std::cos(d.phi);
  const double sp = std::sin(d.phi);
  d.alpha = b * d.rho * cp;
  d.beta = b * d.rho * sp;
  d.u_plus = k / d.rho + d.rho / k;
  d.u_minus = k / d.rho - d.rho / k;

  const double rho3 = rho2 * d.rho;
  const double rho4 = rho2 * rho2;
  const double rho5 = rho4 * d.rho;
  const double kr = k / d.rho;
  d.rho_prime = kr * kr * kr;
  d.phi_prime = -k * v / rho4;
  d.alpha_prime = b * k / rho3 * (v * sp + k2 * cp);
  d.beta_prime = b * k / rho3 * (-v * cp + k2 * sp);
  const double v2_rho5 = v * v / rho5;
  d.u_plus_prime = v2_rho5 * (1.0 - rho2 / k2);
  d.u_minus_prime = v2_rho5 * (1.0 + rho2 / k2);
  return d;
}

}  // namespace pttunnel
