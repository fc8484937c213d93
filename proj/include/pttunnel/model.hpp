#pragma once

// Physical parameters in natural units (2m = 1, hbar = 1, c = 1) and the
// geometric quantities of the complex wave number inside a barrier.

namespace pttunnel {

/// Incident particle. The energy is the only stored quantity; k = sqrt(E).
class Particle {
 public:
  /// Throws InvalidEnergy unless E is finite and positive.
  explicit Particle(double energy);

  double energy() const noexcept { return energy_; }
  double k() const noexcept;

 private:
  double energy_;
};

/// One (+iV, -iV) unit cell: strength V >= 0 and single-barrier width b > 0.
class CellSpec {
 public:
  CellSpec(double strength, double width);

  double strength() const noexcept { return strength_; }
  double width() const noexcept { return width_; }

 private:
  double strength_;
  double width_;
};

/// N abutting unit cells spanning L = 2 N b.
class LatticeSpec {
 public:
  LatticeSpec(CellSpec cell, int cells);

  const CellSpec& cell() const noexcept { return cell_; }
  int cells() const noexcept { return cells_; }
  double span() const noexcept { return span_; }

 private:
  CellSpec cell_;
  int cells_;
  double span_;
};

/// rho e^{i phi} = sqrt(k^2 + iV) and the quantities built from it, together
/// with their derivatives with respect to k (suffix `_prime`).
struct DerivedQuantities {
  double rho;
  double phi;      // in [0, pi/4)
  double alpha;    // b rho cos(phi)
  double beta;     // b rho sin(phi)
  double u_plus;   // k/rho + rho/k
  double u_minus;  // k/rho - rho/k

  double rho_prime;
  double phi_prime;
  double alpha_prime;
  double beta_prime;
  double u_plus_prime;
  double u_minus_prime;
};

DerivedQuantities derived_quantities(const Particle& particle, const CellSpec& cell);

}  // namespace pttunnel
