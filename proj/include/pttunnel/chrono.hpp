#pragma once

// Closed-form transmission and stationary-phase tunneling time for N unit
// cells, the two analytic limits (thick barriers, infinitely many thin
// cells), and the real square-barrier baseline.
//
// Time is in natural units (2m = 1, hbar = 1), where a free particle of wave
// number k travels at speed 2k.

#include <complex>

#include "pttunnel/model.hpp"

namespace pttunnel {

using cplx = std::complex<double>;

/// Largest beta = b rho sin(phi) for which e^{2 beta} fits in a double.
inline constexpr double kMaxBeta = 350.0;

struct XiChi {
  double xi;
  double chi;
};

struct XiChiPrime {
  double xi_prime;
  double chi_prime;
};

/// Unit-cell quantities divided by e^{2 beta}; the true value of each field
/// is `field * exp(log_scale)`. Stays O(1) for any beta <= kMaxBeta.
struct ScaledCellTerms {
  double log_scale;
  double xi;
  double xi_minus_one;  // (xi - 1) and (xi + 1), formed without cancellation
  double xi_plus_one;
  double chi;
  double xi_prime;
  double chi_prime;
};

/// Throws Overflow when beta > kMaxBeta.
ScaledCellTerms scaled_cell_terms(const Particle& particle, const CellSpec& cell);

XiChi xi_chi(const Particle& particle, const CellSpec& cell);
XiChiPrime xi_chi_prime(const Particle& particle, const CellSpec& cell);

/// t = e^{-ikL} / G with G = T_N(xi) - i chi U_{N-1}(xi).
cplx transmission_closed(const Particle& particle, const CellSpec& cell, int cells);

/// arctan(q chi) - kL, shifted by pi where T_N(xi) < 0 so that e^{i theta}
/// is the phase of t, and wrapped to [-pi, pi].
double phase_theta(const Particle& particle, const CellSpec& cell, int cells);

struct TunnelingTime {
  double tau;
  bool endpoint_path;  // N^2 |xi^2 - 1| < kUnityWindow, endpoint derivative used
};

TunnelingTime tunneling_time_detailed(const Particle& particle, const CellSpec& cell, int cells);
double tunneling_time(const Particle& particle, const CellSpec& cell, int cells);

/// Everything the closed form produces at one point.
struct ClosedForm {
  double xi;
  double chi;
  double xi_prime;
  double chi_prime;
  double q;
  double theta;
  cplx t;
  double tau;
  bool endpoint_path;
};

ClosedForm closed_form(const Particle& particle, const CellSpec& cell, int cells);

enum class PhaseSource { TransferMatrix, ClosedForm };

/// Central difference of the transmission phase in k (relative step h),
/// unwrapped across the stencil, plus the free passage time L/2k.
double tunneling_time_fd(const Particle& particle, const CellSpec& cell, int cells,
                         double h = 1e-6, PhaseSource source = PhaseSource::TransferMatrix);

/// Richardson-extrapolated central differences (steps h and h/2) of the
/// reduced phase arg(t e^{ikL}), whose k-derivative is 2k tau. Fourth-order
/// accurate; used as the oracle for tunneling_time.
double tunneling_time_fd_richardson(const Particle& particle, const CellSpec& cell, int cells,
                                    double h = 1e-5,
                                    PhaseSource source = PhaseSource::TransferMatrix);

/// Coefficients of the b -> infinity expansions.
/// f3 and g1 oscillate with alpha and depend on the supplied width.
struct HartmanCoeffs {
  double f1, f2, f3, f4;
  double g1, g2, g3;
  double gamma;
};

/// Throws DegenerateV for V = 0.
HartmanCoeffs hartman_coeffs(const Particle& particle, const CellSpec& cell);

/// Saturated time of thick cells, independent of b and N.
double hartman_limit_time(const Particle& particle, double strength);

/// L / 2k.
double free_propagation_time(const Particle& particle, double span);

/// The N -> infinity time written through its bracket,
/// L/(4 k rho^3) [rho^3 + ((k^4 - V^2)/k^2) rho cos 2phi + 2 V rho sin 2phi].
double n_infinity_bracket(const Particle& particle, double strength, double span);

/// Phase time of a real square barrier of height V > E and width L.
double square_barrier_time(const Particle& particle, double height, double span);

}  // namespace pttunnel
