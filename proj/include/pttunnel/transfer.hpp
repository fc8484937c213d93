#pragma once

// Transfer matrices for complex rectangular barriers of equal width.
//
// A barrier with offset index j occupies [j b, (j + 1) b]; the matrix maps the
// plane-wave amplitudes (A, B) of A e^{ikx} + B e^{-ikx} on its left to those
// on its right. Matrices for regions further right multiply from the left.

#include <complex>
#include <span>

#include "pttunnel/model.hpp"

namespace pttunnel {

using cplx = std::complex<double>;

struct TransferMatrix {
  cplx m11{1.0, 0.0};
  cplx m12{0.0, 0.0};
  cplx m21{0.0, 0.0};
  cplx m22{1.0, 0.0};

  static TransferMatrix identity() { return {}; }

  cplx det() const { return m11 * m22 - m12 * m21; }
  /// Largest element magnitude.
  double max_abs() const;
};

TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b);

/// |det - 1| relative to the magnitude of the two products forming det.
double determinant_residual(const TransferMatrix& m);

enum class SqrtBranch { Principal, Negated };

/// Intermediate quantities of a single barrier.
struct BarrierParams {
  cplx kc;       // sqrt(E - Vc)
  cplx mu;       // kc / k
  cplx p_plus;   // 2 cos(kc b) + i (mu + 1/mu) sin(kc b)
  cplx p_minus;  // 2 cos(kc b) - i (mu + 1/mu) sin(kc b)
  cplx s;        // i (mu - 1/mu) sin(kc b)
  int offset;
};

BarrierParams barrier_params(const Particle& particle, cplx potential, double width, int offset,
                             SqrtBranch branch = SqrtBranch::Principal);

TransferMatrix barrier_matrix(const Particle& particle, const BarrierParams& params, double width);
TransferMatrix barrier_matrix(const Particle& particle, cplx potential, double width, int offset);

/// outer * inner, where `inner` is the region on the left.
TransferMatrix compose(const TransferMatrix& outer, const TransferMatrix& inner);

/// Unit cell (+iV at offset 0, -iV at offset 1) from its explicit product form.
TransferMatrix unit_cell_matrix(const Particle& particle, const CellSpec& cell);

/// Product over abutting barriers, potentials[j] at offset j.
TransferMatrix layered_matrix(const Particle& particle, std::span<const cplx> potentials,
                              double width);

/// Elements above this magnitude make the direct product unusable.
inline constexpr double kOverflowGuard = 1e280;

/// Direct product of N translated unit cells; cell m uses offsets 2m, 2m+1.
/// Throws Overflow once any element exceeds kOverflowGuard.
TransferMatrix lattice_matrix_direct(const Particle& particle, const CellSpec& cell, int cells);

/// t = 1/m22. Throws SpectralSingularity when |m22| < 1e-12 * max_abs().
cplx transmission_from_matrix(const TransferMatrix& m);

}  // namespace pttunnel
