#include "pttunnel/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pttunnel/errors.hpp"

namespace pttunnel {

using namespace std::complex_literals;

double TransferMatrix::max_abs() const {
  return std::max({std::abs(m11), std::abs(m12), std::abs(m21), std::abs(m22)});
}

TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
  return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
          a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
}

double determinant_residual(const TransferMatrix& m) {
  // Normalise by the largest element first so the products cannot overflow.
  const double s = m.max_abs();
  if (s == 0.0) return 1.0;
  const cplx a11 = m.m11 / s, a12 = m.m12 / s, a21 = m.m21 / s, a22 = m.m22 / s;
  const double inv_s2 = 1.0 / s / s;
  const double products = std::abs(a11 * a22) + std::abs(a12 * a21);
  return std::abs(a11 * a22 - a12 * a21 - inv_s2) / std::max(inv_s2, products);
}

BarrierParams barrier_params(const Particle& particle, cplx potential, double width, int offset,
                             SqrtBranch branch) {
  const double k = particle.k();
  BarrierParams bp{};
  bp.kc = std::sqrt(cplx(particle.energy()) - potential);
  if (branch == SqrtBranch::Negated) bp.kc = -bp.kc;
  bp.mu = bp.kc / k;
  bp.offset = offset;

  const cplx arg = bp.kc * width;
  const cplx c = std::cos(arg);
  const cplx sn = std::sin(arg);
  cplx sum_term;   // (mu + 1/mu) sin(kc b)
  cplx diff_term;  // (mu - 1/mu) sin(kc b)
  if (bp.kc == 0.0) {
    // kc -> 0 limit: (1/mu) sin(kc b) -> k b.
    sum_term = k * width;
    diff_term = -k * width;
  } else {
    sum_term = (bp.mu + 1.0 / bp.mu) * sn;
    diff_term = (bp.mu - 1.0 / bp.mu) * sn;
  }
  bp.p_plus = 2.0 * c + 1i * sum_term;
  bp.p_minus = 2.0 * c - 1i * sum_term;
  bp.s = 1i * diff_term;
  return bp;
}

TransferMatrix barrier_matrix(const Particle& particle, const BarrierParams& p, double width) {
  const double k = particle.k();
  const double kb = k * width;
  const double shift = kb * (1.0 + 2.0 * p.offset);
  return {0.5 * std::polar(1.0, -kb) * p.p_plus, 0.5 * std::polar(1.0, -shift) * p.s,
          -0.5 * std::polar(1.0, shift) * p.s, 0.5 * std::polar(1.0, kb) * p.p_minus};
}

TransferMatrix barrier_matrix(const Particle& particle, cplx potential, double width, int offset) {
  if (!(width > 0.0)) throw NumericError(ErrorCode::InvalidInput, "barrier width must be > 0");
  if (offset < 0) throw NumericError(ErrorCode::InvalidInput, "barrier offset must be >= 0");
  return barrier_matrix(particle, barrier_params(particle, potential, width, offset), width);
}

TransferMatrix compose(const TransferMatrix& outer, const TransferMatrix& inner) {
  return outer * inner;
}

TransferMatrix unit_cell_matrix(const Particle& particle, const CellSpec& cell) {
  const double v = cell.strength();
  const double b = cell.width();
  const BarrierParams gain = barrier_params(particle, cplx(0.0, v), b, 0);
  const BarrierParams loss = barrier_params(particle, cplx(0.0, -v), b, 1);

  const cplx pp1 = gain.p_plus, pm1 = gain.p_minus, s1 = gain.s;
  const cplx pp2 = loss.p_plus, pm2 = loss.p_minus, s2 = loss.s;
  const double kb2 = 2.0 * particle.k() * b;
  const cplx back = std::polar(1.0, -kb2);
  const cplx fwd = std::polar(1.0, kb2);
  return {0.25 * back * (pp1 * pp2 - s1 * s2), 0.25 * back * (pp2 * s1 + pm1 * s2),
          -0.25 * fwd * (pm2 * s1 + pp1 * s2), 0.25 * fwd * (pm1 * pm2 - s1 * s2)};
}

TransferMatrix layered_matrix(const Particle& particle, std::span<const cplx> potentials,
                              double width) {
  TransferMatrix m;
  for (std::size_t j = 0; j < potentials.size(); ++j) {
    m = barrier_matrix(particle, potentials[j], width, static_cast<int>(j)) * m;
    if (!(m.max_abs() <= kOverflowGuard)) {
      throw NumericError(ErrorCode::Overflow, "transfer-matrix product exceeds 1e280 after " +
                                                  std::to_string(j + 1) + " barriers");
    }
  }
  return m;
}

TransferMatrix lattice_matrix_direct(const Particle& particle, const CellSpec& cell, int cells) {
  if (cells < 0) throw NumericError(ErrorCode::InvalidInput, "cell count must be >= 0");
  std::vector<cplx> potentials;
  potentials.reserve(2 * static_cast<std::size_t>(cells));
  for (int m = 0; m < cells; ++m) {
    potentials.emplace_back(0.0, cell.strength());
    potentials.emplace_back(0.0, -cell.strength());
  }
  return layered_matrix(particle, potentials, cell.width());
}

cplx transmission_from_matrix(const TransferMatrix& m) {
  if (!(std::abs(m.m22) >= 1e-12 * m.max_abs())) {
    throw NumericError(ErrorCode::SpectralSingularity, "|m22| vanishes relative to |M|");
  }
  return 1.0 / m.m22;
}

}  // namespace pttunnel
