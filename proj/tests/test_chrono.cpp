#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "pttunnel/chrono.hpp"
#include "pttunnel/errors.hpp"
#include "pttunnel/specfun.hpp"
#include "pttunnel/transfer.hpp"
#include "support.hpp"

using namespace pttunnel;
using namespace std::complex_literals;
using pttunnel::testing::Draw;
using pttunnel::testing::rel_err;

namespace {

// tau_inf(E = 1, V = 20), frozen from a 200-digit transfer-matrix time of a
// single cell at b = 20 and b = 30 (identical to 20 digits).
constexpr double kTauInfE1V20 = 0.15401923801567342;

// tau(E = 1, V = 20, b = 0.25, N = 2), frozen from an independent
// 40-digit derivative of arg(t e^{ikL}) over the 4-barrier product.
constexpr double kTauE1V20b025N2 = 0.21366563276882995;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const NumericError& e) {
    return e.code();
  }
  FAIL("no NumericError thrown");
  return ErrorCode::InvalidInput;
}

}  // namespace

TEST_CASE("xi and chi in free space") {
  const XiChi xc = xi_chi(Particle(1.0), CellSpec(0.0, 1.0));
  CHECK(rel_err(xc.xi, std::cos(2.0)) < 1e-15);
  CHECK(rel_err(xc.chi, std::sin(2.0)) < 1e-15);
  const XiChiPrime d = xi_chi_prime(Particle(1.0), CellSpec(0.0, 1.0));
  CHECK(rel_err(d.xi_prime, -2.0 * std::sin(2.0)) < 1e-14);
  CHECK(rel_err(d.chi_prime, 2.0 * std::cos(2.0)) < 1e-14);
}

TEST_CASE("xi matches the unexpanded paper form") {
  Draw draw(41);
  for (int i = 0; i < 1000; ++i) {
    const double e = draw.uniform(0.1, 50.0);
    const double v = draw.uniform(0.0, 100.0);
    const double b = draw.uniform(0.01, 1.0);
    const DerivedQuantities d = derived_quantities(Particle(e), CellSpec(v, b));
    const double sa = std::sin(d.alpha), ca = std::cos(d.alpha);
    const double sb = std::sinh(d.beta), cb = std::cosh(d.beta);
    const double paper = 0.5 * (std::cos(2.0 * d.alpha) + std::cosh(2.0 * d.beta)) -
                         std::cos(2.0 * d.phi) * (cb * cb * sa * sa + ca * ca * sb * sb);
    const ScaledCellTerms s = scaled_cell_terms(Particle(e), CellSpec(v, b));
    const double xi = s.xi * std::exp(s.log_scale);
    INFO("E = " << e << ", V = " << v << ", b = " << b);
    CHECK(std::abs(xi - paper) <= 1e-12 * std::cosh(2.0 * d.beta));
    CHECK(std::abs((s.xi_minus_one - s.xi + std::exp(-s.log_scale)) * std::exp(s.log_scale)) <
          1e-12 * std::cosh(2.0 * d.beta));
    CHECK(std::abs((s.xi_plus_one - s.xi - std::exp(-s.log_scale)) * std::exp(s.log_scale)) <
          1e-12 * std::cosh(2.0 * d.beta));
  }
}

TEST_CASE("xi and chi reproduce the unit-cell transmission") {
  Draw draw(42);
  for (int i = 0; i < 500; ++i) {
    const Particle p(i == 0 ? 1.0 : draw.uniform(0.1, 50.0));
    const CellSpec cell(i == 0 ? 20.0 : draw.uniform(0.0, 100.0),
                        i == 0 ? 0.3 : draw.uniform(0.01, 1.0));
    const XiChi xc = xi_chi(p, cell);
    const cplx t = std::exp(-2.0i * p.k() * cell.width()) / (xc.xi - 1i * xc.chi);
    const cplx oracle = transmission_from_matrix(unit_cell_matrix(p, cell));
    CHECK(rel_err(t, oracle) < 1e-10);
  }
}

TEST_CASE("primed xi and chi match central differences") {
  struct Case {
    double e, v, b;
  };
  Draw draw(43);
  for (int i = 0; i < 300; ++i) {
    Case c{draw.uniform(0.1, 50.0), draw.uniform(0.0, 100.0), draw.uniform(0.01, 1.5)};
    if (i == 0) c = {1.0, 20.0, 0.5};
    if (i == 1) c = {4.0, 10.0, 1.0};
    const double k = std::sqrt(c.e);
    const double h = 1e-6 * k;
    const CellSpec cell(c.v, c.b);
    const XiChi hi = xi_chi(Particle((k + h) * (k + h)), cell);
    const XiChi lo = xi_chi(Particle((k - h) * (k - h)), cell);
    const XiChiPrime d = xi_chi_prime(Particle(c.e), cell);
    const XiChi mid = xi_chi(Particle(c.e), cell);
    const double scale = std::max({std::abs(mid.xi), std::abs(mid.chi), 1.0}) * c.b *
                         derived_quantities(Particle(c.e), cell).rho;
    INFO("E = " << c.e << ", V = " << c.v << ", b = " << c.b);
    CHECK(std::abs((hi.xi - lo.xi) / (2.0 * h) - d.xi_prime) / std::max(std::abs(d.xi_prime), scale * 1e-3) < 1e-6);
    CHECK(std::abs((hi.chi - lo.chi) / (2.0 * h) - d.chi_prime) / std::max(std::abs(d.chi_prime), scale * 1e-3) < 1e-6);
  }
}

TEST_CASE("asymptotic xi at b = 3 approaches f1 e^{2 beta}") {
  const Particle p(1.0);
  const CellSpec cell(20.0, 3.0);
  const ScaledCellTerms s = scaled_cell_terms(p, cell);
  CHECK(rel_err(s.xi, hartman_coeffs(p, cell).f1) < 1e-4);
}

TEST_CASE("beta above the limit is refused") {
  CHECK(code_of([] { (void)xi_chi(Particle(1.0), CellSpec(20.0, 200.0)); }) == ErrorCode::Overflow);
  CHECK(code_of([] { (void)tunneling_time(Particle(1.0), CellSpec(20.0, 200.0), 1); }) ==
        ErrorCode::Overflow);
}

TEST_CASE("transmission_closed examples") {
  CHECK(std::abs(transmission_closed(Particle(1.0), CellSpec(0.0, 1.0), 5) - 1.0) < 1e-12);
  CHECK(transmission_closed(Particle(3.0), CellSpec(7.0, 0.2), 0) == cplx{1.0, 0.0});
  const Particle p(1.0);
  const CellSpec cell(20.0, 0.1);
  CHECK(rel_err(transmission_closed(p, cell, 4),
                transmission_from_matrix(lattice_matrix_direct(p, cell, 4))) < 1e-9);
}

TEST_CASE("|t| |G| = 1 with G from polynomial values") {
  Draw draw(44);
  for (int i = 0; i < 500; ++i) {
    const Particle p(draw.uniform(0.1, 50.0));
    const CellSpec cell(draw.uniform(0.0, 100.0), draw.uniform(0.01, 0.5));
    const int n = draw.integer(1, 20);
    const XiChi xc = xi_chi(p, cell);
    const cplx g = cheb_T(n, xc.xi) - 1i * xc.chi * cheb_U(n - 1, xc.xi);
    if (!std::isfinite(std::abs(g)) || std::abs(g) > 1e200 || std::abs(g) < 1e-6) continue;
    const cplx t = transmission_closed(p, cell, n);
    INFO("E = " << p.energy() << ", V = " << cell.strength() << ", b = " << cell.width()
                << ", N = " << n);
    CHECK(std::abs(std::abs(t) * std::abs(g) - 1.0) < 1e-12 * std::max(1.0, std::abs(xc.chi * cheb_U(n - 1, xc.xi)) / std::abs(g)));
  }
}

TEST_CASE("transmission never overflows and reports huge G as tiny t") {
  // beta ~ 300: G ~ e^{2 beta N}; t underflows gracefully or reports Overflow.
  const Particle p(1.0);
  const CellSpec cell(20.0, 97.0);
  const cplx t1 = transmission_closed(p, cell, 1);
  CHECK(std::isfinite(t1.real()));
  CHECK(std::abs(t1) < 1e-200);
  CHECK(code_of([&] { (void)transmission_closed(p, cell, 4); }) == ErrorCode::Overflow);
}

TEST_CASE("phase_theta equals arg t modulo 2 pi") {
  struct Case {
    double e, v, b;
    int n;
  };
  for (const Case& c : {Case{1.0, 20.0, 0.2, 3}, Case{4.0, 5.0, 0.4, 2}, Case{2.0, 60.0, 0.8, 7}}) {
    const Particle p(c.e);
    const CellSpec cell(c.v, c.b);
    const cplx t = transmission_closed(p, cell, c.n);
    const double theta = phase_theta(p, cell, c.n);
    CHECK(std::abs(std::polar(1.0, theta) - t / std::abs(t)) < 1e-10);
  }
  Draw draw(45);
  for (int i = 0; i < 500; ++i) {
    const Particle p(draw.uniform(0.1, 50.0));
    const CellSpec cell(draw.uniform(0.0, 100.0), draw.uniform(0.01, 1.0));
    const int n = draw.integer(1, 20);
    try {
      const cplx t = transmission_closed(p, cell, n);
      const double theta = phase_theta(p, cell, n);
      CHECK(std::abs(theta) <= std::numbers::pi);
      CHECK(std::abs(std::polar(1.0, theta) - t / std::abs(t)) < 1e-10);
    } catch (const NumericError&) {
    }
  }
  // Free space: theta = arctan(tan kL) - kL is a multiple of pi; the pi
  // shift where T_N < 0 then makes it exactly 0 mod 2 pi.
  CHECK(std::abs(std::polar(1.0, phase_theta(Particle(1.0), CellSpec(0.0, 1.0), 2)) - 1.0) < 1e-12);
}

TEST_CASE("tunneling_time examples") {
  CHECK(rel_err(tunneling_time(Particle(1.0), CellSpec(0.0, 1.0), 3), 3.0) < 1e-12);
  CHECK(tunneling_time(Particle(1.0), CellSpec(20.0, 1.0), 0) == 0.0);

  const Particle p(1.0);
  const CellSpec cell(20.0, 0.25);
  const double tau = tunneling_time(p, cell, 2);
  CHECK(rel_err(tau, kTauE1V20b025N2) < 1e-12);
  CHECK(rel_err(tau, tunneling_time_fd(p, cell, 2)) < 1e-6);

  const double tau_inf = hartman_limit_time(p, 20.0);
  for (int n = 1; n <= 4; ++n) {
    CHECK(rel_err(tunneling_time(p, CellSpec(20.0, 4.0), n), tau_inf) < 1e-2);
  }
}

TEST_CASE("finite-difference oracle") {
  CHECK(rel_err(tunneling_time_fd(Particle(1.0), CellSpec(0.0, 1.0), 3, 1e-6), 3.0) < 1e-8);
  CHECK_THROWS_AS(tunneling_time_fd(Particle(1.0), CellSpec(0.0, 1.0), 3, 1e-2), NumericError);
  CHECK_THROWS_AS(tunneling_time_fd(Particle(1.0), CellSpec(0.0, 1.0), 3, 1e-12), NumericError);

  // O(h^2) stencil: halving h quarters the error.
  const Particle p(1.0);
  const CellSpec cell(20.0, 0.25);
  const double exact = tunneling_time(p, cell, 2);
  const double coarse = tunneling_time_fd(p, cell, 2, 1e-3) - exact;
  const double fine = tunneling_time_fd(p, cell, 2, 5e-4) - exact;
  CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.05));

  CHECK(rel_err(tunneling_time_fd_richardson(p, cell, 2), exact) < 1e-8);
  CHECK(rel_err(tunneling_time_fd(p, cell, 2, 1e-6, PhaseSource::ClosedForm), exact) < 1e-6);
}

TEST_CASE("analytic time agrees with the finite-difference oracle") {
  Draw draw(46);
  int compared = 0;
  for (int i = 0; i < 200; ++i) {
    const Particle p(draw.uniform(0.1, 50.0));
    const CellSpec cell(draw.uniform(0.0, 100.0), draw.uniform(0.01, 3.0));
    const int n = draw.integer(1, 20);
    const DerivedQuantities d = derived_quantities(p, cell);
    if (d.beta * n > 200.0) continue;
    try {
      const TunnelingTime tt = tunneling_time_detailed(p, cell, n);
      if (tt.endpoint_path) continue;
      const double oracle = tunneling_time_fd_richardson(p, cell, n);
      INFO("E = " << p.energy() << ", V = " << cell.strength() << ", b = " << cell.width()
                  << ", N = " << n);
      CHECK(rel_err(tt.tau, oracle) < 1e-5);
      ++compared;
    } catch (const NumericError&) {
    }
  }
  CHECK(compared > 150);
}

TEST_CASE("endpoint path near a band edge agrees with the oracle nearby") {
  // Free space at 2kb = 2 pi has xi = 1 exactly in exact arithmetic.
  const Particle p(1.0);
  const double b = std::numbers::pi;
  const TunnelingTime at = tunneling_time_detailed(p, CellSpec(0.0, b), 3);
  CHECK(at.endpoint_path);
  CHECK(rel_err(at.tau, 3.0 * b) < 1e-12);

  // A lossy cell tuned close to xi = 1: compare with the oracle a step away.
  const double v = 1e-3;
  const CellSpec edge(v, b);
  const TunnelingTime tt = tunneling_time_detailed(p, edge, 2);
  const double oracle = tunneling_time_fd_richardson(Particle(1.0 + 1e-6), edge, 2);
  CHECK(rel_err(tt.tau, oracle) < 1e-4);
}

TEST_CASE("closed_form bundles consistent values") {
  const Particle p(1.0);
  const CellSpec cell(20.0, 0.2);
  const ClosedForm f = closed_form(p, cell, 3);
  CHECK(f.t == transmission_closed(p, cell, 3));
  CHECK(f.tau == tunneling_time(p, cell, 3));
  CHECK(f.theta == phase_theta(p, cell, 3));
  CHECK(rel_err(f.q, cheb_ratio_q(3, f.xi)) < 1e-12);
}

TEST_CASE("Hartman coefficients") {
  CHECK(code_of([] { (void)hartman_coeffs(Particle(1.0), CellSpec(0.0, 1.0)); }) ==
        ErrorCode::DegenerateV);
  CHECK(code_of([] { (void)hartman_limit_time(Particle(1.0), 0.0); }) == ErrorCode::DegenerateV);

  const DerivedQuantities d = derived_quantities(Particle(1.0), CellSpec(20.0, 1.0));
  const HartmanCoeffs c = hartman_coeffs(Particle(1.0), CellSpec(20.0, 1.0));
  CHECK(rel_err(c.gamma, 0.5 * d.u_minus / std::sin(d.phi)) < 1e-15);

  Draw draw(47);
  for (int i = 0; i < 1000; ++i) {
    const double e = draw.uniform(0.1, 50.0);
    const double v = draw.uniform(1e-3, 100.0);
    const HartmanCoeffs h = hartman_coeffs(Particle(e), CellSpec(v, draw.uniform(0.1, 3.0)));
    INFO("E = " << e << ", V = " << v);
    CHECK(std::abs(h.g2 - h.gamma * h.f4) <= 1e-12 * std::max(std::abs(h.g2), 1.0));
    CHECK(h.f1 > 0.0);
    CHECK(h.f1 <= 0.25);
  }
}

TEST_CASE("Hartman limit value and convergence") {
  const Particle p(1.0);
  const double tau_inf = hartman_limit_time(p, 20.0);
  CHECK(rel_err(tau_inf, kTauInfE1V20) < 1e-12);
  CHECK(rel_err(tunneling_time(p, CellSpec(20.0, 6.0), 1), tau_inf) < 1e-3);

  for (int n = 1; n <= 4; ++n) {
    double previous = INFINITY;
    for (double b : {1.0, 2.0, 3.0, 4.0, 5.0}) {
      const double gap = std::abs(tunneling_time(p, CellSpec(20.0, b), n) - tau_inf);
      INFO("N = " << n << ", b = " << b);
      CHECK(gap < previous);
      previous = gap;
    }
  }
  const double n1 = tunneling_time(p, CellSpec(20.0, 5.0), 1);
  const double n4 = tunneling_time(p, CellSpec(20.0, 5.0), 4);
  CHECK(std::abs(n1 - n4) / tau_inf < 1e-3);
}

TEST_CASE("free propagation and the many-cell bracket") {
  CHECK(free_propagation_time(Particle(1.0), 10.0) == 5.0);
  CHECK(free_propagation_time(Particle(4.0), 1.0) == 0.25);
  CHECK(free_propagation_time(Particle(1.0), 0.0) == 0.0);
  CHECK_THROWS_AS(free_propagation_time(Particle(1.0), -1.0), NumericError);

  CHECK(rel_err(n_infinity_bracket(Particle(1.0), 20.0, 1.0), 0.5) < 1e-12);
  CHECK(rel_err(n_infinity_bracket(Particle(4.0), 7.0, 3.0), 0.75) < 1e-12);
  Draw draw(48);
  for (int i = 0; i < 1000; ++i) {
    const Particle p(draw.uniform(0.1, 50.0));
    const double v = draw.uniform(0.0, 100.0);
    const double span = draw.uniform(0.1, 10.0);
    CHECK(rel_err(n_infinity_bracket(p, v, span), free_propagation_time(p, span)) < 1e-12);
  }
}

TEST_CASE("many thin cells approach free propagation") {
  for (double e : {1.0, 4.0}) {
    for (double v : {5.0, 10.0, 20.0}) {
      const Particle p(e);
      const double tau = tunneling_time(p, CellSpec(v, 1.0 / (2.0 * 4096)), 4096);
      INFO("E = " << e << ", V = " << v);
      CHECK(rel_err(tau, free_propagation_time(p, 1.0)) < 1e-3);
    }
  }
}

TEST_CASE("free space is exact for every N") {
  for (int n = 0; n <= 100; ++n) {
    const Particle p(1.7);
    const CellSpec cell(0.0, 0.37);
    CHECK(std::abs(transmission_closed(p, cell, n) - 1.0) < 1e-12);
    if (n > 0) {
      CHECK(rel_err(tunneling_time(p, cell, n), free_propagation_time(p, 2.0 * n * 0.37)) < 1e-12);
    }
  }
}

TEST_CASE("square barrier") {
  const Particle p(1.0);
  CHECK(rel_err(square_barrier_time(p, 20.0, 10.0), 1.0 / std::sqrt(19.0)) < 1e-6);
  CHECK(square_barrier_time(p, 20.0, 0.0) == 0.0);
  CHECK(square_barrier_time(p, 20.0, 1e-3) < square_barrier_time(p, 20.0, 1e-2));
  CHECK(code_of([&] { (void)square_barrier_time(p, 0.5, 1.0); }) == ErrorCode::InvalidInput);
  CHECK(code_of([&] { (void)square_barrier_time(p, 1.0, 1.0); }) == ErrorCode::InvalidInput);

  // Independent oracle: central difference in E of the transmission phase.
  const auto phase = [](double e, double v, double span) {
    const double k = std::sqrt(e), q = std::sqrt(v - e);
    return std::atan((e - q * q) / (2.0 * k * q) * std::tanh(q * span));
  };
  const double h = 1e-5;
  const double fd = (phase(1.0 + h, 5.0, 2.0) - phase(1.0 - h, 5.0, 2.0)) / (2.0 * h);
  CHECK(rel_err(square_barrier_time(p, 5.0, 2.0), fd) < 1e-6);
}
