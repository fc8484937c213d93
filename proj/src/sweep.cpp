#include "pttunnel/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include "pttunnel/errors.hpp"
#include "pttunnel/specfun.hpp"
#include "pttunnel/transfer.hpp"

namespace pttunnel {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw NumericError(ErrorCode::InvalidInput, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

// Runs f(i) for i in [0, n); rows are written by index so the output order
// never depends on scheduling.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            f(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<int> cell_grid(const GridSpec& grid) {
  std::vector<int> cells;
  for (double v : grid.values()) {
    const long long n = std::llround(v);
    if (n < 1 || n > std::numeric_limits<int>::max()) {
      throw NumericError(ErrorCode::InvalidInput, "cell grid values must be >= 1");
    }
    cells.push_back(static_cast<int>(n));
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

double relative(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

}  // namespace

std::string_view to_string(SweepMode mode) noexcept {
  switch (mode) {
    case SweepMode::Point: return "point";
    case SweepMode::SweepB: return "sweep-b";
    case SweepMode::SweepN: return "sweep-n";
    case SweepMode::Limits: return "limits";
  }
  return "unknown";
}

std::string_view to_string(TauMethod method) noexcept {
  switch (method) {
    case TauMethod::Analytic: return "analytic";
    case TauMethod::HartmanLimit: return "hartman-limit";
    case TauMethod::FdFallback: return "fd-fallback";
  }
  return "unknown";
}

std::string flags_to_string(unsigned flags) {
  std::string out;
  auto add = [&](unsigned bit, std::string_view name) {
    if ((flags & bit) == 0) return;
    if (!out.empty()) out += '|';
    out += name;
  };
  add(kFlagSpectralSingularity, "SpectralSingularity");
  add(kFlagXiAtUnity, "XiAtUnity");
  add(kFlagOverflow, "Overflow");
  return out;
}

GridSpec GridSpec::parse(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t colon = text.find(':', pos);
    parts.push_back(text.substr(pos, colon == std::string_view::npos ? colon : colon - pos));
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  if (parts.size() != 3 && parts.size() != 4) {
    throw NumericError(ErrorCode::InvalidInput,
                       "grid must be start:stop:count[:log], got '" + std::string(text) + "'");
  }
  GridSpec g;
  g.start = parse_double(parts[0]);
  g.stop = parse_double(parts[1]);
  const double count = parse_double(parts[2]);
  if (!(count >= 1.0) || count != std::floor(count) || count > 1e7) {
    throw NumericError(ErrorCode::InvalidInput, "grid count must be a positive integer");
  }
  g.count = static_cast<int>(count);
  if (parts.size() == 4) {
    if (parts[3] == "log") {
      g.log = true;
    } else if (parts[3] != "lin") {
      throw NumericError(ErrorCode::InvalidInput, "grid spacing must be 'log' or 'lin'");
    }
  }
  if (!std::isfinite(g.start) || !std::isfinite(g.stop)) {
    throw NumericError(ErrorCode::InvalidInput, "grid bounds must be finite");
  }
  if (g.log && !(g.start > 0.0 && g.stop > 0.0)) {
    throw NumericError(ErrorCode::InvalidInput, "log grid bounds must be > 0");
  }
  return g;
}

std::vector<double> GridSpec::values() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = start;
    return out;
  }
  const double last = count - 1;
  for (int i = 0; i < count; ++i) {
    const double f = i / last;
    out[i] = log ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start)))
                 : start + f * (stop - start);
  }
  out.front() = start;
  out.back() = stop;
  return out;
}

SweepConfig SweepConfig::defaults(SweepMode mode) {
  SweepConfig cfg;
  cfg.mode = mode;
  cfg.energy = 1.0;
  switch (mode) {
    case SweepMode::SweepB:
      cfg.potentials = {20.0};
      cfg.cells = {1, 2, 3, 4};
      cfg.grid = GridSpec{0.05, 5.0, 100, false};
      break;
    case SweepMode::SweepN:
      cfg.potentials = {5.0, 10.0, 20.0};
      cfg.span = 1.0;
      cfg.grid = GridSpec{1.0, 4096.0, 13, true};
      break;
    case SweepMode::Point:
    case SweepMode::Limits:
      break;
  }
  return cfg;
}

void SweepConfig::validate() const {
  if (!std::isfinite(energy) || !(energy > 0.0)) {
    throw NumericError(ErrorCode::InvalidEnergy, "energy must be finite and > 0");
  }
  for (double v : potentials) {
    if (!std::isfinite(v) || v < 0.0) {
      throw NumericError(ErrorCode::InvalidInput, "potential strengths must be finite and >= 0");
    }
  }
  for (int n : cells) {
    if (n < 0) throw NumericError(ErrorCode::InvalidInput, "cell counts must be >= 0");
  }
  switch (mode) {
    case SweepMode::Point:
      if (potentials.size() != 1 || cells.size() != 1) {
        throw NumericError(ErrorCode::InvalidInput, "point needs one potential and one cell count");
      }
      if (!std::isfinite(width) || !(width > 0.0)) {
        throw NumericError(ErrorCode::InvalidInput, "point needs a width > 0");
      }
      break;
    case SweepMode::SweepB:
      if (potentials.empty()) throw NumericError(ErrorCode::InvalidInput, "sweep-b needs a potential");
      if (cells.empty()) throw NumericError(ErrorCode::InvalidInput, "sweep-b needs an explicit N list");
      if (!grid) throw NumericError(ErrorCode::InvalidInput, "sweep-b needs a width grid");
      for (double b : grid->values()) {
        if (!(b > 0.0)) throw NumericError(ErrorCode::InvalidInput, "width grid values must be > 0");
      }
      break;
    case SweepMode::SweepN:
      if (potentials.empty()) throw NumericError(ErrorCode::InvalidInput, "sweep-n needs a potential");
      if (!std::isfinite(span) || !(span > 0.0)) {
        throw NumericError(ErrorCode::InvalidInput, "sweep-n needs a span L > 0");
      }
      if (!grid) throw NumericError(ErrorCode::InvalidInput, "sweep-n needs an N grid");
      cell_grid(*grid);
      break;
    case SweepMode::Limits:
      break;
  }
}

SweepRow evaluate_point(double energy, double strength, double width, int cells) {
  const Particle particle(energy);
  const CellSpec cell(strength, width);
  if (cells < 0) throw NumericError(ErrorCode::InvalidInput, "cell count must be >= 0");

  SweepRow row;
  row.energy = energy;
  row.strength = strength;
  row.cells = cells;
  row.width = width;
  row.span = 2.0 * cells * width;
  row.tau_inf = strength > 0.0 ? hartman_limit_time(particle, strength) : kNaN;
  row.tau_free = free_propagation_time(particle, row.span);

  const DerivedQuantities d = derived_quantities(particle, cell);
  if (d.beta > kMaxBeta) {
    row.method = TauMethod::HartmanLimit;
    row.tau = row.tau_inf;
    row.t = {kNaN, kNaN};
    row.t_abs = kNaN;
    row.theta = kNaN;
    row.flags |= kFlagOverflow;
  } else {
    try {
      row.t = transmission_closed(particle, cell, cells);
      row.t_abs = std::abs(row.t);
    } catch (const NumericError& e) {
      if (e.code() == ErrorCode::SpectralSingularity) {
        row.flags |= kFlagSpectralSingularity;
      } else if (e.code() == ErrorCode::Overflow) {
        row.flags |= kFlagOverflow;
      } else {
        throw;
      }
      row.t = {kNaN, kNaN};
      row.t_abs = kNaN;
    }

    try {
      row.theta = phase_theta(particle, cell, cells);
    } catch (const NumericError& e) {
      if (e.code() != ErrorCode::ZeroOfT) throw;
      row.theta = std::isfinite(row.t_abs) ? std::arg(row.t) : kNaN;
    }

    try {
      const TunnelingTime tt = tunneling_time_detailed(particle, cell, cells);
      row.tau = tt.tau;
      row.method = TauMethod::Analytic;
      if (tt.endpoint_path) row.flags |= kFlagXiAtUnity;
    } catch (const NumericError& e) {
      if (e.code() != ErrorCode::ZeroOfT) throw;
      row.method = TauMethod::FdFallback;
      try {
        row.tau = tunneling_time_fd(particle, cell, cells, 1e-6, PhaseSource::ClosedForm);
      } catch (const NumericError& inner) {
        if (inner.code() == ErrorCode::SpectralSingularity) row.flags |= kFlagSpectralSingularity;
        row.tau = kNaN;
      }
    }
  }
  row.rel_gap = row.tau_free > 0.0 ? std::abs(row.tau - row.tau_free) / row.tau_free : kNaN;
  return row;
}

std::vector<SweepRow> run_sweep_b(const SweepConfig& cfg) {
  if (cfg.mode != SweepMode::SweepB) throw NumericError(ErrorCode::InvalidInput, "mode is not sweep-b");
  cfg.validate();
  const std::vector<double> widths = cfg.grid->values();

  struct Job {
    double v;
    int n;
    double b;
  };
  std::vector<Job> jobs;
  for (double v : cfg.potentials) {
    for (int n : cfg.cells) {
      for (double b : widths) jobs.push_back({v, n, b});
    }
  }
  std::vector<SweepRow> rows(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
    rows[i] = evaluate_point(cfg.energy, jobs[i].v, jobs[i].b, jobs[i].n);
  });
  return rows;
}

std::vector<SweepRow> run_sweep_n(const SweepConfig& cfg) {
  if (cfg.mode != SweepMode::SweepN) throw NumericError(ErrorCode::InvalidInput, "mode is not sweep-n");
  cfg.validate();
  const std::vector<int> counts = cell_grid(*cfg.grid);

  struct Job {
    double v;
    int n;
  };
  std::vector<Job> jobs;
  for (double v : cfg.potentials) {
    for (int n : counts) jobs.push_back({v, n});
  }
  std::vector<SweepRow> rows(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
    const double b = cfg.span / (2.0 * jobs[i].n);
    rows[i] = evaluate_point(cfg.energy, jobs[i].v, b, jobs[i].n);
  });
  return rows;
}

SweepRow run_point(const SweepConfig& cfg) {
  if (cfg.mode != SweepMode::Point) throw NumericError(ErrorCode::InvalidInput, "mode is not point");
  cfg.validate();
  const Particle particle(cfg.energy);
  const CellSpec cell(cfg.potentials.front(), cfg.width);
  const int cells = cfg.cells.front();
  const ClosedForm f = closed_form(particle, cell, cells);

  SweepRow row;
  row.energy = cfg.energy;
  row.strength = cell.strength();
  row.cells = cells;
  row.width = cell.width();
  row.span = 2.0 * cells * cell.width();
  row.t = f.t;
  row.t_abs = std::abs(f.t);
  row.theta = f.theta;
  row.tau = f.tau;
  row.method = TauMethod::Analytic;
  row.tau_inf = cell.strength() > 0.0 ? hartman_limit_time(particle, cell.strength()) : kNaN;
  row.tau_free = free_propagation_time(particle, row.span);
  row.rel_gap = row.tau_free > 0.0 ? std::abs(row.tau - row.tau_free) / row.tau_free : kNaN;
  if (f.endpoint_path) row.flags |= kFlagXiAtUnity;
  return row;
}

bool LimitsReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const LimitCheck& c) { return c.passed; });
}

LimitsReport run_limits(const SweepConfig& cfg, const CoeffProvider& coefficients) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> energy_dist(0.1, 50.0);
  std::uniform_real_distribution<double> strength_dist(0.0, 100.0);
  std::uniform_real_distribution<double> width_dist(0.0, 3.0);
  std::uniform_int_distribution<int> cell_dist(1, 20);

  LimitsReport report;
  auto add = [&](std::string name, double residual, double tolerance, std::size_t samples) {
    const bool ok = std::isfinite(residual) && residual < tolerance;
    report.checks.push_back({std::move(name), residual, tolerance, samples, ok});
  };

  // g2 - gamma f4 = 0 and the many-cell bracket = 2 rho^3.
  constexpr std::size_t kDraws = 1000;
  double identity_residual = 0.0;
  double bracket_residual = 0.0;
  for (std::size_t i = 0; i < kDraws; ++i) {
    const Particle p(energy_dist(rng));
    double v = strength_dist(rng);
    if (v == 0.0) v = 1.0;
    const HartmanCoeffs c = coefficients(p, CellSpec(v, 1.0));
    identity_residual =
        std::max(identity_residual, std::abs(c.g2 - c.gamma * c.f4) / std::max(std::abs(c.g2), 1.0));
    const double span = 1.0;
    bracket_residual = std::max(
        bracket_residual, relative(n_infinity_bracket(p, v, span), free_propagation_time(p, span)));
  }
  add("g2_minus_gamma_f4", identity_residual, 1e-12, kDraws);
  add("n_infinity_bracket", bracket_residual, 1e-12, kDraws);

  // Thick-cell expansions at beta = 15.
  constexpr std::size_t kAsymptotic = 50;
  constexpr double kBeta = 15.0;
  double r_xi = 0.0, r_chi = 0.0, r_ratio = 0.0, r_qxi = 0.0, r_xip = 0.0, r_chip = 0.0;
  for (std::size_t i = 0; i < kAsymptotic; ++i) {
    const Particle p(energy_dist(rng));
    const double v = 1.0 + strength_dist(rng) * 0.99;
    const DerivedQuantities base = derived_quantities(p, CellSpec(v, 1.0));
    const double b = kBeta / (base.rho * std::sin(base.phi));
    const CellSpec cell(v, b);
    const DerivedQuantities d = derived_quantities(p, cell);
    const HartmanCoeffs c = coefficients(p, cell);
    const ScaledCellTerms s = scaled_cell_terms(p, cell);
    const double w = std::exp(-s.log_scale);

    r_xi = std::max(r_xi, relative(s.xi, c.f1));
    r_chi = std::max(r_chi, relative(s.chi, 0.25 * d.u_minus * std::sin(d.phi)));
    r_ratio = std::max(r_ratio, relative(s.chi / s.xi, c.gamma));
    r_xip = std::max(r_xip, relative(s.xi_prime, c.f2 + b * c.f4 + b * c.f3 * w));
    r_chip = std::max(r_chip, relative(s.chi_prime, b * c.g2 + c.g3 + b * c.g1 * w));
    for (int n = 1; n <= 4; ++n) {
      const ChebRatio r = cheb_ratio(n, ScaledArg{s.xi, s.log_scale, s.xi_minus_one, s.xi_plus_one});
      r_qxi = std::max(r_qxi, std::abs(r.q * s.xi - 1.0));
    }
  }
  add("asymptotic_xi_over_f1", r_xi, 1e-4, kAsymptotic);
  add("asymptotic_chi", r_chi, 1e-4, kAsymptotic);
  add("asymptotic_chi_over_xi_gamma", r_ratio, 1e-4, kAsymptotic);
  add("asymptotic_q_xi", r_qxi, 1e-4, kAsymptotic * 4);
  add("asymptotic_xi_prime", r_xip, 1e-4, kAsymptotic);
  add("asymptotic_chi_prime", r_chip, 1e-4, kAsymptotic);

  // Closed form against the direct matrix product and the phase derivative.
  constexpr std::size_t kOracle = 500;
  double t_residual = 0.0;
  double tau_residual = 0.0;
  std::size_t accepted = 0;
  while (accepted < kOracle) {
    const Particle p(energy_dist(rng));
    const double v = strength_dist(rng);
    const double b = width_dist(rng);
    const int n = cell_dist(rng);
    if (!(b > 0.0)) continue;
    const CellSpec cell(v, b);
    if (derived_quantities(p, cell).beta * n > 200.0) continue;
    try {
      const TunnelingTime tt = tunneling_time_detailed(p, cell, n);
      if (tt.endpoint_path) continue;
      const cplx t_closed = transmission_closed(p, cell, n);
      const cplx t_matrix = transmission_from_matrix(lattice_matrix_direct(p, cell, n));
      const double tau_fd = tunneling_time_fd_richardson(p, cell, n);
      t_residual = std::max(t_residual, std::abs(t_closed - t_matrix) / std::abs(t_matrix));
      tau_residual = std::max(tau_residual, relative(tt.tau, tau_fd));
      ++accepted;
    } catch (const NumericError& e) {
      if (e.code() == ErrorCode::InvalidInput || e.code() == ErrorCode::InvalidEnergy) throw;
    }
  }
  add("oracle_transmission", t_residual, 1e-9, kOracle);
  add("oracle_tau", tau_residual, 1e-5, kOracle);
  return report;
}

}  // namespace pttunnel
