#pragma once

// Parameter sweeps, single-point queries and the limit-validation report.
//
// Sweeps never abort on a numerically singular point: each row carries the
// columns that could be computed plus flags describing what went wrong.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pttunnel/chrono.hpp"

namespace pttunnel {

enum class SweepMode { Point, SweepB, SweepN, Limits };
enum class OutputFormat { Csv, Json };

std::string_view to_string(SweepMode mode) noexcept;

/// Inclusive range `start:stop:count[:log]`.
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;
  bool log = false;

  /// Throws InvalidInput on malformed text.
  static GridSpec parse(std::string_view text);
  std::vector<double> values() const;
};

struct SweepConfig {
  SweepMode mode = SweepMode::Point;
  double energy = 1.0;
  std::vector<double> potentials;
  std::vector<int> cells;
  double width = 0.0;  // point mode
  double span = 0.0;   // sweep-n mode
  std::optional<GridSpec> grid;
  OutputFormat format = OutputFormat::Csv;
  unsigned threads = 0;  // 0 = hardware concurrency
  std::uint64_t seed = 20240917;

  /// Default parameter sets used to reproduce the thick-barrier and
  /// many-cell figures.
  static SweepConfig defaults(SweepMode mode);

  /// Throws InvalidEnergy / InvalidInput.
  void validate() const;
};

enum class TauMethod { Analytic, HartmanLimit, FdFallback };

std::string_view to_string(TauMethod method) noexcept;

enum RowFlag : unsigned {
  kFlagSpectralSingularity = 1u << 0,
  kFlagXiAtUnity = 1u << 1,
  kFlagOverflow = 1u << 2,
};

/// "SpectralSingularity|XiAtUnity|Overflow" subset, empty when no flags.
std::string flags_to_string(unsigned flags);

struct SweepRow {
  double energy = 0.0;
  double strength = 0.0;
  int cells = 0;
  double width = 0.0;
  double span = 0.0;
  std::complex<double> t{};
  double t_abs = 0.0;
  double theta = 0.0;
  double tau = 0.0;
  TauMethod method = TauMethod::Analytic;
  double tau_inf = 0.0;   // thick-barrier limit, NaN for V = 0
  double tau_free = 0.0;  // L / 2k
  double rel_gap = 0.0;   // |tau - tau_free| / tau_free
  unsigned flags = 0;
};

/// Tolerant evaluation used by the sweeps; numeric trouble becomes flags.
SweepRow evaluate_point(double energy, double strength, double width, int cells);

std::vector<SweepRow> run_sweep_b(const SweepConfig& cfg);
std::vector<SweepRow> run_sweep_n(const SweepConfig& cfg);

/// Strict evaluation: typed NumericErrors propagate to the caller.
SweepRow run_point(const SweepConfig& cfg);

struct LimitCheck {
  std::string name;
  double residual;
  double tolerance;
  std::size_t samples;
  bool passed;
};

struct LimitsReport {
  std::vector<LimitCheck> checks;

  bool passed() const;
};

using CoeffProvider = std::function<HartmanCoeffs(const Particle&, const CellSpec&)>;

/// Identity, asymptotic-expansion and oracle-agreement checks with measured
/// residuals. `coefficients` is replaceable so that a deliberately broken
/// provider can be shown to fail the report.
LimitsReport run_limits(const SweepConfig& cfg, const CoeffProvider& coefficients = hartman_coeffs);

}  // namespace pttunnel
