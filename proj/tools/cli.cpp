#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <map>
#include <optional>

#include "pttunnel/errors.hpp"
#include "pttunnel/report_io.hpp"
#include "pttunnel/sweep.hpp"

namespace pttunnel::cli {

namespace {

struct Options {
  double energy = 1.0;
  std::vector<double> potentials;
  std::vector<int> cells;
  double width = 0.0;
  double span = 0.0;
  std::string grid;
  std::string output;
  std::string format = "csv";
  unsigned threads = 0;
  std::uint64_t seed = 0;
};

bool is_input_error(ErrorCode code) {
  return code == ErrorCode::InvalidInput || code == ErrorCode::InvalidEnergy ||
         code == ErrorCode::NonFinite;
}

// Writes through `out` unless a path was given.
template <class F>
void emit(const std::string& path, std::ostream& out, F&& write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw NumericError(ErrorCode::InvalidInput, "cannot open output file '" + path + "'");
  write(file);
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transmission and stationary-phase tunneling time of layered (+iV, -iV) lattices",
               "pttunnel"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key = value file; command-line flags take precedence");

  Options opt;
  auto* energy = app.add_option("--energy", opt.energy, "Incident energy E (> 0)");
  auto* potential =
      app.add_option("--potential", opt.potentials, "Potential strength V (repeatable)");
  auto* cells = app.add_option("--cells", opt.cells, "Unit-cell count N (repeatable)");
  app.add_option("--width", opt.width, "Single-barrier width b");
  auto* span = app.add_option("--span", opt.span, "Total span L (sweep-n)");
  auto* grid = app.add_option("--grid", opt.grid, "start:stop:count[:log]");
  app.add_option("--output", opt.output, "Output file (default: stdout)");
  app.add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", opt.threads, "Worker threads, 0 = all cores");
  auto* seed = app.add_option("--seed", opt.seed, "Random seed for limits");

  const std::map<std::string, SweepMode> modes{{"point", SweepMode::Point},
                                               {"sweep-b", SweepMode::SweepB},
                                               {"sweep-n", SweepMode::SweepN},
                                               {"limits", SweepMode::Limits}};
  app.add_subcommand("point", "Single (E, V, b, N) evaluation")->fallthrough();
  app.add_subcommand("sweep-b", "Tunneling time against barrier width for several N")
      ->fallthrough();
  app.add_subcommand("sweep-n", "Tunneling time against N at fixed span L")->fallthrough();
  app.add_subcommand("limits", "Identity, asymptotic and oracle checks")->fallthrough();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInvalidInput;
  }

  const SweepMode mode = modes.at(app.get_subcommands().front()->get_name());
  SweepConfig cfg = SweepConfig::defaults(mode);
  if (*energy) cfg.energy = opt.energy;
  if (*potential) cfg.potentials = opt.potentials;
  if (*cells) cfg.cells = opt.cells;
  if (*span) cfg.span = opt.span;
  if (*seed) cfg.seed = opt.seed;
  cfg.width = opt.width;
  cfg.threads = opt.threads;
  cfg.format = opt.format == "json" ? OutputFormat::Json : OutputFormat::Csv;

  try {
    if (*grid) cfg.grid = GridSpec::parse(opt.grid);
    switch (mode) {
      case SweepMode::Point: {
        cfg.validate();
        SweepRow row;
        try {
          row = run_point(cfg);
        } catch (const NumericError& e) {
          if (is_input_error(e.code())) throw;
          err << "error: " << e.what() << '\n';
          return kNumericFailure;
        }
        write_point_summary(out, row);
        emit(opt.output, out, [&](std::ostream& os) {
          write_rows(os, mode, std::span(&row, 1), cfg.format);
        });
        return kSuccess;
      }
      case SweepMode::SweepB:
      case SweepMode::SweepN: {
        const auto rows = mode == SweepMode::SweepB ? run_sweep_b(cfg) : run_sweep_n(cfg);
        emit(opt.output, out, [&](std::ostream& os) { write_rows(os, mode, rows, cfg.format); });
        return kSuccess;
      }
      case SweepMode::Limits: {
        const LimitsReport report = run_limits(cfg);
        emit(opt.output, out, [&](std::ostream& os) { write_limits(os, report, cfg.format); });
        if (!report.passed()) {
          err << "limit checks failed\n";
          return kLimitCheckFailed;
        }
        return kSuccess;
      }
    }
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return is_input_error(e.code()) ? kInvalidInput : kNumericFailure;
  }
  return kSuccess;
}

}  // namespace pttunnel::cli
