#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "pttunnel/chrono.hpp"
#include "pttunnel/errors.hpp"
#include "pttunnel/report_io.hpp"
#include "pttunnel/specfun.hpp"
#include "pttunnel/sweep.hpp"
#include "pttunnel/transfer.hpp"

namespace py = pybind11;
using namespace pttunnel;

namespace {

py::dict row_dict(const SweepRow& r) {
  py::dict d;
  d["E"] = r.energy;
  d["V"] = r.strength;
  d["N"] = r.cells;
  d["b"] = r.width;
  d["L"] = r.span;
  d["t"] = r.t;
  d["t_abs"] = r.t_abs;
  d["theta"] = r.theta;
  d["tau"] = r.tau;
  d["tau_method"] = std::string(to_string(r.method));
  d["tau_inf"] = r.tau_inf;
  d["tau_free"] = r.tau_free;
  d["rel_gap"] = r.rel_gap;
  d["flags"] = flags_to_string(r.flags);
  return d;
}

py::list rows_list(const std::vector<SweepRow>& rows) {
  py::list out;
  for (const SweepRow& r : rows) out.append(row_dict(r));
  return out;
}

SweepConfig sweep_config(SweepMode mode, double energy, std::vector<double> potentials,
                         std::vector<int> cells, double span, const std::string& grid,
                         unsigned threads) {
  SweepConfig cfg = SweepConfig::defaults(mode);
  cfg.energy = energy;
  if (!potentials.empty()) cfg.potentials = std::move(potentials);
  if (!cells.empty()) cfg.cells = std::move(cells);
  if (span > 0.0) cfg.span = span;
  if (!grid.empty()) cfg.grid = GridSpec::parse(grid);
  cfg.threads = threads;
  cfg.validate();
  return cfg;
}

std::string csv_text(SweepMode mode, const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  write_rows(out, mode, rows, OutputFormat::Csv);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(pttunnel, m) {
  m.doc() = "Transmission and stationary-phase tunneling time of (+iV, -iV) lattices";

  // The exception type lives as long as the interpreter; its handle is kept
  // on purpose.
  static const py::handle numeric_error =
      py::exception<NumericError>(m, "NumericError", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const NumericError& e) {
      py::object err = py::reinterpret_borrow<py::object>(numeric_error)(e.what());
      err.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(numeric_error.ptr(), err.ptr());
    }
  });

  m.def("cheb_T", py::overload_cast<int, double>(&cheb_T), py::arg("n"), py::arg("x"));
  m.def("cheb_U", py::overload_cast<int, double>(&cheb_U), py::arg("n"), py::arg("x"));
  m.def("cheb_ratio_q", &cheb_ratio_q, py::arg("n"), py::arg("x"), "U_{N-1}(x) / T_N(x)");

  m.def(
      "derived_quantities",
      [](double e, double v, double b) {
        const DerivedQuantities d = derived_quantities(Particle(e), CellSpec(v, b));
        py::dict out;
        out["rho"] = d.rho;
        out["phi"] = d.phi;
        out["alpha"] = d.alpha;
        out["beta"] = d.beta;
        out["u_plus"] = d.u_plus;
        out["u_minus"] = d.u_minus;
        out["rho_prime"] = d.rho_prime;
        out["phi_prime"] = d.phi_prime;
        out["alpha_prime"] = d.alpha_prime;
        out["beta_prime"] = d.beta_prime;
        out["u_plus_prime"] = d.u_plus_prime;
        out["u_minus_prime"] = d.u_minus_prime;
        return out;
      },
      py::arg("E"), py::arg("V"), py::arg("b"));

  m.def(
      "transmission",
      [](double e, double v, double b, int n) {
        return transmission_closed(Particle(e), CellSpec(v, b), n);
      },
      py::arg("E"), py::arg("V"), py::arg("b"), py::arg("N"), "Closed-form transmission t");
  m.def(
      "transmission_direct",
      [](double e, double v, double b, int n) {
        return transmission_from_matrix(lattice_matrix_direct(Particle(e), CellSpec(v, b), n));
      },
      py::arg("E"), py::arg("V"), py::arg("b"), py::arg("N"),
      "Transmission from the direct product of 2N barrier matrices");
  m.def(
      "phase_theta",
      [](double e, double v, double b, int n) { return phase_theta(Particle(e), CellSpec(v, b), n); },
      py::arg("E"), py::arg("V"), py::arg("b"), py::arg("N"));
  m.def(
      "tunneling_time",
      [](double e, double v, double b, int n) {
        return tunneling_time(Particle(e), CellSpec(v, b), n);
      },
      py::arg("E"), py::arg("V"), py::arg("b"), py::arg("N"));
  m.def(
      "tunneling_time_fd",
      [](double e, double v, double b, int n, double h) {
        return tunneling_time_fd(Particle(e), CellSpec(v, b), n, h);
      },
      py::arg("E"), py::arg("V"), py::arg("b"), py::arg("N"), py::arg("h") = 1e-6,
      "Central difference of the transfer-matrix phase");
  m.def(
      "closed_form",
      [](double e, double v, double b, int n) {
        const ClosedForm f = closed_form(Particle(e), CellSpec(v, b), n);
        py::dict out;
        out["xi"] = f.xi;
        out["chi"] = f.chi;
        out["xi_prime"] = f.xi_prime;
        out["chi_prime"] = f.chi_prime;
        out["q"] = f.q;
        out["theta"] = f.theta;
        out["t"] = f.t;
        out["tau"] = f.tau;
        out["endpoint_path"] = f.endpoint_path;
        return out;
      },
      py::arg("E"), py::arg("V"), py::arg("b"), py::arg("N"));

  m.def(
      "hartman_limit_time", [](double e, double v) { return hartman_limit_time(Particle(e), v); },
      py::arg("E"), py::arg("V"));
  m.def(
      "free_propagation_time",
      [](double e, double span) { return free_propagation_time(Particle(e), span); }, py::arg("E"),
      py::arg("L"));
  m.def(
      "square_barrier_time",
      [](double e, double v, double span) { return square_barrier_time(Particle(e), v, span); },
      py::arg("E"), py::arg("V"), py::arg("L"));

  m.def(
      "point",
      [](double e, double v, double b, int n) {
        SweepConfig cfg = SweepConfig::defaults(SweepMode::Point);
        cfg.energy = e;
        cfg.potentials = {v};
        cfg.cells = {n};
        cfg.width = b;
        return row_dict(run_point(cfg));
      },
      py::arg("E"), py::arg("V"), py::arg("b"), py::arg("N"));

  m.def(
      "sweep_b",
      [](double e, std::vector<double> potentials, std::vector<int> cells, const std::string& grid,
         unsigned threads) {
        const SweepConfig cfg = sweep_config(SweepMode::SweepB, e, std::move(potentials),
                                             std::move(cells), 0.0, grid, threads);
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_sweep_b(cfg);
        }
        return rows_list(rows);
      },
      py::arg("E") = 1.0, py::arg("potentials") = std::vector<double>{},
      py::arg("cells") = std::vector<int>{}, py::arg("grid") = "", py::arg("threads") = 0u,
      "Tunneling time against width; empty arguments take the documented defaults");
  m.def(
      "sweep_n",
      [](double e, std::vector<double> potentials, double span, const std::string& grid,
         unsigned threads) {
        const SweepConfig cfg = sweep_config(SweepMode::SweepN, e, std::move(potentials), {}, span,
                                             grid, threads);
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_sweep_n(cfg);
        }
        return rows_list(rows);
      },
      py::arg("E") = 1.0, py::arg("potentials") = std::vector<double>{}, py::arg("L") = 0.0,
      py::arg("grid") = "", py::arg("threads") = 0u,
      "Tunneling time against N at fixed span; empty arguments take the documented defaults");
  m.def(
      "sweep_csv",
      [](const std::string& mode, double e, std::vector<double> potentials, std::vector<int> cells,
         double span, const std::string& grid) {
        const SweepMode sm = mode == "sweep-b"   ? SweepMode::SweepB
                             : mode == "sweep-n" ? SweepMode::SweepN
                                                 : throw NumericError(ErrorCode::InvalidInput,
                                                                      "mode must be sweep-b or sweep-n");
        const SweepConfig cfg =
            sweep_config(sm, e, std::move(potentials), std::move(cells), span, grid, 0);
        py::gil_scoped_release release;
        return csv_text(sm, sm == SweepMode::SweepB ? run_sweep_b(cfg) : run_sweep_n(cfg));
      },
      py::arg("mode"), py::arg("E") = 1.0, py::arg("potentials") = std::vector<double>{},
      py::arg("cells") = std::vector<int>{}, py::arg("L") = 0.0, py::arg("grid") = "",
      "Sweep rendered as the CLI's CSV");
  m.def(
      "limits",
      [](std::uint64_t seed) {
        SweepConfig cfg = SweepConfig::defaults(SweepMode::Limits);
        cfg.seed = seed;
        LimitsReport report;
        {
          py::gil_scoped_release release;
          report = run_limits(cfg);
        }
        py::list out;
        for (const LimitCheck& c : report.checks) {
          py::dict d;
          d["name"] = c.name;
          d["residual"] = c.residual;
          d["tolerance"] = c.tolerance;
          d["samples"] = c.samples;
          d["passed"] = c.passed;
          out.append(d);
        }
        return out;
      },
      py::arg("seed") = SweepConfig{}.seed);
}
