#include "pttunnel/report_io.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace pttunnel {

namespace {

using json = nlohmann::ordered_json;

json number_or_null(double value) {
  if (std::isfinite(value)) return value;
  return nullptr;
}

double numeric_cell(const SweepRow& row, std::string_view column) {
  if (column == "E") return row.energy;
  if (column == "V") return row.strength;
  if (column == "b") return row.width;
  if (column == "L") return row.span;
  if (column == "tau") return row.tau;
  if (column == "tau_inf") return row.tau_inf;
  if (column == "tau_free") return row.tau_free;
  if (column == "rel_gap") return row.rel_gap;
  if (column == "t_re") return row.t.real();
  if (column == "t_im") return row.t.imag();
  if (column == "t_abs") return row.t_abs;
  if (column == "theta") return row.theta;
  return std::nan("");
}

std::string csv_cell(const SweepRow& row, std::string_view column) {
  if (column == "N") return std::to_string(row.cells);
  if (column == "tau_method") return std::string(to_string(row.method));
  if (column == "flags") return flags_to_string(row.flags);
  return format_number(numeric_cell(row, column));
}

json json_cell(const SweepRow& row, std::string_view column) {
  if (column == "N") return row.cells;
  if (column == "tau_method") return to_string(row.method);
  if (column == "flags") {
    json flags = json::array();
    if (row.flags & kFlagSpectralSingularity) flags.push_back("SpectralSingularity");
    if (row.flags & kFlagXiAtUnity) flags.push_back("XiAtUnity");
    if (row.flags & kFlagOverflow) flags.push_back("Overflow");
    return flags;
  }
  return number_or_null(numeric_cell(row, column));
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::vector<std::string_view> csv_columns(SweepMode mode) {
  switch (mode) {
    case SweepMode::SweepB:
      return {"E", "V", "N", "b", "L", "tau", "tau_method", "tau_inf", "t_abs", "theta", "flags"};
    case SweepMode::SweepN:
      return {"E", "V", "N", "b", "L", "tau", "tau_free", "rel_gap", "t_abs", "theta", "flags"};
    case SweepMode::Point:
      return {"E",     "V",     "N",   "b",          "L",    "t_re",
              "t_im",  "t_abs", "theta", "tau",      "tau_method", "flags"};
    case SweepMode::Limits:
      return {"name", "residual", "tolerance", "samples", "passed"};
  }
  return {};
}

void write_rows(std::ostream& out, SweepMode mode, std::span<const SweepRow> rows,
                OutputFormat format) {
  const auto columns = csv_columns(mode);
  if (format == OutputFormat::Csv) {
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const SweepRow& row : rows) {
      for (std::size_t i = 0; i < columns.size(); ++i) {
        out << (i ? "," : "") << csv_cell(row, columns[i]);
      }
      out << '\n';
    }
    return;
  }

  json doc;
  doc["schema_version"] = kCsvSchemaVersion;
  doc["mode"] = to_string(mode);
  doc["columns"] = columns;
  json items = json::array();
  for (const SweepRow& row : rows) {
    json item = json::object();
    for (auto column : columns) item[std::string(column)] = json_cell(row, column);
    items.push_back(std::move(item));
  }
  doc["rows"] = std::move(items);
  out << doc.dump(2) << '\n';
}

void write_limits(std::ostream& out, const LimitsReport& report, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    out << "name,residual,tolerance,samples,passed\n";
    for (const LimitCheck& c : report.checks) {
      out << c.name << ',' << format_number(c.residual) << ',' << format_number(c.tolerance) << ','
          << c.samples << ',' << (c.passed ? "true" : "false") << '\n';
    }
    return;
  }
  json doc;
  doc["schema_version"] = kCsvSchemaVersion;
  doc["mode"] = "limits";
  doc["passed"] = report.passed();
  json checks = json::array();
  for (const LimitCheck& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"residual", number_or_null(c.residual)},
                      {"tolerance", c.tolerance},
                      {"samples", c.samples},
                      {"passed", c.passed}});
  }
  doc["checks"] = std::move(checks);
  out << doc.dump(2) << '\n';
}

void write_point_summary(std::ostream& out, const SweepRow& row) {
  out << "E      = " << format_number(row.energy) << '\n'
      << "V      = " << format_number(row.strength) << '\n'
      << "N      = " << row.cells << '\n'
      << "b      = " << format_number(row.width) << '\n'
      << "L      = " << format_number(row.span) << '\n'
      << "t      = " << format_number(row.t.real()) << (row.t.imag() < 0 ? " - " : " + ")
      << format_number(std::abs(row.t.imag())) << "i\n"
      << "|t|    = " << format_number(row.t_abs) << '\n'
      << "theta  = " << format_number(row.theta) << '\n'
      << "tau    = " << format_number(row.tau) << "  (" << to_string(row.method) << ")\n"
      << "L/2k   = " << format_number(row.tau_free) << '\n'
      << "flags  = " << (row.flags ? flags_to_string(row.flags) : "none") << '\n';
}

}  // namespace pttunnel
