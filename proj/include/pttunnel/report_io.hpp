#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pttunnel/sweep.hpp"

namespace pttunnel {

/// Bumped whenever a column is added, removed or reordered.
inline constexpr int kCsvSchemaVersion = 1;

/// 17 significant digits, '.' decimal point, "nan"/"inf"/"-inf" for
/// non-finite values.
std::string format_number(double value);

std::vector<std::string_view> csv_columns(SweepMode mode);

void write_rows(std::ostream& out, SweepMode mode, std::span<const SweepRow> rows,
                OutputFormat format);

void write_limits(std::ostream& out, const LimitsReport& report, OutputFormat format);

/// Multi-line summary for terminals.
void write_point_summary(std::ostream& out, const SweepRow& row);

}  // namespace pttunnel
