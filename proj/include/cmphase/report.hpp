#pragma once

#include <string>
#include <vector>

#include <cmphase/lab.hpp>

namespace cmphase {

enum class ReportFormat { csv, json, svg };

ReportFormat parse_report_format(const std::string& name);

/// Header plus one row per record, columns in SweepRecord order, doubles at
/// 17 significant digits.
std::string records_to_csv(const std::vector<SweepRecord>& records);
std::string records_to_json(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> records_from_json(const std::string& text);
/// Two panels: total energy against eps (log scale) per k, and a heat map of
/// oscillation counts over the (k, eps) grid.
std::string records_to_svg(const std::vector<SweepRecord>& records);

/// Writes the records to `path`. Throws std::invalid_argument on an empty
/// list and std::runtime_error when the file cannot be written.
void emit_report(const std::vector<SweepRecord>& records, ReportFormat format, const std::string& path);

} // namespace cmphase
