#pragma once

#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "gwfo/harness.hpp"

namespace gwfo {

enum class ReportFormat { Json, Csv };

/// Parses "json" or "csv".
ReportFormat parse_report_format(std::string_view name);

nlohmann::ordered_json to_json(const McReport& r);
nlohmann::ordered_json to_json(const DecayReport& r);

/// JSON text with every floating-point number written to 17 significant
/// digits; NaN and infinities become null. Object keys keep insertion order.
std::string dump_json(const nlohmann::ordered_json& j, int indent = 2);

/// A table of Monte Carlo rows. JSON wraps them as {"note", "rows"}; CSV puts
/// the note on a leading '#' line followed by a header and one line per row.
std::string report_emit(std::span<const McReport> rows, ReportFormat format, std::string_view note = {});
std::string report_emit(const DecayReport& report, ReportFormat format);

}  // namespace gwfo
