#include "gwfo/report.hpp"

#include <cmath>
#include <fmt/format.h>
#include <stdexcept>

namespace gwfo {

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw std::invalid_argument(fmt::format("unknown report format '{}'", name));
}

namespace {

std::string number(double v) {
  if (!std::isfinite(v)) return "null";
  return fmt::format("{:.17g}", v);
}

void dump(const nlohmann::ordered_json& j, int indent, int level, std::string& out) {
  using V = nlohmann::ordered_json::value_t;
  const std::string pad = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * (level + 1)), ' ') : "";
  const std::string close = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * level), ' ') : "";
  const char* colon = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case V::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += pad;
        out += nlohmann::ordered_json(key).dump();
        out += colon;
        dump(value, indent, level + 1, out);
      }
      out += close;
      out += '}';
      return;
    }
    case V::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += ',';
        first = false;
        out += pad;
        dump(value, indent, level + 1, out);
      }
      out += close;
      out += ']';
      return;
    }
    case V::number_float:
      out += number(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_number(const std::optional<double>& v) { return v ? number(*v) : ""; }

}  // namespace

std::string dump_json(const nlohmann::ordered_json& j, int indent) {
  std::string out;
  dump(j, indent, 0, out);
  return out;
}

nlohmann::ordered_json to_json(const McReport& r) {
  nlohmann::ordered_json j;
  j["experiment"] = r.experiment;
  j["label"] = r.label;
  j["parameters"] = r.parameters;
  j["trials"] = r.trials;
  j["hits"] = r.hits;
  j["estimate"] = r.estimate;
  j["stderr"] = r.std_error;
  j["exact"] = optional_number(r.exact);
  j["z_score"] = optional_number(r.z_score);
  j["seed"] = r.seed.master;
  if (r.wall_time) j["wall_time"] = *r.wall_time;
  return j;
}

nlohmann::ordered_json to_json(const DecayReport& r) {
  nlohmann::ordered_json j;
  j["experiment"] = "containment_decay";
  j["pattern"] = serialize_tree(r.pattern);
  j["lambda"] = r.lambda;
  j["trials"] = r.trials;
  j["seed"] = r.seed.master;
  j["budgets"] = r.budgets;
  j["bad_rates"] = r.bad_rates;
  j["stderr"] = r.std_errors;
  j["fitted_log_slope"] = r.fitted_log_slope;
  if (r.wall_time) j["wall_time"] = *r.wall_time;
  return j;
}

std::string report_emit(std::span<const McReport> rows, ReportFormat format, std::string_view note) {
  if (format == ReportFormat::Json) {
    nlohmann::ordered_json j;
    j["note"] = note;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) j["rows"].push_back(to_json(r));
    return dump_json(j) + "\n";
  }
  std::string out;
  if (!note.empty()) out += "# " + std::string(note) + "\n";
  const bool timed = !rows.empty() && rows.front().wall_time.has_value();
  out += "experiment,label,parameters,trials,hits,estimate,stderr,exact,z_score,seed";
  out += timed ? ",wall_time\n" : "\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}", csv_field(r.experiment), csv_field(r.label),
                       csv_field(dump_json(r.parameters, 0)), r.trials, r.hits, number(r.estimate),
                       number(r.std_error), csv_number(r.exact), csv_number(r.z_score), r.seed.master);
    if (timed) out += "," + csv_number(r.wall_time);
    out += '\n';
  }
  return out;
}

std::string report_emit(const DecayReport& report, ReportFormat format) {
  if (format == ReportFormat::Json) return dump_json(to_json(report)) + "\n";
  std::string out = fmt::format("# pattern {} lambda {} trials {} seed {} fitted_log_slope {}\n",
                                serialize_tree(report.pattern), number(report.lambda), report.trials,
                                report.seed.master, number(report.fitted_log_slope));
  out += "budget,bad_rate,stderr\n";
  for (std::size_t i = 0; i < report.budgets.size(); ++i)
    out += fmt::format("{},{},{}\n", report.budgets[i], number(report.bad_rates[i]), number(report.std_errors[i]));
  return out;
}

}  // namespace gwfo
