#include "resofact/serialize.hpp"

#include <cstdio>
#include <ctime>
#include <stdexcept>

#include "resofact/version.hpp"

namespace resofact {

OutputFormat parse_format(const std::string& name) {
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  throw std::invalid_argument("unknown output format: " + name);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void JsonObject::add_raw(const std::string& key,
                         const std::string& json_literal) {
  fields_.emplace_back(key, json_literal);
}

void JsonObject::add_string(const std::string& key, const std::string& value) {
  add_raw(key, quote(value));
}

void JsonObject::add_number(const std::string& key, double value) {
  add_raw(key, format_double(value));
}

void JsonObject::add_integer(const std::string& key, std::int64_t value) {
  add_raw(key, std::to_string(value));
}

void JsonObject::add_unsigned(const std::string& key, std::uint64_t value) {
  add_raw(key, std::to_string(value));
}

void JsonObject::add_bool(const std::string& key, bool value) {
  add_raw(key, value ? "true" : "false");
}

std::string JsonObject::str(int indent) const {
  const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
  const std::string closing_pad(static_cast<std::size_t>(indent), ' ');
  std::string out = "{";
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    out += i == 0 ? "\n" : ",\n";
    out += pad + quote(fields_[i].first) + ": " + fields_[i].second;
  }
  out += "\n" + closing_pad + "}";
  return out;
}

std::string JsonObject::quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

std::string JsonObject::array_of_doubles(std::span<const double> values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_double(values[i]);
  }
  out += "]";
  return out;
}

std::string JsonObject::array_of_unsigned(
    std::span<const std::uint64_t> values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(values[i]);
  }
  out += "]";
  return out;
}

namespace {

std::string trace_to_json(
    const std::vector<std::vector<TraceEntry>>& trace) {
  std::string out = "[";
  for (std::size_t f = 0; f < trace.size(); ++f) {
    if (f > 0) out += ", ";
    out += "[";
    for (std::size_t t = 0; t < trace[f].size(); ++t) {
      if (t > 0) out += ", ";
      out += "{\"index\": " + std::to_string(trace[f][t].top_index) +
             ", \"similarity\": " + format_double(trace[f][t].top_similarity) +
             "}";
    }
    out += "]";
  }
  out += "]";
  return out;
}

std::string joined(std::span<const std::uint64_t> values, char sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += sep;
    out += std::to_string(values[i]);
  }
  return out;
}

std::string joined_doubles(std::span<const double> values, char sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += sep;
    out += format_double(values[i]);
  }
  return out;
}

}  // namespace

std::string serialize_result(const FactorizationResult& result,
                             OutputFormat format) {
  if (format == OutputFormat::json) {
    JsonObject obj;
    obj.add_integer("schema_version", kSchemaVersion);
    obj.add_unsigned("s", result.s);
    obj.add_raw("predicted_factors",
                JsonObject::array_of_unsigned(result.predicted_factors));
    obj.add_bool("correct", result.correct);
    obj.add_bool("converged", result.converged);
    obj.add_integer("iterations_used", result.iterations_used);
    obj.add_raw("final_similarities",
                JsonObject::array_of_doubles(result.final_similarities));
    if (!result.error.empty()) obj.add_string("error", result.error);
    if (!result.trace.empty()) obj.add_raw("trace", trace_to_json(result.trace));
    return obj.str() + "\n";
  }
  std::string out = "# schema_version=" + std::to_string(kSchemaVersion) + "\n";
  out +=
      "s,predicted_factors,correct,converged,iterations_used,"
      "final_similarities\n";
  out += std::to_string(result.s) + "," + joined(result.predicted_factors, ';') +
         "," + (result.correct ? "true" : "false") + "," +
         (result.converged ? "true" : "false") + "," +
         std::to_string(result.iterations_used) + "," +
         joined_doubles(result.final_similarities, ';') + "\n";
  return out;
}

std::string to_csv(const SweepSummary& summary) {
  std::string out = "# schema_version=" + std::to_string(kSchemaVersion) + "\n";
  out +=
      "cardinality,n,k,trials,accuracy,mean_iterations,convergence_rate,"
      "wall_time_s\n";
  for (const auto& cell : summary.cells) {
    out += std::to_string(cell.cardinality) + "," + std::to_string(cell.n) +
           "," + std::to_string(cell.k) + "," + std::to_string(cell.trials) +
           "," + format_double(cell.accuracy) + "," +
           format_double(cell.mean_iterations) + "," +
           format_double(cell.convergence_rate) + "," +
           format_double(cell.wall_time_s) + "\n";
  }
  return out;
}

std::string to_json(const SweepSummary& summary) {
  std::string cells = "[";
  for (std::size_t i = 0; i < summary.cells.size(); ++i) {
    const auto& cell = summary.cells[i];
    if (i > 0) cells += ", ";
    JsonObject obj;
    obj.add_unsigned("cardinality", cell.cardinality);
    obj.add_unsigned("n", cell.n);
    obj.add_integer("k", cell.k);
    obj.add_integer("trials", cell.trials);
    obj.add_number("accuracy", cell.accuracy);
    obj.add_number("mean_iterations", cell.mean_iterations);
    obj.add_number("convergence_rate", cell.convergence_rate);
    obj.add_number("wall_time_s", cell.wall_time_s);
    cells += obj.str(2);
  }
  cells += "]";
  JsonObject root;
  root.add_integer("schema_version", kSchemaVersion);
  root.add_raw("cells", cells);
  return root.str() + "\n";
}

std::string to_csv(std::span<const KernelProfile> profiles) {
  std::string out = "# schema_version=" + std::to_string(kSchemaVersion) + "\n";
  out += "beta,x,mean_sim,std_sim\n";
  for (const auto& profile : profiles) {
    for (std::size_t g = 0; g < profile.grid.size(); ++g) {
      out += format_double(profile.beta) + "," + format_double(profile.grid[g]) +
             "," + format_double(profile.mean_similarity[g]) + "," +
             format_double(profile.std_similarity[g]) + "\n";
    }
  }
  return out;
}

std::string to_json(const MinDimSummary& summary) {
  std::string cells = "[";
  for (std::size_t i = 0; i < summary.cells.size(); ++i) {
    const auto& cell = summary.cells[i];
    if (i > 0) cells += ", ";
    JsonObject obj;
    obj.add_unsigned("cardinality", cell.cardinality);
    std::string runs = "[";
    for (std::size_t r = 0; r < cell.per_run_min_n.size(); ++r) {
      if (r > 0) runs += ", ";
      runs += std::to_string(cell.per_run_min_n[r]);
    }
    runs += "]";
    obj.add_raw("per_run_min_n", runs);
    obj.add_bool("bounded", cell.bounded);
    if (cell.bounded) {
      obj.add_number("mean_min_n", cell.mean_min_n);
    } else {
      obj.add_raw("mean_min_n", "null");
    }
    cells += obj.str(2);
  }
  cells += "]";
  JsonObject root;
  root.add_integer("schema_version", kSchemaVersion);
  root.add_raw("cells", cells);
  if (summary.slope_valid) {
    root.add_number("loglog_slope", summary.loglog_slope);
  } else {
    root.add_raw("loglog_slope", "null");
  }
  root.add_bool("slope_valid", summary.slope_valid);
  return root.str() + "\n";
}

std::string RunManifest::to_json_string() const {
  JsonObject config_obj;
  for (const auto& [key, literal] : config) config_obj.add_raw(key, literal);
  JsonObject root;
  root.add_integer("schema_version", kSchemaVersion);
  root.add_string("subcommand", subcommand);
  root.add_string("library_version", kVersion);
  root.add_unsigned("seed", seed);
  root.add_string("timestamp_utc", current_timestamp_utc());
  root.add_raw("config", config_obj.str(2));
  return root.str() + "\n";
}

std::string current_timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace resofact
