#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "resofact/experiments.hpp"
#include "resofact/resonator.hpp"

namespace resofact {

enum class OutputFormat { json, csv };

// Throws std::invalid_argument for anything other than "json" or "csv".
OutputFormat parse_format(const std::string& name);

// Doubles are rendered with 17 significant digits so every value
// round-trips bit-for-bit through text.
std::string format_double(double v);

// Minimal ordered JSON writer: fields appear exactly in insertion order,
// which keeps serialized files byte-stable across runs.
class JsonObject {
 public:
  void add_raw(const std::string& key, const std::string& json_literal);
  void add_string(const std::string& key, const std::string& value);
  void add_number(const std::string& key, double value);
  void add_integer(const std::string& key, std::int64_t value);
  void add_unsigned(const std::string& key, std::uint64_t value);
  void add_bool(const std::string& key, bool value);

  std::string str(int indent = 0) const;

  static std::string quote(const std::string& s);
  static std::string array_of_doubles(std::span<const double> values);
  static std::string array_of_unsigned(std::span<const std::uint64_t> values);

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

// Single-result serialization. JSON is an object; CSV is the documented
// header row plus one data row (list-valued fields are ';'-joined).
std::string serialize_result(const FactorizationResult& result,
                             OutputFormat format);

// Sweep serialization. The CSV schema is fixed:
//   cardinality,n,k,trials,accuracy,mean_iterations,convergence_rate,wall_time_s
// preceded by a "# schema_version=..." comment line.
std::string to_csv(const SweepSummary& summary);
std::string to_json(const SweepSummary& summary);

// Kernel profiles, CSV columns: beta,x,mean_sim,std_sim.
std::string to_csv(std::span<const KernelProfile> profiles);

std::string to_json(const MinDimSummary& summary);

// Everything needed to reproduce a run: the subcommand, the fully resolved
// configuration (all defaults materialized), the seed, and the library
// version. Written alongside every result file; the timestamp is the only
// field that changes between identical runs.
struct RunManifest {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> config;  // key, JSON literal
  std::uint64_t seed = 0;

  std::string to_json_string() const;
};

std::string current_timestamp_utc();

}  // namespace resofact
