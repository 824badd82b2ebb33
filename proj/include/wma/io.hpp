// Machine-readable output for the command-line tools. One table model, two
// renderings: CSV (config echoed as `# key=value` comment lines, 17
// significant digits) and JSON (top-level {"meta", "records"}). Both are
// byte-deterministic: no timestamps, no locale, no pointer values.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace wma {

inline constexpr const char* kToolName = "wma";
inline constexpr const char* kToolVersion = "1.0.0";

// Fixed-width decimal rendering of a double with 17 significant digits:
// enough to round-trip any IEEE double exactly, so text diffs are value diffs.
std::string format_double(double v);

// A result table: echoed configuration plus homogeneous-ish records.
// Records are ordered JSON objects; keys missing from a record render as
// empty CSV cells. Column order is explicit and stable.
struct OutputTable {
  nlohmann::ordered_json meta;  // flat object: command, version, parameters
  std::vector<std::string> columns;
  std::vector<nlohmann::ordered_json> records;
};

std::string to_csv(const OutputTable& table);
std::string to_json(const OutputTable& table);

// Render in the requested format ("csv" or "json") and write to `path`, or
// to stdout when path is empty. Throws std::invalid_argument for an unknown
// format and std::runtime_error when the file cannot be written.
void write_output(const OutputTable& table, const std::string& format,
                  const std::string& path);

}  // namespace wma
