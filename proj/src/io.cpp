#include "wma/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace wma {

namespace {

// One JSON value as a CSV cell. Doubles get the full-precision rendering;
// null (and absent keys) become empty cells.
std::string cell_text(const nlohmann::ordered_json& v) {
  using value_t = nlohmann::ordered_json::value_t;
  switch (v.type()) {
    case value_t::null:
      return "";
    case value_t::string:
      return v.get<std::string>();
    case value_t::boolean:
      return v.get<bool>() ? "1" : "0";
    case value_t::number_integer:
      return std::to_string(v.get<std::int64_t>());
    case value_t::number_unsigned:
      return std::to_string(v.get<std::uint64_t>());
    case value_t::number_float:
      return format_double(v.get<double>());
    default:
      throw std::invalid_argument("cell_text: unsupported value type in table");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string to_csv(const OutputTable& table) {
  std::string out;
  for (const auto& [key, value] : table.meta.items()) {
    out += "# ";
    out += key;
    out += '=';
    out += cell_text(value);
    out += '\n';
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& rec : table.records) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      if (i) out += ',';
      const auto it = rec.find(table.columns[i]);
      if (it != rec.end()) out += cell_text(*it);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const OutputTable& table) {
  nlohmann::ordered_json root;
  root["meta"] = table.meta;
  root["records"] = table.records;
  return root.dump(2) + "\n";
}

void write_output(const OutputTable& table, const std::string& format,
                  const std::string& path) {
  std::string rendered;
  if (format == "csv") {
    rendered = to_csv(table);
  } else if (format == "json") {
    rendered = to_json(table);
  } else {
    throw std::invalid_argument("write_output: unknown format '" + format + "'");
  }
  if (path.empty()) {
    std::cout << rendered;
    std::cout.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary);  // binary: keep LF endings everywhere
  if (!file) {
    throw std::runtime_error("write_output: cannot open '" + path + "' for writing");
  }
  file << rendered;
  if (!file) {
    throw std::runtime_error("write_output: failed while writing '" + path + "'");
  }
}

}  // namespace wma
