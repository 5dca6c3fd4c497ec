#include "smipe/io.h"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "smipe/error.h"

namespace smipe {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

std::vector<std::string> read_records(std::istream& in, RecordFormat format,
                                      std::string_view field) {
  std::vector<std::string> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (format == RecordFormat::kLines) {
      records.push_back(std::move(line));
      continue;
    }
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": invalid JSON: " + e.what());
    }
    const auto it = obj.find(std::string(field));
    if (!obj.is_object() || it == obj.end() || !it->is_string()) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": missing string field '" + std::string(field) + "'");
    }
    records.push_back(it->get<std::string>());
  }
  return records;
}

std::vector<std::string> read_records(const std::filesystem::path& path,
                                      RecordFormat format,
                                      std::string_view field) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return read_records(in, format, field);
}

RecordFormat parse_record_format(std::string_view name) {
  if (name == "lines") return RecordFormat::kLines;
  if (name == "jsonl") return RecordFormat::kJsonl;
  throw Error("unknown record format '" + std::string(name) + "'");
}

}  // namespace smipe
