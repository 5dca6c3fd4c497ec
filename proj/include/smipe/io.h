#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace smipe {

enum class RecordFormat { kLines, kJsonl };

// Throws Error naming the file when it cannot be opened.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view data);

// One record per line. For kJsonl each line is an object and `field` is
// extracted; blank lines are skipped in both formats and a trailing '\r' is
// dropped. Throws FormatError on malformed JSONL.
std::vector<std::string> read_records(std::istream& in, RecordFormat format,
                                      std::string_view field);
std::vector<std::string> read_records(const std::filesystem::path& path,
                                      RecordFormat format,
                                      std::string_view field);

RecordFormat parse_record_format(std::string_view name);

}  // namespace smipe
