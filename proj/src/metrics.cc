#include "smipe/metrics.h"

#include <cstdio>

#include <json.hpp>

#include "smipe/error.h"
#include "smipe/parallel.h"

namespace smipe {

namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kSpace);
  return s.substr(first, last - first + 1);
}

std::string tsv_field(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::optional<std::string> extract_tagged(std::string_view output,
                                          std::string_view open_tag,
                                          std::string_view close_tag,
                                          bool open_tag_in_prompt) {
  if (open_tag_in_prompt) {
    const auto close = output.find(close_tag);
    if (close == std::string_view::npos) return std::nullopt;
    auto content = output.substr(0, close);
    const auto reopened = content.rfind(open_tag);
    if (reopened != std::string_view::npos) {
      content = content.substr(reopened + open_tag.size());
    }
    return std::string(trim(content));
  }
  const auto open = output.find(open_tag);
  if (open == std::string_view::npos) return std::nullopt;
  const auto start = open + open_tag.size();
  const auto close = output.find(close_tag, start);
  if (close == std::string_view::npos) return std::nullopt;
  return std::string(trim(output.substr(start, close - start)));
}

MatchMode parse_match_mode(std::string_view name) {
  if (name == "canonical") return MatchMode::kCanonical;
  if (name == "raw") return MatchMode::kRaw;
  throw FormatError("unknown match mode '" + std::string(name) + "'");
}

InvalidFpsMode parse_invalid_fps_mode(std::string_view name) {
  if (name == "zero") return InvalidFpsMode::kZero;
  if (name == "exclude") return InvalidFpsMode::kExclude;
  throw FormatError("unknown invalid-fps mode '" + std::string(name) + "'");
}

std::vector<GenerationRecord> read_generation_records(std::istream& in) {
  std::vector<GenerationRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      records.push_back({j.at("output").get<std::string>(),
                         j.at("gold").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

std::string TaskScore::to_json() const {
  nlohmann::ordered_json j;
  j["n_samples"] = n_samples;
  j["n_invalid"] = n_invalid;
  j["n_exact_match"] = n_exact_match;
  j["mean_fps"] = mean_fps;
  return j.dump();
}

ScoreResult score_task(std::span<const GenerationRecord> records,
                       const ScoreOptions& options) {
  ScoreResult result;
  result.records.resize(records.size());
  parallel_for(records.size(), options.threads, [&](std::size_t i) {
    EvalRecord& rec = result.records[i];
    rec.raw_output = records[i].output;
    rec.gold = records[i].gold;

    Molecule gold;
    try {
      gold = parse_smiles(rec.gold);
    } catch (const SmilesError& e) {
      throw Error("record " + std::to_string(i) + ": gold SMILES is invalid: " +
                  e.what());
    }

    rec.extracted = extract_tagged(rec.raw_output, "<SMILES>", "</SMILES>",
                                   options.open_tag_in_prompt);
    if (!rec.extracted) {
      rec.validity = {false, SmilesErrorKind::kSyntax, std::nullopt,
                      "no tagged answer found"};
      return;
    }
    rec.validity = validate_smiles(*rec.extracted, options.strict);
    if (!rec.validity.valid) return;

    const Molecule pred = parse_smiles(*rec.extracted);
    rec.exact = options.match == MatchMode::kRaw
                    ? *rec.extracted == rec.gold
                    : write_canonical(pred) == write_canonical(gold);
    rec.fps = tanimoto(morgan_fingerprint(pred, options.radius, options.nbits),
                       morgan_fingerprint(gold, options.radius, options.nbits));
  });

  TaskScore& score = result.score;
  score.n_samples = records.size();
  double fps_sum = 0.0;
  for (const auto& rec : result.records) {
    if (!rec.validity.valid) ++score.n_invalid;
    if (rec.exact) ++score.n_exact_match;
    fps_sum += rec.fps;
  }
  const std::size_t denom = options.invalid_fps == InvalidFpsMode::kZero
                                ? score.n_samples
                                : score.n_samples - score.n_invalid;
  score.mean_fps = denom == 0 ? 0.0 : fps_sum / static_cast<double>(denom);
  return result;
}

std::string per_record_tsv(std::span<const EvalRecord> records) {
  std::string out = "index\textracted\tvalid\terror_kind\texact\tfps\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    out += std::to_string(i);
    out += '\t';
    out += rec.extracted ? tsv_field(*rec.extracted) : "";
    out += '\t';
    out += rec.validity.valid ? "1" : "0";
    out += '\t';
    if (!rec.extracted) {
      out += "missing";
    } else if (rec.validity.error_kind) {
      out += to_string(*rec.validity.error_kind);
    }
    out += '\t';
    out += rec.exact ? "1" : "0";
    out += '\t';
    out += format_double(rec.fps);
    out += '\n';
  }
  return out;
}

}  // namespace smipe
