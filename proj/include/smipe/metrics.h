#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smipe/fingerprint.h"
#include "smipe/smiles.h"

namespace smipe {

// Content of the first <open>...<close> pair, trimmed. With
// open_tag_in_prompt the prompt already emitted the open tag, so the answer
// is the text before the first close tag (after the last open tag in that
// text, if the model repeated it).
std::optional<std::string> extract_tagged(std::string_view output,
                                          std::string_view open_tag = "<SMILES>",
                                          std::string_view close_tag = "</SMILES>",
                                          bool open_tag_in_prompt = false);

enum class MatchMode { kCanonical, kRaw };
// kZero: invalid predictions add 0 to the mean over all records.
// kExclude: the mean runs over valid predictions only.
enum class InvalidFpsMode { kZero, kExclude };

MatchMode parse_match_mode(std::string_view name);
InvalidFpsMode parse_invalid_fps_mode(std::string_view name);

struct GenerationRecord {
  std::string output;
  std::string gold;
};

// Lines of {"output": ..., "gold": ...}. Throws FormatError naming the line.
std::vector<GenerationRecord> read_generation_records(std::istream& in);

struct EvalRecord {
  std::string raw_output;
  std::string gold;
  std::optional<std::string> extracted;
  ValidityReport validity;
  bool exact = false;
  // Similarity to gold; 0 for invalid predictions.
  double fps = 0.0;
};

struct TaskScore {
  std::size_t n_samples = 0;
  // Missing extraction or unparseable prediction.
  std::size_t n_invalid = 0;
  std::size_t n_exact_match = 0;
  double mean_fps = 0.0;

  std::string to_json() const;
};

struct ScoreOptions {
  MatchMode match = MatchMode::kCanonical;
  InvalidFpsMode invalid_fps = InvalidFpsMode::kZero;
  bool open_tag_in_prompt = false;
  bool strict = false;
  int radius = kDefaultRadius;
  std::size_t nbits = kDefaultBits;
  unsigned threads = 1;
};

struct ScoreResult {
  TaskScore score;
  std::vector<EvalRecord> records;
};

// Throws Error naming the record index when a gold SMILES is invalid.
ScoreResult score_task(std::span<const GenerationRecord> records,
                       const ScoreOptions& options = {});

// Header plus one row per record:
// index, extracted, valid, error_kind, exact, fps.
std::string per_record_tsv(std::span<const EvalRecord> records);

}  // namespace smipe
