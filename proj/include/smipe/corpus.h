#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smipe/io.h"

namespace smipe {

inline constexpr std::string_view kSmilesOpen = "<SMILES>";
inline constexpr std::string_view kSmilesClose = "</SMILES>";
inline constexpr std::string_view kEos = "<EOS>";

struct TextSpan {
  std::size_t offset = 0;
  std::size_t length = 0;
};

// Wraps each span in <SMILES>...</SMILES>. Spans must be non-empty, sorted,
// non-overlapping and inside `text`; otherwise throws Error.
std::string wrap_smiles(std::string_view text, std::span<const TextSpan> spans);

std::string concat_records(std::span<const std::string> samples);

struct DatasetSpec {
  std::string name;
  std::filesystem::path path;
  double weight = 0.0;
  RecordFormat format = RecordFormat::kJsonl;
  // JSONL field holding the record text.
  std::string field = "text";
};

// JSON list of {name, path, weight, format?, field?}. Relative paths are
// resolved against `base_dir`. Throws FormatError on malformed input,
// duplicate names, weights outside (0, 1] or a weight sum off 1 by > 1e-9.
std::vector<DatasetSpec> parse_blend_config(std::string_view json,
                                            const std::filesystem::path& base_dir);

struct Dataset {
  std::string name;
  double weight = 0.0;
  std::vector<std::string> records;
};

// Reads every dataset, in parallel across datasets. Throws Error for a
// dataset with no records.
std::vector<Dataset> load_datasets(std::span<const DatasetSpec> specs,
                                   unsigned threads = 1);

// Largest-remainder apportionment of `total` by weight; ties on the
// remainder go to the earlier dataset.
std::vector<std::size_t> blend_counts(std::span<const double> weights,
                                      std::size_t total);

struct BlendResult {
  std::vector<std::string> records;
  // Dataset index of each record.
  std::vector<std::size_t> sources;
  std::vector<std::pair<std::string, std::size_t>> manifest;

  // {"<name>": count, ...} in dataset order.
  std::string manifest_json() const;
  // One {"text": ...} object per line.
  std::string records_jsonl() const;
};

// Each dataset is read in a seeded shuffled order, reshuffled whenever it is
// exhausted; the order in which datasets take turns is a seeded shuffle of
// their realized counts. Throws Error for an empty dataset or weights that
// do not sum to 1.
BlendResult blend(std::span<const Dataset> datasets, std::size_t total,
                  std::uint64_t seed);

using TokenCounter = std::function<std::size_t(std::string_view)>;

struct HistogramBucket {
  // Inclusive bounds.
  std::size_t lo = 0;
  std::size_t hi = 0;
  std::size_t count_a = 0;
  std::size_t count_b = 0;
};

// Bucket for a token count: unit width up to 64, then (2^k, 2^(k+1)].
std::pair<std::size_t, std::size_t> histogram_bucket(std::size_t count);

struct FertilityReport {
  std::vector<std::size_t> counts_a;
  std::vector<std::size_t> counts_b;
  std::size_t median_a = 0;
  std::size_t median_b = 0;
  double single_token_fraction_a = 0.0;
  double single_token_fraction_b = 0.0;
  // Non-empty buckets in ascending order.
  std::vector<HistogramBucket> histogram;

  std::string to_json() const;
  // lo, hi, count_a, count_b per bucket.
  std::string histogram_tsv() const;
};

// Lower median of the values; throws Error when empty.
std::size_t lower_median(std::vector<std::size_t> values);

// Throws Error for an empty corpus. Counters must be safe to call
// concurrently.
FertilityReport fertility_report(std::span<const std::string> corpus,
                                 const TokenCounter& tok_a,
                                 const TokenCounter& tok_b, unsigned threads = 1);

}  // namespace smipe
