#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace smipe {

struct MergeRule {
  std::string left;
  std::string right;
  int rank = 0;
  std::int64_t learned_frequency = 0;

  std::string token() const { return left + right; }
  friend bool operator==(const MergeRule&, const MergeRule&) = default;
};

struct TrainerConfig {
  // Merging continues while the most frequent pair occurs more than
  // `threshold` times.
  std::int64_t threshold = 3;
  std::optional<std::size_t> max_merges;
  // Emit one randomized variant of every valid input before counting.
  bool augment = true;
  std::uint64_t augmentation_seed = 0;
  // Use the default-valence check when filtering invalid inputs.
  bool strict = false;
  unsigned threads = 1;
};

using PairCounts = std::map<std::pair<std::string, std::string>, std::int64_t>;

// Adjacent ordered pair occurrences, overlapping ones included.
PairCounts count_pairs(std::span<const std::vector<std::string>> sequences);

using MergeCallback = std::function<void(const MergeRule&)>;

// Core merge loop over already pre-tokenized sequences. Picks the most
// frequent adjacent pair (ties: smallest (left, right)), merges its
// occurrences left to right without overlap, and repeats while the best
// count exceeds `threshold`. Pair counts are maintained incrementally: only
// sequences containing the merged pair are recounted.
std::vector<MergeRule> learn_merges(
    std::span<const std::vector<std::string>> sequences,
    std::int64_t threshold, std::optional<std::size_t> max_merges = {},
    const MergeCallback& on_merge = {});

struct TrainResult {
  std::vector<MergeRule> merges;
  // Every atom-level unit seen after filtering/augmentation, with counts.
  std::map<std::string, std::int64_t> unit_counts;
  std::size_t n_input = 0;
  std::size_t n_invalid = 0;
  std::size_t n_sequences = 0;
};

// Full pipeline: drop invalid SMILES, optionally augment, split into atom
// units and learn merges. Throws Error on an empty or all-invalid corpus.
TrainResult train(std::span<const std::string> corpus,
                  const TrainerConfig& config,
                  const MergeCallback& on_merge = {});

// Base units in sorted order followed by one token per merge in rank order,
// without duplicates.
std::vector<std::string> vocab_from_merges(std::span<const MergeRule> rules,
                                           const std::set<std::string>& base_units);

// Top-k merged tokens by learned frequency, ties broken by rank.
std::vector<std::pair<std::string, std::int64_t>> report_top_tokens(
    std::span<const MergeRule> rules, std::size_t k);

}  // namespace smipe
