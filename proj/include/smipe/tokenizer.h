#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "smipe/pretokenizer.h"
#include "smipe/trainer.h"
#include "smipe/vocabulary.h"

namespace smipe {

// Tags used by the corpus format, in the order they are added to a model.
inline const std::vector<std::string> kDefaultSpecialTokens = {
    "<EOS>", "<SMILES>", "</SMILES>", "<MOLFORMULA>", "</MOLFORMULA>"};

// A trained SMILES pair-encoding tokenizer: merge rules applied over
// atom-level units, with character fallback for units missing from the
// vocabulary. Immutable once constructed.
class TokenizerModel {
 public:
  // Validates that merge inputs and outputs and all specials are in `vocab`,
  // and that no merge produces a special token. Throws FormatError.
  TokenizerModel(std::vector<MergeRule> merges, Vocabulary vocab,
                 std::string pretokenizer = std::string(kAtomPretokenizerId));

  // Vocabulary layout: specials, then the sorted union of `base_units` and
  // every printable ASCII character (the fallback alphabet), then merged
  // tokens in rank order.
  static TokenizerModel build(
      std::vector<MergeRule> merges, const std::set<std::string>& base_units,
      std::span<const std::string> specials = kDefaultSpecialTokens);

  std::vector<std::string> encode_smiles_tokens(std::string_view smiles) const;
  std::vector<TokenId> encode_smiles(std::string_view smiles) const;
  // Throws Error on an out-of-range id.
  std::string decode(std::span<const TokenId> ids) const;

  const Vocabulary& vocabulary() const { return vocab_; }
  std::span<const MergeRule> merges() const { return merges_; }
  const std::string& pretokenizer() const { return pretokenizer_; }

  // JSON model file: {format_version: 1, pretokenizer, special_tokens, vocab,
  // merges: [[left, right]...]} plus an optional merge_frequencies array.
  std::string to_json() const;
  static TokenizerModel from_json(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static TokenizerModel load(const std::filesystem::path& path);

 private:
  std::vector<MergeRule> merges_;
  Vocabulary vocab_;
  std::string pretokenizer_;
  std::unordered_map<std::string, int> merge_rank_;
};

// Applies merges to a unit sequence, lowest rank first, each merge replacing
// all of its non-overlapping occurrences left to right.
std::vector<std::string> apply_merges(
    std::vector<std::string> symbols,
    const std::unordered_map<std::string, int>& merge_rank);

// Key used in merge-rank maps.
std::string merge_key(std::string_view left, std::string_view right);

}  // namespace smipe
