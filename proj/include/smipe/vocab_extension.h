#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smipe/base_tokenizer.h"
#include "smipe/vocabulary.h"

namespace smipe {

enum class TokenSource { kSmiles, kText, kSpecial };

std::string_view to_string(TokenSource source);
TokenSource parse_token_source(std::string_view name);

struct PlanEntry {
  std::string token;
  TokenSource source;
  std::int64_t freq = 0;

  friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
};

// New tokens to append to a base vocabulary. Entry i receives id
// base_vocab_size + i.
struct ExtensionPlan {
  std::size_t base_vocab_size = 0;
  std::vector<PlanEntry> entries;
  std::vector<std::string> collisions_dropped;

  TokenId id_of(std::size_t entry) const {
    return static_cast<TokenId>(base_vocab_size + entry);
  }

  // {base_vocab_size, entries: [{token, source, freq}], collisions_dropped}
  std::string to_json() const;
  static ExtensionPlan from_json(std::string_view text);
};

using TokenCount = std::pair<std::string, std::int64_t>;

// Words are maximal runs of alphabetic characters: ASCII letters plus
// Latin-1/Latin Extended-A/B, Greek and Cyrillic letters. Case is preserved.
std::vector<std::string_view> extract_words(std::string_view text);

// Counts words the base tokenizer splits into two or more tokens. Special
// tag strings and everything inside <SMILES>...</SMILES> are skipped. Top-k
// by frequency, ties in byte order.
std::vector<TokenCount> extract_text_oov(std::span<const std::string> corpus,
                                         const BaseTokenizer& base,
                                         std::size_t k, unsigned threads = 1);

struct PlanOptions {
  // When false, only SMILES tokens spanning two or more atom-level units are
  // kept; single units and fallback characters are left out.
  bool include_atom_units = true;
};

// Order: SMILES tokens, text tokens, specials. Tokens already in `base` are
// dropped and listed in collisions_dropped; repeats across lists keep their
// first occurrence.
ExtensionPlan build_extension_plan(std::span<const TokenCount> smiles_tokens,
                                   std::span<const TokenCount> text_tokens,
                                   std::span<const std::string> specials,
                                   const Vocabulary& base,
                                   const PlanOptions& options = {});

// Base vocabulary followed by the plan's entries.
Vocabulary extended_vocabulary(const Vocabulary& base, const ExtensionPlan& plan);

}  // namespace smipe
