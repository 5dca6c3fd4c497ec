#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "smipe/vocabulary.h"

namespace smipe {

// Stand-in for a general-purpose LLM tokenizer: byte-level greedy merge
// application over whitespace/letter/digit chunks. Every single byte has a
// token, so any input round-trips through encode/decode.
//
// Files are UTF-8 text, one entry per line. The vocab file lists one token
// per line; the merges file lists "left right" per line (a "#version" header
// line is ignored). Tokens are escaped: \\ \n \t \r \s (space), and \xHH
// for other control and non-ASCII bytes.
class BaseTokenizer {
 public:
  // Single-byte tokens missing from `vocab` are appended in byte order.
  // Throws FormatError if a merge's parts or result are not in the vocab.
  BaseTokenizer(Vocabulary vocab,
                std::vector<std::pair<std::string, std::string>> merges);

  static BaseTokenizer load(const std::filesystem::path& vocab_path,
                            const std::filesystem::path& merges_path);
  static BaseTokenizer parse(std::string_view vocab_text,
                             std::string_view merges_text);

  std::vector<std::string> encode_pieces(std::string_view text) const;
  std::vector<TokenId> encode(std::string_view text) const;
  std::string decode(std::span<const TokenId> ids) const;

  const Vocabulary& vocabulary() const { return vocab_; }
  std::span<const std::pair<std::string, std::string>> merges() const {
    return merges_;
  }

  std::string vocab_text() const;
  std::string merges_text() const;

 private:
  Vocabulary vocab_;
  std::vector<std::pair<std::string, std::string>> merges_;
  std::unordered_map<std::string, int> merge_rank_;
};

// Pre-split used by BaseTokenizer: runs of letters (bytes >= 0x80 count as
// letters), digits, other symbols, or whitespace; a single space before a
// non-space run is attached to that run.
std::vector<std::string_view> split_chunks(std::string_view text);

std::string escape_token(std::string_view token);
// Throws FormatError on a bad escape.
std::string unescape_token(std::string_view text);

}  // namespace smipe
