#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace smipe {

using TokenId = std::int32_t;

// Dense, ordered token list with reverse lookup. Ids are positions.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Throws FormatError on duplicates or specials missing from `tokens`.
  explicit Vocabulary(std::vector<std::string> tokens,
                      std::set<std::string> special_tokens = {});

  // Appends `token` if absent; returns its id either way.
  TokenId add(const std::string& token);
  void mark_special(const std::string& token);

  std::optional<TokenId> find(std::string_view token) const;
  bool contains(std::string_view token) const { return find(token).has_value(); }
  // Throws Error for ids outside [0, size()).
  const std::string& token(TokenId id) const;

  std::size_t size() const { return tokens_.size(); }
  std::span<const std::string> tokens() const { return tokens_; }
  const std::set<std::string>& special_tokens() const { return specials_; }
  bool is_special(std::string_view token) const {
    return specials_.find(std::string(token)) != specials_.end();
  }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId, Hash, std::equal_to<>> ids_;
  std::set<std::string> specials_;
};

}  // namespace smipe
