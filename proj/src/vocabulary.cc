#include "smipe/vocabulary.h"

#include "smipe/error.h"

namespace smipe {

Vocabulary::Vocabulary(std::vector<std::string> tokens,
                       std::set<std::string> special_tokens) {
  tokens_.reserve(tokens.size());
  for (auto& t : tokens) {
    if (contains(t)) throw FormatError("duplicate vocabulary entry '" + t + "'");
    ids_.emplace(t, static_cast<TokenId>(tokens_.size()));
    tokens_.push_back(std::move(t));
  }
  for (const auto& s : special_tokens) {
    if (!contains(s)) {
      throw FormatError("special token '" + s + "' is not in the vocabulary");
    }
  }
  specials_ = std::move(special_tokens);
}

TokenId Vocabulary::add(const std::string& token) {
  if (auto id = find(token)) return *id;
  const auto id = static_cast<TokenId>(tokens_.size());
  ids_.emplace(token, id);
  tokens_.push_back(token);
  return id;
}

void Vocabulary::mark_special(const std::string& token) {
  add(token);
  specials_.insert(token);
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  const auto it = ids_.find(token);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw Error("token id " + std::to_string(id) +
                            " out of range for vocabulary of size " +
                            std::to_string(tokens_.size()));
  }
  return tokens_[static_cast<std::size_t>(id)];
}

}  // namespace smipe
