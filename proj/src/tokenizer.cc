#include "smipe/tokenizer.h"

#include <limits>

#include <json.hpp>

#include "smipe/error.h"
#include "smipe/io.h"

namespace smipe {

std::string merge_key(std::string_view left, std::string_view right) {
  std::string key = std::to_string(left.size());
  key += ':';
  key += left;
  key += right;
  return key;
}

std::vector<std::string> apply_merges(
    std::vector<std::string> symbols,
    const std::unordered_map<std::string, int>& merge_rank) {
  while (symbols.size() > 1) {
    int best = std::numeric_limits<int>::max();
    std::size_t at = 0;
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
      const auto it = merge_rank.find(merge_key(symbols[i], symbols[i + 1]));
      if (it != merge_rank.end() && it->second < best) {
        best = it->second;
        at = i;
      }
    }
    if (best == std::numeric_limits<int>::max()) break;

    const std::string left = symbols[at];
    const std::string right = symbols[at + 1];
    std::vector<std::string> next;
    next.reserve(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      if (i + 1 < symbols.size() && symbols[i] == left &&
          symbols[i + 1] == right) {
        next.push_back(left + right);
        ++i;
      } else {
        next.push_back(std::move(symbols[i]));
      }
    }
    symbols = std::move(next);
  }
  return symbols;
}

TokenizerModel::TokenizerModel(std::vector<MergeRule> merges, Vocabulary vocab,
                               std::string pretokenizer)
    : merges_(std::move(merges)),
      vocab_(std::move(vocab)),
      pretokenizer_(std::move(pretokenizer)) {
  if (pretokenizer_ != kAtomPretokenizerId) {
    throw FormatError("unsupported pretokenizer '" + pretokenizer_ + "'");
  }
  for (std::size_t i = 0; i < merges_.size(); ++i) {
    MergeRule& rule = merges_[i];
    rule.rank = static_cast<int>(i);
    for (const std::string* part : {&rule.left, &rule.right}) {
      if (!vocab_.contains(*part)) {
        throw FormatError("merge " + std::to_string(i) + " uses '" + *part +
                          "' which is not in the vocabulary");
      }
    }
    const std::string token = rule.token();
    if (!vocab_.contains(token)) {
      throw FormatError("merge " + std::to_string(i) + " produces '" + token +
                        "' which is not in the vocabulary");
    }
    if (vocab_.is_special(token)) {
      throw FormatError("merge " + std::to_string(i) +
                        " produces special token '" + token + "'");
    }
    merge_rank_.try_emplace(merge_key(rule.left, rule.right), rule.rank);
  }
}

TokenizerModel TokenizerModel::build(std::vector<MergeRule> merges,
                                     const std::set<std::string>& base_units,
                                     std::span<const std::string> specials) {
  std::set<std::string> alphabet = base_units;
  for (char c = '!'; c <= '~'; ++c) alphabet.insert(std::string(1, c));

  Vocabulary vocab;
  for (const auto& s : specials) vocab.mark_special(s);
  for (const auto& token : vocab_from_merges(merges, alphabet)) vocab.add(token);
  return TokenizerModel(std::move(merges), std::move(vocab));
}

std::vector<std::string> TokenizerModel::encode_smiles_tokens(
    std::string_view smiles) const {
  std::vector<std::string> merged = apply_merges(atom_units(smiles), merge_rank_);
  std::vector<std::string> out;
  out.reserve(merged.size());
  for (auto& token : merged) {
    if (vocab_.contains(token)) {
      out.push_back(std::move(token));
      continue;
    }
    for (char c : token) out.emplace_back(1, c);
  }
  return out;
}

std::vector<TokenId> TokenizerModel::encode_smiles(std::string_view smiles) const {
  std::vector<TokenId> ids;
  for (const auto& token : encode_smiles_tokens(smiles)) {
    const auto id = vocab_.find(token);
    if (!id) {
      throw Error("character '" + token +
                  "' has no fallback token in the model vocabulary");
    }
    ids.push_back(*id);
  }
  return ids;
}

std::string TokenizerModel::decode(std::span<const TokenId> ids) const {
  std::string out;
  for (TokenId id : ids) out += vocab_.token(id);
  return out;
}

std::string TokenizerModel::to_json() const {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["pretokenizer"] = pretokenizer_;
  // Specials in id order so the file is stable.
  std::vector<std::string> specials;
  for (const auto& t : vocab_.tokens()) {
    if (vocab_.is_special(t)) specials.push_back(t);
  }
  j["special_tokens"] = specials;
  j["vocab"] = std::vector<std::string>(vocab_.tokens().begin(),
                                        vocab_.tokens().end());
  auto merges = nlohmann::ordered_json::array();
  auto freqs = nlohmann::ordered_json::array();
  for (const auto& rule : merges_) {
    merges.push_back({rule.left, rule.right});
    freqs.push_back(rule.learned_frequency);
  }
  j["merges"] = std::move(merges);
  j["merge_frequencies"] = std::move(freqs);
  return j.dump(1) + "\n";
}

TokenizerModel TokenizerModel::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != 1) {
      throw FormatError("unsupported model format_version");
    }
    auto tokens = j.at("vocab").get<std::vector<std::string>>();
    auto specials = j.at("special_tokens").get<std::vector<std::string>>();
    std::vector<MergeRule> merges;
    const auto& jm = j.at("merges");
    std::vector<std::int64_t> freqs;
    if (j.contains("merge_frequencies")) {
      freqs = j.at("merge_frequencies").get<std::vector<std::int64_t>>();
      if (freqs.size() != jm.size()) {
        throw FormatError("merge_frequencies length differs from merges");
      }
    }
    for (std::size_t i = 0; i < jm.size(); ++i) {
      const auto pair = jm.at(i).get<std::vector<std::string>>();
      if (pair.size() != 2) throw FormatError("merge entries must be pairs");
      merges.push_back({pair[0], pair[1], static_cast<int>(i),
                        freqs.empty() ? 0 : freqs[i]});
    }
    Vocabulary vocab(std::move(tokens),
                     std::set<std::string>(specials.begin(), specials.end()));
    return TokenizerModel(std::move(merges), std::move(vocab),
                          j.at("pretokenizer").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed model file: ") + e.what());
  }
}

void TokenizerModel::save(const std::filesystem::path& path) const {
  write_file(path, to_json());
}

TokenizerModel TokenizerModel::load(const std::filesystem::path& path) {
  try {
    return from_json(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace smipe
