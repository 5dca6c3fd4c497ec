#include "smipe/vocab_extension.h"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "smipe/error.h"
#include "smipe/parallel.h"
#include "smipe/pretokenizer.h"
#include "smipe/tokenizer.h"

namespace smipe {

std::string_view to_string(TokenSource source) {
  switch (source) {
    case TokenSource::kSmiles:
      return "smiles";
    case TokenSource::kText:
      return "text";
    case TokenSource::kSpecial:
      return "special";
  }
  return "unknown";
}

TokenSource parse_token_source(std::string_view name) {
  if (name == "smiles") return TokenSource::kSmiles;
  if (name == "text") return TokenSource::kText;
  if (name == "special") return TokenSource::kSpecial;
  throw FormatError("unknown token source '" + std::string(name) + "'");
}

namespace {

// Decodes one UTF-8 code point at s[pos]; returns {code point, length} or
// {-1, 1} for an invalid sequence.
std::pair<long, std::size_t> decode_utf8(std::string_view s, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len;
  long cp;
  if ((b0 & 0xe0) == 0xc0) {
    len = 2;
    cp = b0 & 0x1f;
  } else if ((b0 & 0xf0) == 0xe0) {
    len = 3;
    cp = b0 & 0x0f;
  } else if ((b0 & 0xf8) == 0xf0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {-1, 1};
  }
  if (pos + len > s.size()) return {-1, 1};
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xc0) != 0x80) return {-1, 1};
    cp = (cp << 6) | (b & 0x3f);
  }
  return {cp, len};
}

bool is_letter(long cp) {
  if ((cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z')) return true;
  if (cp >= 0xc0 && cp <= 0x24f) return cp != 0xd7 && cp != 0xf7;
  if (cp >= 0x370 && cp <= 0x3ff) return cp != 0x37e && cp != 0x387;
  return cp >= 0x400 && cp <= 0x4ff;
}

// Text with SMILES spans and tag strings blanked out, as separate pieces.
std::vector<std::string_view> text_regions(std::string_view doc) {
  static const std::vector<std::string_view> kTags = {
      "<MOLFORMULA>", "</MOLFORMULA>", "</SMILES>", "<SMILES>", "<EOS>"};
  std::vector<std::string_view> regions;
  std::size_t start = 0;
  std::size_t pos = 0;
  while (pos < doc.size()) {
    if (doc[pos] != '<') {
      ++pos;
      continue;
    }
    const auto tag = std::find_if(kTags.begin(), kTags.end(), [&](auto t) {
      return doc.substr(pos, t.size()) == t;
    });
    if (tag == kTags.end()) {
      ++pos;
      continue;
    }
    regions.push_back(doc.substr(start, pos - start));
    pos += tag->size();
    if (*tag == "<SMILES>") {
      const auto close = doc.find("</SMILES>", pos);
      pos = close == std::string_view::npos ? doc.size() : close + 9;
    }
    start = pos;
  }
  regions.push_back(doc.substr(start));
  return regions;
}

}  // namespace

std::vector<std::string_view> extract_words(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t pos = 0;
  std::size_t start = std::string_view::npos;
  while (pos < text.size()) {
    const auto [cp, len] = decode_utf8(text, pos);
    if (is_letter(cp)) {
      if (start == std::string_view::npos) start = pos;
    } else if (start != std::string_view::npos) {
      words.push_back(text.substr(start, pos - start));
      start = std::string_view::npos;
    }
    pos += len;
  }
  if (start != std::string_view::npos) words.push_back(text.substr(start));
  return words;
}

std::vector<TokenCount> extract_text_oov(std::span<const std::string> corpus,
                                         const BaseTokenizer& base,
                                         std::size_t k, unsigned threads) {
  std::vector<std::map<std::string, std::int64_t, std::less<>>> partial(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t i) {
    for (auto region : text_regions(corpus[i])) {
      for (auto word : extract_words(region)) {
        auto it = partial[i].find(word);
        if (it == partial[i].end()) it = partial[i].emplace(word, 0).first;
        ++it->second;
      }
    }
  });
  std::map<std::string, std::int64_t, std::less<>> counts;
  for (auto& p : partial) {
    for (auto& [w, c] : p) counts[w] += c;
  }

  std::vector<TokenCount> oov;
  for (const auto& [word, count] : counts) {
    if (base.encode_pieces(word).size() >= 2) oov.emplace_back(word, count);
  }
  std::stable_sort(oov.begin(), oov.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (oov.size() > k) oov.resize(k);
  return oov;
}

ExtensionPlan build_extension_plan(std::span<const TokenCount> smiles_tokens,
                                   std::span<const TokenCount> text_tokens,
                                   std::span<const std::string> specials,
                                   const Vocabulary& base,
                                   const PlanOptions& options) {
  ExtensionPlan plan;
  plan.base_vocab_size = base.size();
  std::set<std::string> taken;
  std::set<std::string> dropped;
  const auto offer = [&](const std::string& token, TokenSource source,
                         std::int64_t freq) {
    if (base.contains(token)) {
      if (dropped.insert(token).second) plan.collisions_dropped.push_back(token);
      return;
    }
    if (!taken.insert(token).second) return;
    plan.entries.push_back({token, source, freq});
  };

  for (const auto& [token, freq] : smiles_tokens) {
    if (!options.include_atom_units) {
      std::size_t units = 0;
      try {
        units = atom_units(token).size();
      } catch (const SmilesError&) {
      }
      if (units < 2) continue;
    }
    offer(token, TokenSource::kSmiles, freq);
  }
  for (const auto& [token, freq] : text_tokens) offer(token, TokenSource::kText, freq);
  for (const auto& token : specials) offer(token, TokenSource::kSpecial, 0);
  return plan;
}

Vocabulary extended_vocabulary(const Vocabulary& base, const ExtensionPlan& plan) {
  if (base.size() != plan.base_vocab_size) {
    throw Error("plan was built for a base vocabulary of " +
                std::to_string(plan.base_vocab_size) + " tokens, got " +
                std::to_string(base.size()));
  }
  Vocabulary out = base;
  for (const auto& e : plan.entries) {
    if (out.contains(e.token)) {
      throw FormatError("plan entry '" + e.token + "' already in vocabulary");
    }
    if (e.source == TokenSource::kSpecial) {
      out.mark_special(e.token);
    } else {
      out.add(e.token);
    }
  }
  return out;
}

std::string ExtensionPlan::to_json() const {
  nlohmann::ordered_json j;
  j["base_vocab_size"] = base_vocab_size;
  auto entries_json = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json entry;
    entry["token"] = e.token;
    entry["source"] = std::string(to_string(e.source));
    entry["freq"] = e.freq;
    entries_json.push_back(std::move(entry));
  }
  j["entries"] = std::move(entries_json);
  j["collisions_dropped"] = collisions_dropped;
  return j.dump(1) + "\n";
}

ExtensionPlan ExtensionPlan::from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    ExtensionPlan plan;
    plan.base_vocab_size = j.at("base_vocab_size").get<std::size_t>();
    std::set<std::string> seen;
    for (const auto& e : j.at("entries")) {
      PlanEntry entry{e.at("token").get<std::string>(),
                      parse_token_source(e.at("source").get<std::string>()),
                      e.at("freq").get<std::int64_t>()};
      if (!seen.insert(entry.token).second) {
        throw FormatError("duplicate plan entry '" + entry.token + "'");
      }
      plan.entries.push_back(std::move(entry));
    }
    plan.collisions_dropped =
        j.at("collisions_dropped").get<std::vector<std::string>>();
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed plan file: ") + e.what());
  }
}

}  // namespace smipe
