#include "smipe/base_tokenizer.h"

#include <cctype>
#include <cstdio>

#include "smipe/error.h"
#include "smipe/io.h"
#include "smipe/tokenizer.h"

namespace smipe {

namespace {

enum class CharClass { kLetter, kDigit, kSpace, kOther };

CharClass classify(char c) {
  const auto u = static_cast<unsigned char>(c);
  if (u >= 0x80 || std::isalpha(u)) return CharClass::kLetter;
  if (std::isdigit(u)) return CharClass::kDigit;
  if (std::isspace(u)) return CharClass::kSpace;
  return CharClass::kOther;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

}  // namespace

std::vector<std::string_view> split_chunks(std::string_view text) {
  std::vector<std::string_view> chunks;
  std::size_t pos = 0;
  const std::size_t n = text.size();
  while (pos < n) {
    std::size_t start = pos;
    CharClass cls = classify(text[pos]);
    if (text[pos] == ' ' && pos + 1 < n &&
        classify(text[pos + 1]) != CharClass::kSpace) {
      cls = classify(text[pos + 1]);
      pos += 1;
    } else if (cls == CharClass::kSpace) {
      std::size_t end = pos;
      while (end < n && classify(text[end]) == CharClass::kSpace) ++end;
      // Leave one trailing space to prefix the following word.
      if (end < n && end - pos > 1 && text[end - 1] == ' ') --end;
      chunks.push_back(text.substr(start, end - start));
      pos = end;
      continue;
    }
    while (pos < n && classify(text[pos]) == cls) ++pos;
    chunks.push_back(text.substr(start, pos - start));
  }
  return chunks;
}

std::string escape_token(std::string_view token) {
  std::string out;
  for (char c : token) {
    const auto u = static_cast<unsigned char>(c);
    switch (c) {
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\r':
        out += "\\r";
        break;
      case ' ':
        out += "\\s";
        break;
      default:
        if (u < 0x20 || u >= 0x7f) {
          char buf[5];
          std::snprintf(buf, sizeof buf, "\\x%02x", u);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string unescape_token(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\') {
      out += text[i];
      continue;
    }
    if (i + 1 >= text.size()) throw FormatError("dangling '\\' in token");
    const char e = text[++i];
    switch (e) {
      case '\\':
        out += '\\';
        break;
      case 'n':
        out += '\n';
        break;
      case 't':
        out += '\t';
        break;
      case 'r':
        out += '\r';
        break;
      case 's':
        out += ' ';
        break;
      case 'x': {
        if (i + 2 >= text.size()) throw FormatError("truncated \\x escape");
        const std::string hex(text.substr(i + 1, 2));
        if (hex.size() != 2 || !std::isxdigit(static_cast<unsigned char>(hex[0])) ||
            !std::isxdigit(static_cast<unsigned char>(hex[1]))) {
          throw FormatError("bad \\x escape");
        }
        out += static_cast<char>(std::stoi(hex, nullptr, 16));
        i += 2;
        break;
      }
      default:
        throw FormatError(std::string("unknown escape \\") + e);
    }
  }
  return out;
}

BaseTokenizer::BaseTokenizer(
    Vocabulary vocab, std::vector<std::pair<std::string, std::string>> merges)
    : vocab_(std::move(vocab)), merges_(std::move(merges)) {
  for (int b = 0; b < 256; ++b) vocab_.add(std::string(1, static_cast<char>(b)));
  for (std::size_t i = 0; i < merges_.size(); ++i) {
    const auto& [left, right] = merges_[i];
    if (!vocab_.contains(left) || !vocab_.contains(right) ||
        !vocab_.contains(left + right)) {
      throw FormatError("base merge " + std::to_string(i) + " (" +
                        escape_token(left) + " " + escape_token(right) +
                        ") refers to tokens outside the vocabulary");
    }
    merge_rank_.try_emplace(merge_key(left, right), static_cast<int>(i));
  }
}

BaseTokenizer BaseTokenizer::parse(std::string_view vocab_text,
                                   std::string_view merges_text) {
  Vocabulary vocab;
  for (auto line : split_lines(vocab_text)) {
    if (line.empty()) continue;
    const std::string token = unescape_token(line);
    if (vocab.contains(token)) {
      throw FormatError("duplicate base vocabulary entry '" +
                        std::string(line) + "'");
    }
    vocab.add(token);
  }
  std::vector<std::pair<std::string, std::string>> merges;
  for (auto line : split_lines(merges_text)) {
    if (line.empty() || line.starts_with("#version")) continue;
    const auto space = line.find(' ');
    if (space == std::string_view::npos ||
        line.find(' ', space + 1) != std::string_view::npos) {
      throw FormatError("merge line must hold two tokens: '" +
                        std::string(line) + "'");
    }
    merges.emplace_back(unescape_token(line.substr(0, space)),
                        unescape_token(line.substr(space + 1)));
  }
  return BaseTokenizer(std::move(vocab), std::move(merges));
}

BaseTokenizer BaseTokenizer::load(const std::filesystem::path& vocab_path,
                                  const std::filesystem::path& merges_path) {
  return parse(read_file(vocab_path), read_file(merges_path));
}

std::vector<std::string> BaseTokenizer::encode_pieces(std::string_view text) const {
  std::vector<std::string> pieces;
  for (auto chunk : split_chunks(text)) {
    std::vector<std::string> bytes;
    bytes.reserve(chunk.size());
    for (char c : chunk) bytes.emplace_back(1, c);
    for (auto& p : apply_merges(std::move(bytes), merge_rank_)) {
      pieces.push_back(std::move(p));
    }
  }
  return pieces;
}

std::vector<TokenId> BaseTokenizer::encode(std::string_view text) const {
  std::vector<TokenId> ids;
  for (const auto& piece : encode_pieces(text)) ids.push_back(*vocab_.find(piece));
  return ids;
}

std::string BaseTokenizer::decode(std::span<const TokenId> ids) const {
  std::string out;
  for (TokenId id : ids) out += vocab_.token(id);
  return out;
}

std::string BaseTokenizer::vocab_text() const {
  std::string out;
  for (const auto& t : vocab_.tokens()) out += escape_token(t) + "\n";
  return out;
}

std::string BaseTokenizer::merges_text() const {
  std::string out;
  for (const auto& [l, r] : merges_) {
    out += escape_token(l) + " " + escape_token(r) + "\n";
  }
  return out;
}

}  // namespace smipe
