#include "smipe/document.h"

#include <algorithm>
#include <optional>

#include "smipe/error.h"
#include "smipe/smiles.h"

namespace smipe {

namespace {
constexpr std::string_view kSmilesOpen = "<SMILES>";
constexpr std::string_view kSmilesClose = "</SMILES>";
constexpr std::string_view kFormulaOpen = "<MOLFORMULA>";
constexpr std::string_view kFormulaClose = "</MOLFORMULA>";
}  // namespace

DocumentCodec::DocumentCodec(const TokenizerModel& model,
                             const BaseTokenizer& base)
    : model_(model), base_(base) {
  for (const auto& t : base.vocabulary().tokens()) joint_.add(t);
  const Vocabulary& mv = model.vocabulary();
  model_to_joint_.reserve(mv.size());
  for (const auto& t : mv.tokens()) {
    model_to_joint_.push_back(joint_.add(t));
    if (mv.is_special(t)) {
      joint_.mark_special(t);
      specials_.push_back(t);
    }
  }
  // Longest match first so one tag can never shadow a longer one.
  std::sort(specials_.begin(), specials_.end(),
            [](const std::string& a, const std::string& b) {
              return a.size() != b.size() ? a.size() > b.size() : a < b;
            });
}

void DocumentCodec::append_base(std::string_view text,
                                std::vector<TokenId>& out) const {
  if (text.empty()) return;
  const auto ids = base_.encode(text);
  out.insert(out.end(), ids.begin(), ids.end());
}

std::vector<TokenId> DocumentCodec::encode(std::string_view doc) const {
  enum class State { kText, kSmiles, kFormula };
  State state = State::kText;
  std::size_t open_at = 0;   // offset of the currently open tag
  std::size_t segment = 0;   // start of pending text or SMILES content
  std::vector<TokenId> out;

  std::size_t pos = 0;
  while (pos < doc.size()) {
    std::optional<std::string_view> tag;
    for (const auto& s : specials_) {
      if (doc.substr(pos, s.size()) == s) {
        tag = s;
        break;
      }
    }
    if (!tag) {
      ++pos;
      continue;
    }
    const TokenId tag_id = *joint_.find(*tag);

    if (state == State::kSmiles) {
      if (*tag != kSmilesClose) {
        throw PositionedError(
            "tag " + std::string(*tag) + " inside a <SMILES> span", pos);
      }
      const std::string_view content = doc.substr(segment, pos - segment);
      std::vector<TokenId> ids;
      try {
        ids = model_.encode_smiles(content);
      } catch (const SmilesError& e) {
        throw PositionedError(std::string("invalid SMILES span: ") + e.what(),
                              segment + e.position());
      }
      for (TokenId id : ids) {
        out.push_back(model_to_joint_[static_cast<std::size_t>(id)]);
      }
      out.push_back(tag_id);
      state = State::kText;
    } else {
      append_base(doc.substr(segment, pos - segment), out);
      if (*tag == kSmilesOpen) {
        if (state == State::kFormula) {
          throw PositionedError("<SMILES> nested inside <MOLFORMULA>", pos);
        }
        state = State::kSmiles;
        open_at = pos;
      } else if (*tag == kSmilesClose) {
        throw PositionedError("unpaired </SMILES>", pos);
      } else if (*tag == kFormulaOpen) {
        if (state == State::kFormula) {
          throw PositionedError("nested <MOLFORMULA>", pos);
        }
        state = State::kFormula;
        open_at = pos;
      } else if (*tag == kFormulaClose) {
        if (state != State::kFormula) {
          throw PositionedError("unpaired </MOLFORMULA>", pos);
        }
        state = State::kText;
      }
      out.push_back(tag_id);
    }
    pos += tag->size();
    segment = pos;
  }

  if (state == State::kSmiles) throw PositionedError("unpaired <SMILES>", open_at);
  if (state == State::kFormula) {
    throw PositionedError("unpaired <MOLFORMULA>", open_at);
  }
  append_base(doc.substr(segment), out);
  return out;
}

std::string DocumentCodec::decode(std::span<const TokenId> ids) const {
  std::string out;
  for (TokenId id : ids) out += joint_.token(id);
  return out;
}

std::vector<TokenId> encode_document(const TokenizerModel& model,
                                     const BaseTokenizer& base,
                                     std::string_view document) {
  return DocumentCodec(model, base).encode(document);
}

}  // namespace smipe
