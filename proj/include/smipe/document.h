#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smipe/base_tokenizer.h"
#include "smipe/tokenizer.h"
#include "smipe/vocabulary.h"

namespace smipe {

// Encodes mixed text/molecule documents. Text outside <SMILES>...</SMILES>
// goes through the base tokenizer, span contents through the SMILES model,
// and every special-token string (tags, <EOS>) becomes exactly one id.
//
// Ids live in a joint vocabulary: the base vocabulary keeps its ids and model
// tokens the base lacks are appended in model order.
class DocumentCodec {
 public:
  // Both tokenizers must outlive the codec.
  DocumentCodec(const TokenizerModel& model, const BaseTokenizer& base);

  // Throws PositionedError for unpaired or nested tags (offset of the
  // offending tag) and for invalid SMILES inside a span (offset of the
  // offending character in the document).
  std::vector<TokenId> encode(std::string_view document) const;
  std::string decode(std::span<const TokenId> ids) const;

  const Vocabulary& vocabulary() const { return joint_; }

 private:
  void append_base(std::string_view text, std::vector<TokenId>& out) const;

  const TokenizerModel& model_;
  const BaseTokenizer& base_;
  Vocabulary joint_;
  std::vector<TokenId> model_to_joint_;
  std::vector<std::string> specials_;
};

std::vector<TokenId> encode_document(const TokenizerModel& model,
                                     const BaseTokenizer& base,
                                     std::string_view document);

}  // namespace smipe
