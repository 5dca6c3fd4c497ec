#include "smipe/pretokenizer.h"

#include <string>

namespace smipe {

std::string_view to_string(UnitKind kind) {
  switch (kind) {
    case UnitKind::kAtom:
      return "atom";
    case UnitKind::kBracketAtom:
      return "bracket_atom";
    case UnitKind::kBond:
      return "bond";
    case UnitKind::kRingDigit:
      return "ring_digit";
    case UnitKind::kBranchOpen:
      return "branch_open";
    case UnitKind::kBranchClose:
      return "branch_close";
    case UnitKind::kDot:
      return "dot";
    case UnitKind::kWildcard:
      return "wildcard";
  }
  return "unknown";
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Length and kind of the unit starting at s[pos].
std::pair<std::size_t, UnitKind> match_unit(std::string_view s,
                                            std::size_t pos) {
  const char c = s[pos];
  const char next = pos + 1 < s.size() ? s[pos + 1] : '\0';
  if (c == '[') {
    const auto close = s.find_first_of("[]", pos + 1);
    if (close == std::string_view::npos || s[close] != ']') {
      throw SmilesError(SmilesErrorKind::kSyntax,
                        "syntax: unterminated bracket atom", pos);
    }
    return {close - pos + 1, UnitKind::kBracketAtom};
  }
  if (c == '%') {
    if (pos + 2 < s.size() && is_digit(s[pos + 1]) && is_digit(s[pos + 2])) {
      return {3, UnitKind::kRingDigit};
    }
    throw SmilesError(SmilesErrorKind::kSyntax,
                      "syntax: '%' must be followed by two digits", pos);
  }
  if ((c == 'C' && next == 'l') || (c == 'B' && next == 'r')) {
    return {2, UnitKind::kAtom};
  }
  switch (c) {
    case 'B': case 'C': case 'N': case 'O': case 'P': case 'S': case 'F':
    case 'I': case 'b': case 'c': case 'n': case 'o': case 'p': case 's':
      return {1, UnitKind::kAtom};
    case '*':
      return {1, UnitKind::kWildcard};
    case '-': case '=': case '#': case '$': case ':': case '/': case '\\':
      return {1, UnitKind::kBond};
    case '(':
      return {1, UnitKind::kBranchOpen};
    case ')':
      return {1, UnitKind::kBranchClose};
    case '.':
      return {1, UnitKind::kDot};
    default:
      break;
  }
  if (is_digit(c)) return {1, UnitKind::kRingDigit};
  throw SmilesError(SmilesErrorKind::kSyntax,
                    std::string("syntax: unexpected character '") + c + "'",
                    pos);
}

}  // namespace

std::vector<SmilesUnit> atom_tokenize(std::string_view smiles) {
  std::vector<SmilesUnit> units;
  std::size_t pos = 0;
  while (pos < smiles.size()) {
    const auto [len, kind] = match_unit(smiles, pos);
    units.push_back({std::string(smiles.substr(pos, len)), kind});
    pos += len;
  }
  return units;
}

std::vector<std::string> atom_units(std::string_view smiles) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < smiles.size()) {
    const std::size_t len = match_unit(smiles, pos).first;
    out.emplace_back(smiles.substr(pos, len));
    pos += len;
  }
  return out;
}

UnitKind classify_unit(std::string_view text) {
  if (text.empty()) {
    throw SmilesError(SmilesErrorKind::kSyntax, "syntax: empty unit", 0);
  }
  const auto [len, kind] = match_unit(text, 0);
  if (len != text.size()) {
    throw SmilesError(SmilesErrorKind::kSyntax,
                      "syntax: text spans more than one unit", len);
  }
  return kind;
}

}  // namespace smipe
