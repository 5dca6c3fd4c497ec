#include <array>
#include <cctype>
#include <string>
#include <vector>

#include "smiles_internal.h"
#include "smipe/smiles.h"

namespace smipe {

std::string_view to_string(SmilesErrorKind kind) {
  switch (kind) {
    case SmilesErrorKind::kSyntax:
      return "syntax";
    case SmilesErrorKind::kUnclosedRing:
      return "unclosed_ring";
    case SmilesErrorKind::kUnbalancedParens:
      return "unbalanced_parens";
    case SmilesErrorKind::kBadBracketAtom:
      return "bad_bracket_atom";
    case SmilesErrorKind::kValence:
      return "valence";
  }
  return "unknown";
}

namespace detail {
namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

enum class Last { kStart, kAtom, kBond, kBranchOpen, kBranchClose, kDot, kRing };

struct PendingBond {
  BondOrder order = BondOrder::kSingle;
  BondDirection direction = BondDirection::kNone;
  std::size_t position = 0;
};

struct OpenRing {
  int atom = -1;
  std::optional<PendingBond> bond;
  std::size_t position = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  ParsedSmiles run() {
    if (s_.empty()) fail(SmilesErrorKind::kSyntax, "empty SMILES", 0);
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '[' || c == '*' || std::isalpha(static_cast<unsigned char>(c))) {
        atom();
      } else if (c == '-' || c == '=' || c == '#' || c == '$' || c == ':' ||
                 c == '/' || c == '\\') {
        bond_symbol();
      } else if (is_digit(c) || c == '%') {
        ring_closure();
      } else if (c == '(') {
        branch_open();
      } else if (c == ')') {
        branch_close();
      } else if (c == '.') {
        dot();
      } else {
        fail(SmilesErrorKind::kSyntax,
             std::string("unexpected character '") + c + "'", pos_);
      }
    }
    finish();
    return std::move(out_);
  }

 private:
  [[noreturn]] void fail(SmilesErrorKind kind, const std::string& message,
                         std::size_t position) {
    throw SmilesError(kind, std::string(to_string(kind)) + ": " + message,
                      position);
  }

  void connect(int a, int b, const std::optional<PendingBond>& pending,
               std::size_t position) {
    if (out_.molecule.find_bond(a, b)) {
      fail(SmilesErrorKind::kSyntax, "duplicate bond", position);
    }
    BondOrder order = BondOrder::kSingle;
    BondDirection direction = BondDirection::kNone;
    if (pending) {
      order = pending->order;
      direction = pending->direction;
    } else if (out_.molecule.atom(a).aromatic &&
               out_.molecule.atom(b).aromatic) {
      order = BondOrder::kAromatic;
    }
    out_.molecule.add_bond(a, b, order, direction);
  }

  void atom() {
    const std::size_t start = pos_;
    Atom a = s_[pos_] == '[' ? bracket_atom() : organic_atom();
    const int index = out_.molecule.add_atom(std::move(a));
    out_.atom_offsets.push_back(start);
    if (prev_ >= 0) connect(prev_, index, pending_, start);
    pending_.reset();
    prev_ = index;
    last_ = Last::kAtom;
  }

  Atom organic_atom() {
    Atom a;
    const char c = s_[pos_];
    const char next = pos_ + 1 < s_.size() ? s_[pos_ + 1] : '\0';
    if (c == '*') {
      a.element = "*";
      a.is_wildcard = true;
      ++pos_;
      return a;
    }
    if ((c == 'C' && next == 'l') || (c == 'B' && next == 'r')) {
      a.element = std::string{c, next};
      pos_ += 2;
      return a;
    }
    switch (c) {
      case 'B':
      case 'C':
      case 'N':
      case 'O':
      case 'P':
      case 'S':
      case 'F':
      case 'I':
        a.element = std::string(1, c);
        break;
      case 'b':
      case 'c':
      case 'n':
      case 'o':
      case 'p':
      case 's':
        a.element = std::string(1, static_cast<char>(std::toupper(c)));
        a.aromatic = true;
        break;
      default:
        fail(SmilesErrorKind::kSyntax,
             std::string("'") + c + "' is not an organic-subset atom", pos_);
    }
    ++pos_;
    return a;
  }

  // Reads up to `max_digits` decimal digits; nullopt if none.
  std::optional<int> number(std::size_t max_digits) {
    std::size_t n = 0;
    int value = 0;
    while (pos_ < s_.size() && is_digit(s_[pos_]) && n < max_digits) {
      value = value * 10 + (s_[pos_] - '0');
      ++pos_;
      ++n;
    }
    if (n == 0) return std::nullopt;
    return value;
  }

  Atom bracket_atom() {
    const std::size_t open = pos_;
    const auto bad = [&](const std::string& message) {
      fail(SmilesErrorKind::kBadBracketAtom, message, open);
    };
    const auto peek = [&]() -> char {
      return pos_ < s_.size() ? s_[pos_] : '\0';
    };
    ++pos_;
    Atom a;
    a.explicit_h = 0;

    if (auto iso = number(3)) {
      if (*iso <= 0) bad("isotope must be positive");
      a.isotope = *iso;
    }

    // Element symbol.
    const char c = peek();
    const char c2 = pos_ + 1 < s_.size() ? s_[pos_ + 1] : '\0';
    if (c == '*') {
      a.element = "*";
      a.is_wildcard = true;
      ++pos_;
    } else if (std::islower(static_cast<unsigned char>(c))) {
      std::string two{c, c2};
      if (two == "se" || two == "as") {
        a.element = std::string{static_cast<char>(std::toupper(c)), c2};
        pos_ += 2;
      } else if (c == 'b' || c == 'c' || c == 'n' || c == 'o' || c == 'p' ||
                 c == 's') {
        a.element = std::string(1, static_cast<char>(std::toupper(c)));
        ++pos_;
      } else {
        bad("unknown aromatic symbol");
      }
      a.aromatic = true;
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      const std::string two{c, c2};
      if (std::islower(static_cast<unsigned char>(c2)) &&
          is_element_symbol(two)) {
        a.element = two;
        pos_ += 2;
      } else if (is_element_symbol(std::string(1, c))) {
        a.element = std::string(1, c);
        ++pos_;
      } else {
        bad("unknown element");
      }
    } else {
      bad("missing element symbol");
    }

    if (peek() == '@') {
      ++pos_;
      if (peek() == '@') {
        ++pos_;
        a.chirality = Chirality::kClockwise;
      } else {
        a.chirality = Chirality::kCounterClockwise;
      }
      if (peek() == 'T' || peek() == 'A' || peek() == 'S' || peek() == 'O') {
        bad("only @ and @@ chirality tags are supported");
      }
    }

    if (peek() == 'H') {
      ++pos_;
      a.explicit_h = number(1).value_or(1);
    }

    if (peek() == '+' || peek() == '-') {
      const char sign = peek();
      ++pos_;
      int magnitude = 1;
      if (auto n = number(2)) {
        magnitude = *n;
      } else {
        while (peek() == sign) {
          ++pos_;
          ++magnitude;
        }
      }
      if (magnitude > 15) bad("charge out of range");
      a.charge = sign == '+' ? magnitude : -magnitude;
    }

    if (peek() == ':') {
      ++pos_;
      auto cls = number(8);
      if (!cls) bad("atom class needs digits");
      a.atom_class = *cls;
    }

    if (pos_ >= s_.size()) bad("unterminated bracket atom");
    if (peek() != ']') bad(std::string("unexpected '") + peek() + "'");
    ++pos_;
    if (a.aromatic && !can_be_aromatic(a.element)) bad("element cannot be aromatic");
    return a;
  }

  void bond_symbol() {
    if (pending_) fail(SmilesErrorKind::kSyntax, "consecutive bond symbols", pos_);
    if (prev_ < 0) {
      fail(SmilesErrorKind::kSyntax, "bond without a preceding atom", pos_);
    }
    PendingBond b;
    b.position = pos_;
    switch (s_[pos_]) {
      case '-':
        b.order = BondOrder::kSingle;
        break;
      case '=':
        b.order = BondOrder::kDouble;
        break;
      case '#':
        b.order = BondOrder::kTriple;
        break;
      case '$':
        b.order = BondOrder::kQuadruple;
        break;
      case ':':
        b.order = BondOrder::kAromatic;
        break;
      case '/':
        b.direction = BondDirection::kUp;
        break;
      case '\\':
        b.direction = BondDirection::kDown;
        break;
    }
    before_bond_ = last_;
    pending_ = b;
    last_ = Last::kBond;
    ++pos_;
  }

  void ring_closure() {
    const std::size_t start = pos_;
    const bool after_atom =
        last_ == Last::kAtom || last_ == Last::kRing ||
        (last_ == Last::kBond &&
         (before_bond_ == Last::kAtom || before_bond_ == Last::kRing));
    if (!after_atom) {
      fail(SmilesErrorKind::kSyntax, "ring closure must follow an atom", pos_);
    }
    int label;
    if (s_[pos_] == '%') {
      ++pos_;
      if (pos_ + 2 > s_.size() || !is_digit(s_[pos_]) ||
          !is_digit(s_[pos_ + 1])) {
        fail(SmilesErrorKind::kSyntax, "'%' must be followed by two digits",
             start);
      }
      label = (s_[pos_] - '0') * 10 + (s_[pos_ + 1] - '0');
      pos_ += 2;
    } else {
      label = s_[pos_] - '0';
      ++pos_;
    }

    auto& slot = rings_[static_cast<std::size_t>(label)];
    if (slot.atom < 0) {
      slot.atom = prev_;
      slot.bond = pending_;
      slot.position = start;
      ++open_rings_;
    } else {
      const int opener = slot.atom;
      if (opener == prev_) {
        fail(SmilesErrorKind::kSyntax, "ring closure onto the same atom", start);
      }
      if (out_.molecule.find_bond(opener, prev_)) {
        fail(SmilesErrorKind::kSyntax, "duplicate bond", start);
      }
      if (slot.bond && pending_ && slot.bond->order != pending_->order) {
        fail(SmilesErrorKind::kSyntax, "conflicting ring-closure bond symbols",
             start);
      }
      if (slot.bond) {
        connect(opener, prev_, slot.bond, start);
      } else if (pending_) {
        connect(prev_, opener, pending_, start);
      } else {
        connect(opener, prev_, std::nullopt, start);
      }
      slot = OpenRing{};
      --open_rings_;
    }
    pending_.reset();
    last_ = Last::kRing;
  }

  void branch_open() {
    if (prev_ < 0 || !(last_ == Last::kAtom || last_ == Last::kRing ||
                       last_ == Last::kBranchClose)) {
      fail(SmilesErrorKind::kSyntax, "branch must follow an atom", pos_);
    }
    branches_.push_back({prev_, pos_});
    last_ = Last::kBranchOpen;
    ++pos_;
  }

  void branch_close() {
    if (branches_.empty()) {
      fail(SmilesErrorKind::kUnbalancedParens, "unmatched ')'", pos_);
    }
    if (pending_) {
      fail(SmilesErrorKind::kSyntax, "bond without a following atom",
           pending_->position);
    }
    if (last_ == Last::kBranchOpen) {
      fail(SmilesErrorKind::kSyntax, "empty branch", pos_);
    }
    prev_ = branches_.back().first;
    branches_.pop_back();
    last_ = Last::kBranchClose;
    ++pos_;
  }

  void dot() {
    if (pending_) {
      fail(SmilesErrorKind::kSyntax, "bond without a following atom",
           pending_->position);
    }
    if (prev_ < 0) fail(SmilesErrorKind::kSyntax, "empty component", pos_);
    if (!branches_.empty()) {
      fail(SmilesErrorKind::kSyntax, "'.' inside a branch", pos_);
    }
    prev_ = -1;
    last_ = Last::kDot;
    ++pos_;
  }

  void finish() {
    if (pending_) {
      fail(SmilesErrorKind::kSyntax, "bond without a following atom",
           pending_->position);
    }
    if (!branches_.empty()) {
      fail(SmilesErrorKind::kUnbalancedParens, "unclosed '('",
           branches_.back().second);
    }
    if (open_rings_ > 0) {
      std::size_t first = s_.size();
      for (const auto& r : rings_) {
        if (r.atom >= 0) first = std::min(first, r.position);
      }
      fail(SmilesErrorKind::kUnclosedRing, "ring bond never closed", first);
    }
    if (last_ == Last::kDot) {
      fail(SmilesErrorKind::kSyntax, "empty component", s_.size() - 1);
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  ParsedSmiles out_;
  int prev_ = -1;
  Last last_ = Last::kStart;
  Last before_bond_ = Last::kStart;
  std::optional<PendingBond> pending_;
  std::vector<std::pair<int, std::size_t>> branches_;
  std::array<OpenRing, 100> rings_{};
  int open_rings_ = 0;
};

}  // namespace

ParsedSmiles parse_with_offsets(std::string_view smiles) {
  return Parser(smiles).run();
}

}  // namespace detail

Molecule parse_smiles(std::string_view smiles) {
  return detail::parse_with_offsets(smiles).molecule;
}

ValidityReport validate_smiles(std::string_view smiles, bool strict,
                               const ValenceTable& valences) {
  ValidityReport report;
  detail::ParsedSmiles parsed;
  try {
    parsed = detail::parse_with_offsets(smiles);
  } catch (const SmilesError& e) {
    report.valid = false;
    report.error_kind = e.kind();
    report.error_position = e.position();
    report.message = e.what();
    return report;
  }
  if (!strict) return report;

  const Molecule& m = parsed.molecule;
  for (int i = 0; i < m.atom_count(); ++i) {
    const Atom& a = m.atom(i);
    if (a.needs_brackets() || a.is_wildcard) continue;
    const auto allowed = valences.allowed(a.element);
    if (allowed.empty()) continue;
    const int used = bond_valence(m, i);
    if (used > allowed.back()) {
      report.valid = false;
      report.error_kind = SmilesErrorKind::kValence;
      report.error_position = parsed.atom_offsets[static_cast<std::size_t>(i)];
      report.message = "valence: " + a.element + " with valence " +
                       std::to_string(used) + " at offset " +
                       std::to_string(*report.error_position);
      return report;
    }
  }
  return report;
}

}  // namespace smipe
