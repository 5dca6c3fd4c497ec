#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "smipe/smiles.h"

namespace smipe {

enum class UnitKind {
  kAtom,
  kBracketAtom,
  kBond,
  kRingDigit,
  kBranchOpen,
  kBranchClose,
  kDot,
  kWildcard,
};

std::string_view to_string(UnitKind kind);

struct SmilesUnit {
  std::string text;
  UnitKind kind;

  friend bool operator==(const SmilesUnit&, const SmilesUnit&) = default;
};

// Identifier stored in model files for this unit scheme.
inline constexpr std::string_view kAtomPretokenizerId = "smiles-atom-v1";

// Splits a SMILES string into atom-level units. Matching precedence: bracket
// atom, %nn ring label, Cl, Br, then single characters. Throws SmilesError
// (kind syntax) for characters outside the alphabet or an unterminated '['.
std::vector<SmilesUnit> atom_tokenize(std::string_view smiles);

// Same split, text only.
std::vector<std::string> atom_units(std::string_view smiles);

// Kind of a unit given its text alone; throws SmilesError if `text` is not a
// single unit.
UnitKind classify_unit(std::string_view text);

}  // namespace smipe
