#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smipe/error.h"
#include "smipe/molecule.h"

namespace smipe {

enum class SmilesErrorKind {
  kSyntax,
  kUnclosedRing,
  kUnbalancedParens,
  kBadBracketAtom,
  kValence,
};

std::string_view to_string(SmilesErrorKind kind);

class SmilesError : public PositionedError {
 public:
  SmilesError(SmilesErrorKind kind, const std::string& message,
              std::size_t position)
      : PositionedError(message, position), kind_(kind) {}

  SmilesErrorKind kind() const noexcept { return kind_; }

 private:
  SmilesErrorKind kind_;
};

struct ValidityReport {
  bool valid = true;
  std::optional<SmilesErrorKind> error_kind;
  std::optional<std::size_t> error_position;
  std::string message;
};

// Throws SmilesError. Ring closures (0-9 and %nn) become bonds; bonds written
// without a symbol are aromatic between two aromatic atoms, single otherwise.
Molecule parse_smiles(std::string_view smiles);

// Grammar check, plus default-valence limits on organic-subset atoms when
// `strict` is set. Bracket atoms and wildcards are never valence-checked.
ValidityReport validate_smiles(
    std::string_view smiles, bool strict,
    const ValenceTable& valences = ValenceTable::standard());

// Canonical atom ranks: isomorphic molecules with matching atom and bond
// attributes get the same ranking up to automorphism.
std::vector<int> canonical_ranks(const Molecule& m);

std::string write_canonical(const Molecule& m);

// A random valid serialization: random start atom and neighbour order at every
// step of the depth-first walk, fully determined by `seed`.
std::string write_random(const Molecule& m, std::uint64_t seed);

struct AugmentResult {
  std::vector<std::string> smiles;
  std::size_t n_input = 0;
  std::size_t n_invalid = 0;
};

// Drops invalid records and emits every valid one followed by one randomized
// variant. Per-record seeds are derived from `seed` and the record index, so
// the output does not depend on `threads`.
AugmentResult augment_corpus(std::span<const std::string> corpus,
                             std::uint64_t seed, bool strict = false,
                             unsigned threads = 1);

}  // namespace smipe
