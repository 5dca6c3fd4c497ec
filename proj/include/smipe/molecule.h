#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace smipe {

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kQuadruple = 4,
  kAromatic = 5,
};

// Directional single bond marker, stored relative to Bond::begin -> end.
// kUp is '/', kDown is '\'.
enum class BondDirection : std::uint8_t { kNone, kUp, kDown };

// @ is counter-clockwise, @@ clockwise. Tags are carried verbatim; nothing
// in the toolkit interprets them geometrically.
enum class Chirality : std::uint8_t { kNone, kCounterClockwise, kClockwise };

BondDirection flip(BondDirection d);

struct Atom {
  // Element symbol in its conventional case ("C", "Cl", "Se"), or "*".
  std::string element;
  bool aromatic = false;
  std::optional<int> isotope;
  int charge = 0;
  // Hydrogen count written inside brackets. Always set for bracket atoms
  // (0 when omitted), never set for organic-subset shorthand atoms.
  std::optional<int> explicit_h;
  Chirality chirality = Chirality::kNone;
  std::optional<int> atom_class;
  bool is_wildcard = false;

  // True when the atom cannot be written as an organic-subset shorthand.
  bool needs_brackets() const;

  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Bond {
  int begin = -1;
  int end = -1;
  BondOrder order = BondOrder::kSingle;
  BondDirection direction = BondDirection::kNone;

  int other(int atom) const { return atom == begin ? end : begin; }
  // The direction marker as it reads when travelling away from `from`.
  BondDirection direction_from(int from) const {
    return from == begin ? direction : flip(direction);
  }
};

class Molecule {
 public:
  // Throws std::invalid_argument on self-loops, duplicate bonds or
  // out-of-range endpoints.
  int add_atom(Atom atom);
  int add_bond(int a, int b, BondOrder order,
               BondDirection direction = BondDirection::kNone);

  std::span<const Atom> atoms() const { return atoms_; }
  std::span<const Bond> bonds() const { return bonds_; }
  const Atom& atom(int i) const { return atoms_[static_cast<std::size_t>(i)]; }
  const Bond& bond(int i) const { return bonds_[static_cast<std::size_t>(i)]; }
  int atom_count() const { return static_cast<int>(atoms_.size()); }
  int bond_count() const { return static_cast<int>(bonds_.size()); }
  bool empty() const { return atoms_.empty(); }

  // Indices of bonds touching `atom`, in insertion order.
  std::span<const int> incident_bonds(int atom) const {
    return adjacency_[static_cast<std::size_t>(atom)];
  }
  int degree(int atom) const {
    return static_cast<int>(incident_bonds(atom).size());
  }
  std::optional<int> find_bond(int a, int b) const;

  // Number of connected fragments.
  int components() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<int>> adjacency_;
};

// Organic-subset membership: B C N O P S F Cl Br I, aromatic b c n o p s.
bool is_organic_subset(std::string_view element, bool aromatic);

// Any symbol from the periodic table (conventional case).
bool is_element_symbol(std::string_view symbol);

// Elements that may be written in lowercase aromatic form.
bool can_be_aromatic(std::string_view element);

// Allowed valences for organic-subset elements. Atoms whose element has no
// entry are unrestricted.
class ValenceTable {
 public:
  // B:3 C:4 N:3,5 O:2 P:3,5 S:2,4,6 F/Cl/Br/I:1.
  static const ValenceTable& standard();

  void set(std::string element, std::vector<int> valences);
  // Empty span when the element is unrestricted. Sorted ascending.
  std::span<const int> allowed(std::string_view element) const;

 private:
  std::vector<std::pair<std::string, std::vector<int>>> entries_;
};

// Sum of bond orders around `atom`, counting aromatic bonds as 1 and adding
// one for an aromatic atom with no exocyclic double or triple bond.
int bond_valence(const Molecule& m, int atom);

// Hydrogen count: the bracket count for bracket atoms, otherwise the implicit
// count implied by the default valence of the organic-subset element.
int hydrogen_count(const Molecule& m, int atom);

// Atoms that lie on at least one cycle (incident to a non-bridge bond).
std::vector<bool> ring_atoms(const Molecule& m);

}  // namespace smipe
