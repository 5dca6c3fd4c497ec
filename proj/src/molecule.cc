#include "smipe/molecule.h"

#include <algorithm>
#include <array>
#include <functional>
#include <stdexcept>

namespace smipe {

namespace {

constexpr std::array<std::string_view, 118> kElements = {
    "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg",
    "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr",
    "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr",
    "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd",
    "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
    "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf",
    "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po",
    "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm",
    "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs",
    "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};

int order_value(BondOrder order) {
  switch (order) {
    case BondOrder::kSingle:
    case BondOrder::kAromatic:
      return 1;
    case BondOrder::kDouble:
      return 2;
    case BondOrder::kTriple:
      return 3;
    case BondOrder::kQuadruple:
      return 4;
  }
  return 1;
}

}  // namespace

BondDirection flip(BondDirection d) {
  switch (d) {
    case BondDirection::kUp:
      return BondDirection::kDown;
    case BondDirection::kDown:
      return BondDirection::kUp;
    case BondDirection::kNone:
      break;
  }
  return BondDirection::kNone;
}

bool Atom::needs_brackets() const {
  return isotope.has_value() || charge != 0 || explicit_h.has_value() ||
         chirality != Chirality::kNone || atom_class.has_value() ||
         !(is_wildcard || is_organic_subset(element, aromatic));
}

int Molecule::add_atom(Atom atom) {
  atoms_.push_back(std::move(atom));
  adjacency_.emplace_back();
  return atom_count() - 1;
}

int Molecule::add_bond(int a, int b, BondOrder order, BondDirection direction) {
  if (a < 0 || b < 0 || a >= atom_count() || b >= atom_count()) {
    throw std::invalid_argument("bond endpoint out of range");
  }
  if (a == b) throw std::invalid_argument("bond from an atom to itself");
  if (find_bond(a, b)) throw std::invalid_argument("duplicate bond");
  bonds_.push_back(Bond{a, b, order, direction});
  const int index = bond_count() - 1;
  adjacency_[static_cast<std::size_t>(a)].push_back(index);
  adjacency_[static_cast<std::size_t>(b)].push_back(index);
  return index;
}

std::optional<int> Molecule::find_bond(int a, int b) const {
  for (int bi : incident_bonds(a)) {
    if (bond(bi).other(a) == b) return bi;
  }
  return std::nullopt;
}

int Molecule::components() const {
  std::vector<bool> seen(atoms_.size(), false);
  std::vector<int> stack;
  int count = 0;
  for (int start = 0; start < atom_count(); ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    ++count;
    seen[static_cast<std::size_t>(start)] = true;
    stack.push_back(start);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int bi : incident_bonds(u)) {
        const int v = bond(bi).other(u);
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = true;
          stack.push_back(v);
        }
      }
    }
  }
  return count;
}

bool is_organic_subset(std::string_view element, bool aromatic) {
  static constexpr std::array<std::string_view, 6> kAromatic = {
      "B", "C", "N", "O", "P", "S"};
  static constexpr std::array<std::string_view, 10> kAliphatic = {
      "B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"};
  if (aromatic) {
    return std::find(kAromatic.begin(), kAromatic.end(), element) !=
           kAromatic.end();
  }
  return std::find(kAliphatic.begin(), kAliphatic.end(), element) !=
         kAliphatic.end();
}

bool is_element_symbol(std::string_view symbol) {
  return std::find(kElements.begin(), kElements.end(), symbol) !=
         kElements.end();
}

bool can_be_aromatic(std::string_view element) {
  static constexpr std::array<std::string_view, 8> kAromatic = {
      "B", "C", "N", "O", "P", "S", "Se", "As"};
  return std::find(kAromatic.begin(), kAromatic.end(), element) !=
         kAromatic.end();
}

const ValenceTable& ValenceTable::standard() {
  static const ValenceTable table = [] {
    ValenceTable t;
    t.set("B", {3});
    t.set("C", {4});
    t.set("N", {3, 5});
    t.set("O", {2});
    t.set("P", {3, 5});
    t.set("S", {2, 4, 6});
    for (const char* halogen : {"F", "Cl", "Br", "I"}) t.set(halogen, {1});
    return t;
  }();
  return table;
}

void ValenceTable::set(std::string element, std::vector<int> valences) {
  std::sort(valences.begin(), valences.end());
  for (auto& [name, allowed] : entries_) {
    if (name == element) {
      allowed = std::move(valences);
      return;
    }
  }
  entries_.emplace_back(std::move(element), std::move(valences));
}

std::span<const int> ValenceTable::allowed(std::string_view element) const {
  for (const auto& [name, valences] : entries_) {
    if (name == element) return valences;
  }
  return {};
}

int bond_valence(const Molecule& m, int atom) {
  int total = 0;
  bool multiple = false;
  for (int bi : m.incident_bonds(atom)) {
    const Bond& b = m.bond(bi);
    total += order_value(b.order);
    if (b.order == BondOrder::kDouble || b.order == BondOrder::kTriple ||
        b.order == BondOrder::kQuadruple) {
      multiple = true;
    }
  }
  if (m.atom(atom).aromatic && !multiple) ++total;
  return total;
}

int hydrogen_count(const Molecule& m, int atom) {
  const Atom& a = m.atom(atom);
  if (a.explicit_h) return *a.explicit_h;
  if (a.is_wildcard) return 0;
  const auto allowed = ValenceTable::standard().allowed(a.element);
  if (allowed.empty()) return 0;
  const int used = bond_valence(m, atom);
  if (a.aromatic) return std::max(0, allowed.front() - used);
  for (int v : allowed) {
    if (v >= used) return v - used;
  }
  return 0;
}

std::vector<bool> ring_atoms(const Molecule& m) {
  // Tarjan bridge finding; a bond is in a ring iff it is not a bridge.
  const auto n = static_cast<std::size_t>(m.atom_count());
  std::vector<int> disc(n, -1);
  std::vector<int> low(n, 0);
  std::vector<bool> in_ring(n, false);
  int timer = 0;

  std::function<void(int, int)> visit = [&](int u, int parent_bond) {
    disc[static_cast<std::size_t>(u)] = low[static_cast<std::size_t>(u)] =
        timer++;
    for (int bi : m.incident_bonds(u)) {
      if (bi == parent_bond) continue;
      const int v = m.bond(bi).other(u);
      const auto vu = static_cast<std::size_t>(v);
      const auto uu = static_cast<std::size_t>(u);
      if (disc[vu] == -1) {
        visit(v, bi);
        low[uu] = std::min(low[uu], low[vu]);
        if (low[vu] <= disc[uu]) {
          in_ring[uu] = true;
          in_ring[vu] = true;
        }
      } else {
        low[uu] = std::min(low[uu], disc[vu]);
        in_ring[uu] = true;
        in_ring[vu] = true;
      }
    }
  };
  for (int u = 0; u < m.atom_count(); ++u) {
    if (disc[static_cast<std::size_t>(u)] == -1) visit(u, -1);
  }
  return in_ring;
}

}  // namespace smipe
