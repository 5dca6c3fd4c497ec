#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <numeric>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "smipe/parallel.h"
#include "smipe/random.h"
#include "smipe/smiles.h"

namespace smipe {
namespace {

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

std::string atom_text(const Atom& a) {
  std::string symbol = a.element;
  if (a.aromatic) {
    for (char& ch : symbol) ch = static_cast<char>(std::tolower(ch));
  }
  if (!a.needs_brackets()) return symbol;

  std::string out = "[";
  if (a.isotope) out += std::to_string(*a.isotope);
  out += symbol;
  if (a.chirality == Chirality::kCounterClockwise) out += "@";
  if (a.chirality == Chirality::kClockwise) out += "@@";
  const int h = a.explicit_h.value_or(0);
  if (h > 0) {
    out += "H";
    if (h > 1) out += std::to_string(h);
  }
  if (a.charge != 0) {
    out += a.charge > 0 ? "+" : "-";
    const int magnitude = a.charge > 0 ? a.charge : -a.charge;
    if (magnitude > 1) out += std::to_string(magnitude);
  }
  if (a.atom_class) out += ":" + std::to_string(*a.atom_class);
  out += "]";
  return out;
}

std::string bond_text(const Molecule& m, const Bond& b, int from) {
  switch (b.direction_from(from)) {
    case BondDirection::kUp:
      return "/";
    case BondDirection::kDown:
      return "\\";
    case BondDirection::kNone:
      break;
  }
  const bool both_aromatic = m.atom(b.begin).aromatic && m.atom(b.end).aromatic;
  switch (b.order) {
    case BondOrder::kSingle:
      return both_aromatic ? "-" : "";
    case BondOrder::kDouble:
      return "=";
    case BondOrder::kTriple:
      return "#";
    case BondOrder::kQuadruple:
      return "$";
    case BondOrder::kAromatic:
      return both_aromatic ? "" : ":";
  }
  return "";
}

std::string ring_label(int digit) {
  if (digit < 10) return std::string(1, static_cast<char>('0' + digit));
  return "%" + std::to_string(digit);
}

// Orders the bonds leaving an atom; receives the atom and its candidate bonds
// (parent bond excluded) and permutes them in place.
using NeighbourOrder = std::function<void(int, std::vector<int>&)>;

class Writer {
 public:
  Writer(const Molecule& m, NeighbourOrder order)
      : m_(m),
        order_(std::move(order)),
        visited_(static_cast<std::size_t>(m.atom_count()), false),
        classified_(static_cast<std::size_t>(m.bond_count()), false),
        children_(static_cast<std::size_t>(m.atom_count())),
        opens_(static_cast<std::size_t>(m.atom_count())),
        closes_(static_cast<std::size_t>(m.atom_count())),
        digit_(static_cast<std::size_t>(m.bond_count()), 0) {}

  // Emits every component, rooting each at the first unvisited atom of
  // `roots`. `emitted` receives atoms in output order.
  std::string write(std::span<const int> roots, std::vector<int>* emitted) {
    std::string out;
    for (int root : roots) {
      if (visited_[static_cast<std::size_t>(root)]) continue;
      plan(root, -1);
      if (!out.empty()) out += '.';
      emit(root, -1, out, emitted);
    }
    return out;
  }

 private:
  // First pass: fixes the spanning tree and the ring-closure bonds.
  void plan(int u, int parent_bond) {
    visited_[static_cast<std::size_t>(u)] = true;
    std::vector<int> candidates;
    for (int bi : m_.incident_bonds(u)) {
      if (bi != parent_bond) candidates.push_back(bi);
    }
    order_(u, candidates);
    for (int bi : candidates) {
      if (classified_[static_cast<std::size_t>(bi)]) continue;
      classified_[static_cast<std::size_t>(bi)] = true;
      const int v = m_.bond(bi).other(u);
      if (!visited_[static_cast<std::size_t>(v)]) {
        children_[static_cast<std::size_t>(u)].push_back(bi);
        plan(v, bi);
      } else {
        // v was written earlier: it opens the ring, u closes it.
        opens_[static_cast<std::size_t>(v)].push_back(bi);
        closes_[static_cast<std::size_t>(u)].push_back(bi);
      }
    }
  }

  int take_digit() {
    for (int d = 1; d < static_cast<int>(in_use_.size()); ++d) {
      if (!in_use_[static_cast<std::size_t>(d)]) {
        in_use_[static_cast<std::size_t>(d)] = true;
        return d;
      }
    }
    throw Error("more than 99 simultaneously open ring closures");
  }

  void emit(int u, int via, std::string& out, std::vector<int>* emitted) {
    const auto uu = static_cast<std::size_t>(u);
    if (via >= 0) {
      const Bond& b = m_.bond(via);
      out += bond_text(m_, b, b.other(u));
    }
    out += atom_text(m_.atom(u));
    if (emitted) emitted->push_back(u);

    for (int bi : closes_[uu]) out += ring_label(digit_[static_cast<std::size_t>(bi)]);
    for (int bi : opens_[uu]) {
      const int d = take_digit();
      digit_[static_cast<std::size_t>(bi)] = d;
      out += bond_text(m_, m_.bond(bi), u);
      out += ring_label(d);
    }
    for (int bi : closes_[uu]) {
      in_use_[static_cast<std::size_t>(digit_[static_cast<std::size_t>(bi)])] =
          false;
    }

    const auto& kids = children_[uu];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const int v = m_.bond(kids[i]).other(u);
      if (i + 1 < kids.size()) {
        out += '(';
        emit(v, kids[i], out, emitted);
        out += ')';
      } else {
        emit(v, kids[i], out, emitted);
      }
    }
  }

  const Molecule& m_;
  NeighbourOrder order_;
  std::vector<bool> visited_;
  std::vector<bool> classified_;
  std::vector<std::vector<int>> children_;
  std::vector<std::vector<int>> opens_;
  std::vector<std::vector<int>> closes_;
  std::vector<int> digit_;
  std::array<bool, 100> in_use_{};
};

// Writes `m` with atoms and neighbours visited in ascending `rank` order.
std::string write_ranked(const Molecule& m, const std::vector<int>& rank,
                         std::vector<int>* emitted) {
  std::vector<int> roots(static_cast<std::size_t>(m.atom_count()));
  std::iota(roots.begin(), roots.end(), 0);
  std::sort(roots.begin(), roots.end(), [&](int a, int b) {
    return rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(b)];
  });
  Writer writer(m, [&](int u, std::vector<int>& bonds) {
    std::sort(bonds.begin(), bonds.end(), [&](int x, int y) {
      return rank[static_cast<std::size_t>(m.bond(x).other(u))] <
             rank[static_cast<std::size_t>(m.bond(y).other(u))];
    });
  });
  return writer.write(roots, emitted);
}

// ---------------------------------------------------------------------------
// Canonical labelling: invariant refinement plus individualization search.
// ---------------------------------------------------------------------------

struct AtomInvariant {
  std::string element;
  bool aromatic;
  int isotope;
  int charge;
  int explicit_h;
  int chirality;
  int atom_class;
  bool wildcard;
  int degree;
  int hydrogens;

  auto operator<=>(const AtomInvariant&) const = default;
};

// Ranks are "number of atoms with a strictly smaller key", so tied atoms share
// a rank and individualizing one atom of a cell just bumps the others by one.
template <typename Key>
std::vector<int> rank_by(const std::vector<Key>& keys) {
  std::vector<int> idx(keys.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)];
  });
  std::vector<int> rank(keys.size(), 0);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto cur = static_cast<std::size_t>(idx[i]);
    if (i > 0 && !(keys[static_cast<std::size_t>(idx[i - 1])] < keys[cur])) {
      rank[cur] = rank[static_cast<std::size_t>(idx[i - 1])];
    } else {
      rank[cur] = static_cast<int>(i);
    }
  }
  return rank;
}

int count_classes(const std::vector<int>& rank) {
  std::vector<int> sorted = rank;
  std::sort(sorted.begin(), sorted.end());
  return static_cast<int>(std::unique(sorted.begin(), sorted.end()) -
                          sorted.begin());
}

class Canonicalizer {
 public:
  explicit Canonicalizer(const Molecule& m) : m_(m) {}

  void run() {
    const auto n = static_cast<std::size_t>(m_.atom_count());
    std::vector<AtomInvariant> keys;
    keys.reserve(n);
    for (int i = 0; i < m_.atom_count(); ++i) {
      const Atom& a = m_.atom(i);
      keys.push_back({a.element, a.aromatic, a.isotope.value_or(-1), a.charge,
                      a.explicit_h.value_or(-1), static_cast<int>(a.chirality),
                      a.atom_class.value_or(-1), a.is_wildcard, m_.degree(i),
                      hydrogen_count(m_, i)});
    }
    std::vector<int> path;
    search(rank_by(keys), path);
  }

  const std::string& smiles() const { return best_; }
  const std::vector<int>& ranks() const { return best_rank_; }

 private:
  static constexpr std::size_t kLeafBudget = 4096;

  std::vector<int> refine(std::vector<int> rank) const {
    int classes = count_classes(rank);
    const auto n = static_cast<std::size_t>(m_.atom_count());
    while (classes < static_cast<int>(n)) {
      using Neighbour = std::pair<int, int>;  // (bond code, neighbour rank)
      std::vector<std::pair<int, std::vector<Neighbour>>> keys(n);
      for (int u = 0; u < m_.atom_count(); ++u) {
        auto& key = keys[static_cast<std::size_t>(u)];
        key.first = rank[static_cast<std::size_t>(u)];
        for (int bi : m_.incident_bonds(u)) {
          const Bond& b = m_.bond(bi);
          const int code = static_cast<int>(b.order) * 3 +
                           static_cast<int>(b.direction_from(u));
          key.second.emplace_back(code,
                                  rank[static_cast<std::size_t>(b.other(u))]);
        }
        std::sort(key.second.begin(), key.second.end());
      }
      std::vector<int> next = rank_by(keys);
      const int next_classes = count_classes(next);
      rank = std::move(next);
      if (next_classes == classes) break;
      classes = next_classes;
    }
    return rank;
  }

  // Generators found so far that fix every atom in `path` generate a subgroup
  // of the stabilizer; candidates in one of its orbits give identical subtrees.
  bool equivalent_to_explored(int v, const std::vector<int>& explored,
                              const std::vector<int>& path) const {
    const auto n = static_cast<std::size_t>(m_.atom_count());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] =
            parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
      }
      return x;
    };
    bool any = false;
    for (const auto& gen : automorphisms_) {
      const bool fixes_path = std::all_of(path.begin(), path.end(), [&](int p) {
        return gen[static_cast<std::size_t>(p)] == p;
      });
      if (!fixes_path) continue;
      any = true;
      for (std::size_t i = 0; i < n; ++i) {
        const int a = find(static_cast<int>(i));
        const int b = find(gen[i]);
        if (a != b) parent[static_cast<std::size_t>(a)] = b;
      }
    }
    if (!any) return false;
    const int root = find(v);
    return std::any_of(explored.begin(), explored.end(),
                       [&](int u) { return find(u) == root; });
  }

  void leaf(const std::vector<int>& rank) {
    ++leaves_;
    std::vector<int> order;
    std::string s = write_ranked(m_, rank, &order);
    auto [it, inserted] = seen_.try_emplace(s, order);
    if (!inserted) {
      // Same string from two labellings: map atom at output position p in the
      // first to the atom at position p in the second.
      std::vector<int> gen(rank.size());
      for (std::size_t p = 0; p < order.size(); ++p) {
        gen[static_cast<std::size_t>(it->second[p])] = order[p];
      }
      automorphisms_.push_back(std::move(gen));
    }
    if (best_rank_.empty() || s < best_) {
      best_ = std::move(s);
      best_rank_ = rank;
    }
  }

  void search(std::vector<int> rank, std::vector<int>& path) {
    if (leaves_ >= kLeafBudget) return;
    rank = refine(std::move(rank));
    const auto n = rank.size();

    // Smallest rank value shared by more than one atom.
    std::vector<int> count(n, 0);
    for (int r : rank) ++count[static_cast<std::size_t>(r)];
    int cell = -1;
    for (std::size_t r = 0; r < n; ++r) {
      if (count[r] > 1) {
        cell = static_cast<int>(r);
        break;
      }
    }
    if (cell < 0) {
      leaf(rank);
      return;
    }

    std::vector<int> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (rank[i] == cell) members.push_back(static_cast<int>(i));
    }
    std::vector<int> explored;
    for (int v : members) {
      if (leaves_ >= kLeafBudget) return;
      if (equivalent_to_explored(v, explored, path)) continue;
      std::vector<int> child = rank;
      for (int u : members) {
        if (u != v) child[static_cast<std::size_t>(u)] = cell + 1;
      }
      path.push_back(v);
      search(std::move(child), path);
      path.pop_back();
      explored.push_back(v);
    }
  }

  const Molecule& m_;
  std::string best_;
  std::vector<int> best_rank_;
  std::unordered_map<std::string, std::vector<int>> seen_;
  std::vector<std::vector<int>> automorphisms_;
  std::size_t leaves_ = 0;
};

}  // namespace

std::vector<int> canonical_ranks(const Molecule& m) {
  if (m.empty()) return {};
  Canonicalizer c(m);
  c.run();
  return c.ranks();
}

std::string write_canonical(const Molecule& m) {
  if (m.empty()) return {};
  Canonicalizer c(m);
  c.run();
  return c.smiles();
}

std::string write_random(const Molecule& m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> roots(static_cast<std::size_t>(m.atom_count()));
  std::iota(roots.begin(), roots.end(), 0);
  fisher_yates(std::span<int>(roots), rng);
  Writer writer(m, [&](int, std::vector<int>& bonds) {
    fisher_yates(std::span<int>(bonds), rng);
  });
  return writer.write(roots, nullptr);
}

AugmentResult augment_corpus(std::span<const std::string> corpus,
                             std::uint64_t seed, bool strict, unsigned threads) {
  std::vector<std::optional<std::string>> variants(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t i) {
    if (!validate_smiles(corpus[i], strict).valid) return;
    variants[i] = write_random(parse_smiles(corpus[i]), derive_seed(seed, i));
  });

  AugmentResult result;
  result.n_input = corpus.size();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!variants[i]) {
      ++result.n_invalid;
      continue;
    }
    result.smiles.push_back(corpus[i]);
    result.smiles.push_back(std::move(*variants[i]));
  }
  return result;
}

}  // namespace smipe
