#include <gtest/gtest.h>

#include "smipe/error.h"
#include "smipe/pretokenizer.h"
#include "smipe/smiles.h"
#include "test_data.h"

namespace {

using namespace smipe;
using Units = std::vector<std::string>;

std::string join(const Units& units) {
  std::string out;
  for (const auto& u : units) out += u;
  return out;
}

TEST(AtomTokenize, Examples) {
  EXPECT_EQ(atom_units("Cc1ccccc1"), (Units{"C", "c", "1", "c", "c", "c", "c", "c", "1"}));
  EXPECT_EQ(atom_units("N[C@@H](CCC(=O)O)C(=O)O"),
            (Units{"N", "[C@@H]", "(", "C", "C", "C", "(", "=", "O", ")", "O", ")", "C",
                   "(", "=", "O", ")", "O"}));
  EXPECT_EQ(atom_units("ClC(Cl)Cl"), (Units{"Cl", "C", "(", "Cl", ")", "Cl"}));
  EXPECT_EQ(atom_units("BrC%12CC%12"), (Units{"Br", "C", "%12", "C", "C", "%12"}));
  EXPECT_EQ(atom_units("[1*]N.*/C=C\\F#N$C:c"),
            (Units{"[1*]", "N", ".", "*", "/", "C", "=", "C", "\\", "F", "#", "N", "$",
                   "C", ":", "c"}));
  EXPECT_TRUE(atom_units("").empty());
}

TEST(AtomTokenize, Kinds) {
  const auto units = atom_tokenize("[NH4+]C(=O)1.*%10");
  std::vector<UnitKind> kinds;
  for (const auto& u : units) kinds.push_back(u.kind);
  EXPECT_EQ(kinds, (std::vector<UnitKind>{UnitKind::kBracketAtom, UnitKind::kAtom,
                                          UnitKind::kBranchOpen, UnitKind::kBond,
                                          UnitKind::kAtom, UnitKind::kBranchClose,
                                          UnitKind::kRingDigit, UnitKind::kDot,
                                          UnitKind::kWildcard, UnitKind::kRingDigit}));
  for (const auto& u : units) EXPECT_EQ(classify_unit(u.text), u.kind) << u.text;
}

TEST(AtomTokenize, Errors) {
  EXPECT_THROW(atom_units("C[NH4"), SmilesError);
  EXPECT_THROW(atom_units("CxC"), SmilesError);
  EXPECT_THROW(atom_units("C C"), SmilesError);
}

TEST(AtomTokenize, LosslessAndWellShapedOnCorpus) {
  for (const auto& s : bundled_corpus()) {
    const auto units = atom_tokenize(s);
    std::string joined;
    for (const auto& u : units) {
      joined += u.text;
      const bool has_bracket = u.text.find_first_of("[]") != std::string::npos;
      if (u.kind == UnitKind::kBracketAtom) {
        EXPECT_EQ(u.text.front(), '[');
        EXPECT_EQ(u.text.back(), ']');
        EXPECT_EQ(u.text.find('[', 1), std::string::npos);
      } else {
        EXPECT_FALSE(has_bracket) << u.text;
      }
      if (u.kind == UnitKind::kRingDigit) {
        EXPECT_TRUE((u.text.size() == 1 && std::isdigit(u.text[0])) ||
                    (u.text.size() == 3 && u.text[0] == '%'))
            << u.text;
      }
    }
    ASSERT_EQ(joined, s);
  }
}

}  // namespace
