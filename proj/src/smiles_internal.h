#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "smipe/molecule.h"

namespace smipe::detail {

struct ParsedSmiles {
  Molecule molecule;
  // Offset of each atom's first character in the source string.
  std::vector<std::size_t> atom_offsets;
};

ParsedSmiles parse_with_offsets(std::string_view smiles);

}  // namespace smipe::detail
