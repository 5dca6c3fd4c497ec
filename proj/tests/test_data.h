#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "smipe/io.h"

#ifndef SMIPE_TEST_DATA_DIR
#error "SMIPE_TEST_DATA_DIR must point at tests/data"
#endif

inline std::filesystem::path test_data(const std::string& name) {
  return std::filesystem::path(SMIPE_TEST_DATA_DIR) / name;
}

// Every bundled SMILES file, in a fixed order.
inline std::vector<std::string> bundled_corpus() {
  std::vector<std::string> out;
  for (const char* name : {"chembl_drugs.smi", "freesolv.smi"}) {
    auto part = smipe::read_records(test_data(name), smipe::RecordFormat::kLines, "");
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}
