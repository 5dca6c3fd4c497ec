#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace smipe {

struct ExtensionPlan;

// Row-major float32 matrix, one row per token.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::size_t rows, std::size_t cols);
  // Throws FormatError if values.size() != rows * cols.
  EmbeddingMatrix(std::size_t rows, std::size_t cols, std::vector<float> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const float> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<float> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  std::span<const float> values() const { return values_; }

  // "EMB1", rows (u64 LE), cols (u64 LE), rows*cols float32 LE.
  std::string serialize() const;
  static EmbeddingMatrix deserialize(std::string_view bytes);
  void save(const std::filesystem::path& path) const;
  static EmbeddingMatrix load(const std::filesystem::path& path);

  friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> values_;
};

// Appends one row per plan entry, each set to the column mean of all base
// rows (accumulated in double). Base rows are copied unchanged. Throws Error
// when matrix.rows() != plan.base_vocab_size.
EmbeddingMatrix extend_embeddings(const EmbeddingMatrix& matrix,
                                  const ExtensionPlan& plan);

}  // namespace smipe
