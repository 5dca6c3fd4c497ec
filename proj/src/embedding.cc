#include "smipe/embedding.h"

#include <bit>
#include <cstring>

#include "smipe/error.h"
#include "smipe/io.h"
#include "smipe/vocab_extension.h"

namespace smipe {

static_assert(std::endian::native == std::endian::little,
              "EMB1 (de)serialization assumes a little-endian host");
static_assert(sizeof(float) == 4);

namespace {
constexpr std::string_view kMagic = "EMB1";
constexpr std::size_t kHeaderSize = 4 + 8 + 8;
}  // namespace

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0f) {}

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t cols,
                                 std::vector<float> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw FormatError("embedding matrix expects " + std::to_string(rows * cols) +
                      " values, got " + std::to_string(values_.size()));
  }
}

std::string EmbeddingMatrix::serialize() const {
  std::string out(kHeaderSize + values_.size() * 4, '\0');
  std::memcpy(out.data(), kMagic.data(), 4);
  const std::uint64_t r = rows_;
  const std::uint64_t c = cols_;
  std::memcpy(out.data() + 4, &r, 8);
  std::memcpy(out.data() + 12, &c, 8);
  if (!values_.empty()) {
    std::memcpy(out.data() + kHeaderSize, values_.data(), values_.size() * 4);
  }
  return out;
}

EmbeddingMatrix EmbeddingMatrix::deserialize(std::string_view bytes) {
  if (bytes.size() < kHeaderSize || bytes.substr(0, 4) != kMagic) {
    throw FormatError("not an EMB1 embedding file");
  }
  std::uint64_t rows;
  std::uint64_t cols;
  std::memcpy(&rows, bytes.data() + 4, 8);
  std::memcpy(&cols, bytes.data() + 12, 8);
  if (cols != 0 && rows > (bytes.size() - kHeaderSize) / 4 / cols) {
    throw FormatError("embedding file is truncated");
  }
  const std::size_t count = rows * cols;
  if (bytes.size() != kHeaderSize + count * 4) {
    throw FormatError("embedding file size does not match its header");
  }
  std::vector<float> values(count);
  if (count) std::memcpy(values.data(), bytes.data() + kHeaderSize, count * 4);
  return EmbeddingMatrix(rows, cols, std::move(values));
}

void EmbeddingMatrix::save(const std::filesystem::path& path) const {
  write_file(path, serialize());
}

EmbeddingMatrix EmbeddingMatrix::load(const std::filesystem::path& path) {
  return deserialize(read_file(path));
}

EmbeddingMatrix extend_embeddings(const EmbeddingMatrix& matrix,
                                  const ExtensionPlan& plan) {
  if (matrix.rows() != plan.base_vocab_size) {
    throw Error("embedding matrix has " + std::to_string(matrix.rows()) +
                " rows but the plan expects " +
                std::to_string(plan.base_vocab_size));
  }
  const std::size_t added = plan.entries.size();
  if (added == 0) return matrix;
  if (matrix.rows() == 0) throw Error("cannot average an empty embedding matrix");

  const std::size_t cols = matrix.cols();
  std::vector<double> sum(cols, 0.0);
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    const auto row = matrix.row(r);
    for (std::size_t c = 0; c < cols; ++c) sum[c] += row[c];
  }
  std::vector<float> mean(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    mean[c] = static_cast<float>(sum[c] / static_cast<double>(matrix.rows()));
  }

  std::vector<float> values(matrix.values().begin(), matrix.values().end());
  values.reserve((matrix.rows() + added) * cols);
  for (std::size_t i = 0; i < added; ++i) {
    values.insert(values.end(), mean.begin(), mean.end());
  }
  return EmbeddingMatrix(matrix.rows() + added, cols, std::move(values));
}

}  // namespace smipe
