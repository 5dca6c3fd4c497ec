#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smipe/molecule.h"

namespace smipe {

inline constexpr int kDefaultRadius = 2;
inline constexpr std::size_t kDefaultBits = 2048;

// Fixed-size bitset. Bit i lives in byte i / 8 at position i % 8 of the hex
// form, so hex output is independent of host word size.
class Fingerprint {
 public:
  Fingerprint() = default;
  // Throws std::invalid_argument unless nbits is a power of two >= 64.
  explicit Fingerprint(std::size_t nbits);
  static Fingerprint from_bits(std::size_t nbits, std::span<const std::size_t> bits);

  std::size_t nbits() const { return nbits_; }
  void set(std::size_t bit) { words_[bit / 64] |= std::uint64_t{1} << (bit % 64); }
  bool test(std::size_t bit) const { return (words_[bit / 64] >> (bit % 64)) & 1u; }
  std::size_t popcount() const;
  std::vector<std::size_t> on_bits() const;
  std::span<const std::uint64_t> words() const { return words_; }

  std::string to_hex() const;
  // Throws FormatError on odd length, bad digits or a bit count that is not
  // a valid size.
  static Fingerprint from_hex(std::string_view hex);

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;

 private:
  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

// FNV-1a over the little-endian bytes of each value, then the SplitMix64
// finalizer.
std::uint64_t stable_hash(std::span<const std::int64_t> values);

// codes[r][atom] is the environment code of `atom` at round r, r = 0..radius.
// Round 0 hashes (element, charge, degree, H count, aromatic, in ring); round
// r hashes (r, previous code, sorted (bond code, neighbour code) pairs).
std::vector<std::vector<std::uint64_t>> environment_codes(const Molecule& m,
                                                          int radius);

// Every code from every round sets bit code % nbits. Throws
// std::invalid_argument for radius < 0 or a bad nbits.
Fingerprint morgan_fingerprint(const Molecule& m, int radius = kDefaultRadius,
                               std::size_t nbits = kDefaultBits);

// |a & b| / |a | b|, 1.0 when both are empty. Throws std::invalid_argument on
// a size mismatch.
double tanimoto(const Fingerprint& a, const Fingerprint& b);

}  // namespace smipe
